#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stylex {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedSnapshotError : public Error {
 public:
  using Error::Error;
};

class IncompleteObservationError : public Error {
 public:
  explicit IncompleteObservationError(std::string property)
      : Error("incomplete observation: missing or invalid property '" + property + "'"),
        property_(std::move(property)) {}

  const std::string& property() const noexcept { return property_; }

 private:
  std::string property_;
};

class EmptyClassError : public Error {
 public:
  using Error::Error;
};

class CannotSplitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Raised by crawl backends (simulated or live). The engine converts these into
// an incomplete crawl result.
class BackendError : public Error {
 public:
  using Error::Error;
};

class UnknownElementError : public BackendError {
 public:
  using BackendError::BackendError;
};

// The element addressed by a crawl action no longer exists in the page.
class StaleElementError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ConnectError : public BackendError {
 public:
  using BackendError::BackendError;
};

class NavigationError : public BackendError {
 public:
  using BackendError::BackendError;
};

class InjectionError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ProtocolError : public BackendError {
 public:
  ProtocolError(int code, const std::string& message)
      : BackendError("protocol error " + std::to_string(code) + ": " + message), code_(code) {}

  int code() const noexcept { return code_; }

 private:
  int code_;
};

}  // namespace stylex
