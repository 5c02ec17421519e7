#pragma once

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "stylex/error.hpp"

namespace stylex::ws {

// ws://host[:port]/path
struct Url {
  std::string host;
  std::uint16_t port = 80;
  std::string path = "/";
};

inline Url parse_url(std::string_view url) {
  constexpr std::string_view scheme = "ws://";
  if (url.substr(0, scheme.size()) != scheme) throw ConfigError("expected a ws:// URL, got '" + std::string(url) + "'");
  url.remove_prefix(scheme.size());
  Url out;
  auto slash = url.find('/');
  std::string_view authority = url.substr(0, slash);
  if (slash != std::string_view::npos) out.path = std::string(url.substr(slash));
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    out.host = std::string(authority.substr(0, colon));
    int port = 0;
    for (char c : authority.substr(colon + 1)) {
      if (c < '0' || c > '9') throw ConfigError("bad port in '" + std::string(authority) + "'");
      port = port * 10 + (c - '0');
    }
    if (port <= 0 || port > 65535) throw ConfigError("port out of range");
    out.port = static_cast<std::uint16_t>(port);
  } else {
    out.host = std::string(authority);
  }
  if (out.host.empty()) throw ConfigError("missing host in WebSocket URL");
  return out;
}

inline std::string base64(const unsigned char* data, std::size_t n) {
  std::string out(4 * ((n + 2) / 3), '\0');
  int len = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data, static_cast<int>(n));
  out.resize(static_cast<std::size_t>(len));
  return out;
}

inline std::string accept_key(std::string_view client_key) {
  std::string s(client_key);
  s += "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  unsigned char md[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(s.data()), s.size(), md);
  return base64(md, sizeof md);
}

enum class Opcode : std::uint8_t { continuation = 0x0, text = 0x1, binary = 0x2, close = 0x8, ping = 0x9, pong = 0xA };

// Serializes one final frame. Clients must mask, servers must not.
inline std::string encode_frame(Opcode op, std::string_view payload, bool mask) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(op)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    f.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    f.push_back(static_cast<char>(mask_bit | 126));
    f.push_back(static_cast<char>((n >> 8) & 0xFF));
    f.push_back(static_cast<char>(n & 0xFF));
  } else {
    f.push_back(static_cast<char>(mask_bit | 127));
    for (int i = 7; i >= 0; --i) f.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
  }
  std::array<unsigned char, 4> key{};
  if (mask) {
    RAND_bytes(key.data(), 4);
    f.append(reinterpret_cast<const char*>(key.data()), 4);
  }
  const std::size_t start = f.size();
  f.append(payload);
  if (mask)
    for (std::size_t i = 0; i < n; ++i) f[start + i] = static_cast<char>(f[start + i] ^ key[i % 4]);
  return f;
}

struct Frame {
  bool fin = true;
  Opcode opcode = Opcode::text;
  std::string payload;
};

// Decodes one frame from the front of buf; returns nullopt when buf does not
// yet hold a whole frame and erases consumed bytes otherwise.
inline std::optional<Frame> decode_frame(std::string& buf) {
  if (buf.size() < 2) return std::nullopt;
  const auto b0 = static_cast<std::uint8_t>(buf[0]);
  const auto b1 = static_cast<std::uint8_t>(buf[1]);
  std::size_t pos = 2;
  std::uint64_t n = b1 & 0x7F;
  if (n == 126) {
    if (buf.size() < 4) return std::nullopt;
    n = (static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[2])) << 8) | static_cast<std::uint8_t>(buf[3]);
    pos = 4;
  } else if (n == 127) {
    if (buf.size() < 10) return std::nullopt;
    n = 0;
    for (int i = 0; i < 8; ++i) n = (n << 8) | static_cast<std::uint8_t>(buf[2 + static_cast<std::size_t>(i)]);
    pos = 10;
  }
  const bool masked = (b1 & 0x80) != 0;
  std::array<unsigned char, 4> key{};
  if (masked) {
    if (buf.size() < pos + 4) return std::nullopt;
    std::memcpy(key.data(), buf.data() + pos, 4);
    pos += 4;
  }
  if (buf.size() < pos + n) return std::nullopt;
  Frame f;
  f.fin = (b0 & 0x80) != 0;
  f.opcode = static_cast<Opcode>(b0 & 0x0F);
  f.payload = buf.substr(pos, static_cast<std::size_t>(n));
  if (masked)
    for (std::size_t i = 0; i < f.payload.size(); ++i) f.payload[i] = static_cast<char>(f.payload[i] ^ key[i % 4]);
  buf.erase(0, pos + static_cast<std::size_t>(n));
  return f;
}

// Owns a connected TCP socket with a receive buffer; shared by the client and
// the test server.
class Connection {
 public:
  Connection() = default;
  explicit Connection(int fd) : fd_(fd) {}
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  Connection(Connection&& o) noexcept
      : fd_(std::exchange(o.fd_, -1)), buf_(std::move(o.buf_)), mask_(o.mask_), write_mutex_(std::move(o.write_mutex_)) {}
  Connection& operator=(Connection&& o) noexcept {
    if (this != &o) {
      close();
      fd_ = std::exchange(o.fd_, -1);
      buf_ = std::move(o.buf_);
      mask_ = o.mask_;
      write_mutex_ = std::move(o.write_mutex_);
    }
    return *this;
  }
  ~Connection() { close(); }

  bool is_open() const noexcept { return fd_ >= 0; }
  void set_masking(bool mask) noexcept { mask_ = mask; }
  std::string& buffer() noexcept { return buf_; }

  void close() noexcept {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

  // Unblocks a reader in another thread.
  void shutdown() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

  // Safe to call from several threads.
  void write_all(std::string_view data) {
    std::lock_guard lock(*write_mutex_);
    while (!data.empty()) {
      ssize_t w = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw BackendError(std::string("socket write failed: ") + std::strerror(errno));
      }
      data.remove_prefix(static_cast<std::size_t>(w));
    }
  }

  // Reads more bytes into the buffer; false on orderly close or timeout.
  bool fill(std::optional<std::chrono::milliseconds> timeout = std::nullopt) {
    if (timeout) {
      pollfd p{fd_, POLLIN, 0};
      int r = ::poll(&p, 1, static_cast<int>(timeout->count()));
      if (r <= 0) return false;
    }
    char tmp[16384];
    for (;;) {
      ssize_t r = ::recv(fd_, tmp, sizeof tmp, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r <= 0) return false;
      buf_.append(tmp, static_cast<std::size_t>(r));
      return true;
    }
  }

  void send(Opcode op, std::string_view payload) { write_all(encode_frame(op, payload, mask_)); }
  void send_text(std::string_view payload) { send(Opcode::text, payload); }

  // Next complete text or binary message, answering pings on the way.
  // nullopt once the peer closes.
  std::optional<std::string> receive_message() {
    std::string message;
    bool in_fragment = false;
    for (;;) {
      auto frame = decode_frame(buf_);
      if (!frame) {
        if (!fill()) return std::nullopt;
        continue;
      }
      switch (frame->opcode) {
        case Opcode::ping: send(Opcode::pong, frame->payload); continue;
        case Opcode::pong: continue;
        case Opcode::close:
          try {
            send(Opcode::close, "");
          } catch (const BackendError&) {
          }
          return std::nullopt;
        case Opcode::text:
        case Opcode::binary:
          message = std::move(frame->payload);
          in_fragment = !frame->fin;
          break;
        case Opcode::continuation:
          if (!in_fragment) throw ProtocolError(-1, "unexpected continuation frame");
          message += frame->payload;
          in_fragment = !frame->fin;
          break;
      }
      if (!in_fragment) return message;
    }
  }

  // Reads an HTTP header block (through the blank line).
  std::string read_http_head(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      auto end = buf_.find("\r\n\r\n");
      if (end != std::string::npos) {
        std::string head = buf_.substr(0, end + 4);
        buf_.erase(0, end + 4);
        return head;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0 || !fill(left)) throw ConnectError("WebSocket handshake timed out");
    }
  }

 private:
  int fd_ = -1;
  std::string buf_;
  bool mask_ = true;
  std::unique_ptr<std::mutex> write_mutex_ = std::make_unique<std::mutex>();
};

inline std::string header_value(std::string_view head, std::string_view name) {
  std::size_t pos = 0;
  while (pos < head.size()) {
    auto eol = head.find("\r\n", pos);
    if (eol == std::string_view::npos) eol = head.size();
    std::string_view line = head.substr(pos, eol - pos);
    auto colon = line.find(':');
    if (colon != std::string_view::npos && colon == name.size()) {
      bool same = true;
      for (std::size_t i = 0; i < colon; ++i)
        if (std::tolower(static_cast<unsigned char>(line[i])) != std::tolower(static_cast<unsigned char>(name[i]))) same = false;
      if (same) {
        std::string_view v = line.substr(colon + 1);
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        while (!v.empty() && (v.back() == ' ' || v.back() == '\r')) v.remove_suffix(1);
        return std::string(v);
      }
    }
    pos = eol + 2;
  }
  return {};
}

inline int tcp_connect(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
    throw ConnectError("cannot resolve '" + host + "': " + gai_strerror(rc));
  std::string last_error = "no address";
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      pollfd p{fd, POLLOUT, 0};
      rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
      if (rc == 1) {
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        rc = err == 0 ? 0 : -1;
        if (err) last_error = std::strerror(err);
      } else {
        last_error = rc == 0 ? "timed out" : std::strerror(errno);
        rc = -1;
      }
    } else if (rc < 0) {
      last_error = std::strerror(errno);
    }
    if (rc == 0) {
      ::fcntl(fd, F_SETFL, flags);
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      break;
    }
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw ConnectError("cannot connect to " + host + ":" + std::to_string(port) + ": " + last_error);
  return fd;
}

// Opens a client connection and performs the upgrade handshake.
inline Connection connect(const std::string& url, std::chrono::milliseconds timeout) {
  const Url u = parse_url(url);
  Connection conn(tcp_connect(u.host, u.port, timeout));
  conn.set_masking(true);
  unsigned char nonce[16];
  RAND_bytes(nonce, sizeof nonce);
  const std::string key = base64(nonce, sizeof nonce);
  std::string req = "GET " + u.path + " HTTP/1.1\r\nHost: " + u.host + ":" + std::to_string(u.port) +
                    "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
                    "\r\nSec-WebSocket-Version: 13\r\n\r\n";
  conn.write_all(req);
  const std::string head = conn.read_http_head(timeout);
  if (head.rfind("HTTP/1.1 101", 0) != 0)
    throw ConnectError("WebSocket upgrade refused: " + head.substr(0, head.find("\r\n")));
  if (header_value(head, "Sec-WebSocket-Accept") != accept_key(key))
    throw ConnectError("WebSocket upgrade returned a wrong accept key");
  return conn;
}

}  // namespace stylex::ws
