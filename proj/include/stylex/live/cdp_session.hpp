#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stylex/live/websocket.hpp"

namespace stylex {

// One DevTools protocol connection. A pump thread reads every message;
// responses are matched to their command by id and everything without an id
// is queued as an event. Callers see a plain blocking send -> result API.
class CdpSession {
 public:
  using json = nlohmann::json;

  CdpSession(ws::Connection conn, std::chrono::milliseconds command_timeout)
      : conn_(std::move(conn)), timeout_(command_timeout) {
    pump_ = std::thread([this] { pump(); });
  }

  static std::unique_ptr<CdpSession> connect(const std::string& ws_url,
                                             std::chrono::milliseconds connect_timeout,
                                             std::chrono::milliseconds command_timeout) {
    return std::make_unique<CdpSession>(ws::connect(ws_url, connect_timeout), command_timeout);
  }

  CdpSession(const CdpSession&) = delete;
  CdpSession& operator=(const CdpSession&) = delete;

  ~CdpSession() {
    conn_.shutdown();
    if (pump_.joinable()) pump_.join();
  }

  // Sends a command and waits for its response; returns the "result" member.
  json send(const std::string& method, json params = json::object()) {
    return send(method, std::move(params), timeout_);
  }

  json send(const std::string& method, json params, std::chrono::milliseconds timeout) {
    std::future<json> reply;
    std::int64_t id;
    {
      std::lock_guard lock(mu_);
      if (closed_) throw BackendError("DevTools connection is closed");
      id = next_id_++;
      reply = pending_[id].get_future();
    }
    json msg = {{"id", id}, {"method", method}, {"params", std::move(params)}};
    try {
      conn_.send_text(msg.dump());
    } catch (...) {
      std::lock_guard lock(mu_);
      pending_.erase(id);
      throw;
    }
    if (reply.wait_for(timeout) != std::future_status::ready) {
      std::lock_guard lock(mu_);
      pending_.erase(id);
      throw BackendError("timed out waiting for " + method);
    }
    json response = reply.get();
    if (response.contains("error")) {
      const auto& err = response["error"];
      throw ProtocolError(err.value("code", 0), method + ": " + err.value("message", std::string("unknown error")));
    }
    return response.value("result", json::object());
  }

  // Removes and returns queued events, optionally only those of one method.
  std::vector<json> take_events(const std::string& method = {}) {
    std::lock_guard lock(mu_);
    std::vector<json> out;
    std::deque<json> rest;
    for (auto& e : events_) {
      if (method.empty() || e.value("method", "") == method)
        out.push_back(std::move(e));
      else
        rest.push_back(std::move(e));
    }
    events_ = std::move(rest);
    return out;
  }

  std::size_t unmatched_responses() const {
    std::lock_guard lock(mu_);
    return unmatched_;
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }

 private:
  void pump() {
    for (;;) {
      std::optional<std::string> text;
      try {
        text = conn_.receive_message();
      } catch (const std::exception&) {
        text.reset();
      }
      if (!text) break;
      json msg = json::parse(*text, nullptr, false);
      if (msg.is_discarded() || !msg.is_object()) continue;
      std::lock_guard lock(mu_);
      if (msg.contains("id") && msg["id"].is_number_integer()) {
        auto it = pending_.find(msg["id"].get<std::int64_t>());
        if (it == pending_.end()) {
          ++unmatched_;
          continue;
        }
        it->second.set_value(std::move(msg));
        pending_.erase(it);
      } else if (msg.contains("method")) {
        events_.push_back(std::move(msg));
      }
    }
    std::lock_guard lock(mu_);
    closed_ = true;
    for (auto& [id, p] : pending_)
      p.set_exception(std::make_exception_ptr(BackendError("DevTools connection closed")));
    pending_.clear();
  }

  ws::Connection conn_;
  std::chrono::milliseconds timeout_;
  std::thread pump_;
  mutable std::mutex mu_;
  std::int64_t next_id_ = 1;
  std::map<std::int64_t, std::promise<json>> pending_;
  std::deque<json> events_;
  std::size_t unmatched_ = 0;
  bool closed_ = false;
};

}  // namespace stylex
