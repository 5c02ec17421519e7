#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "stylex/crawl/backend.hpp"
#include "stylex/live/cdp_session.hpp"
#include "stylex/live/payload.hpp"
#include "stylex/util/random.hpp"

namespace stylex {

struct LiveConfig {
  std::string start_url;
  // Source of the in-page extraction function; it is called with the list of
  // required property names and must return the extraction payload.
  std::string instrumentation_script;
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds command_timeout{30000};
  std::chrono::milliseconds load_timeout{30000};
  // DOM-mutation silence that counts as settled.
  std::chrono::milliseconds quiescence{500};
  std::string site_id;
};

// Expressions sent through Runtime.evaluate. Each starts with a marker comment
// naming its purpose.
namespace cdp_js {

inline std::string element_lookup(std::size_t page_index) {
  return "document.querySelectorAll('*')[" + std::to_string(page_index) + "]";
}

inline std::string outer_html() { return "/*stylex:outer-html*/document.documentElement.outerHTML"; }

inline std::string ready_state() { return "/*stylex:ready-state*/document.readyState"; }

inline std::string extract(const std::string& script) {
  return "/*stylex:extract*/(" + script + ")(" + nlohmann::json(required_properties()).dump() + ")";
}

inline std::string resolve_element(std::size_t page_index) {
  return "/*stylex:element*/" + element_lookup(page_index);
}

inline std::string settle(std::chrono::milliseconds window) {
  const std::string w = std::to_string(window.count());
  const std::string cap = std::to_string(window.count() * 20);
  return "/*stylex:settle*/new Promise(function(resolve){var t,cap;"
         "var o=new MutationObserver(function(){clearTimeout(t);t=setTimeout(done," + w + ");});"
         "function done(){o.disconnect();clearTimeout(cap);resolve(true);}"
         "o.observe(document,{subtree:true,childList:true,attributes:true,characterData:true});"
         "t=setTimeout(done," + w + ");cap=setTimeout(done," + cap + ");})";
}

// Dispatches a synthesized event at the element's bounding-box center.
// Returns false when the element at that preorder position is gone or has a
// different tag.
inline std::string dispatch(std::size_t page_index, const std::string& tag, EventType event, int button) {
  nlohmann::json args = {{"index", page_index}, {"tag", tag}, {"type", std::string(to_string(event))},
                         {"button", button}};
  return "/*stylex:dispatch*/(function(a){var el=" + element_lookup(page_index) + ";"
         "if(!el||el.tagName.toLowerCase()!==a.tag)return false;"
         "var r=el.getBoundingClientRect();var x=r.left+r.width/2,y=r.top+r.height/2;"
         "var ev;if(a.type==='touchstart'){"
         "try{var t=new Touch({identifier:1,target:el,clientX:x,clientY:y});"
         "ev=new TouchEvent('touchstart',{bubbles:true,cancelable:true,touches:[t],targetTouches:[t],changedTouches:[t]});}"
         "catch(e){ev=new Event('touchstart',{bubbles:true,cancelable:true});}}"
         "else{ev=new MouseEvent(a.type,{bubbles:true,cancelable:true,view:window,clientX:x,clientY:y,"
         "button:a.button,buttons:a.type==='mousedown'?(1<<a.button):0});}"
         "el.dispatchEvent(ev);return true;})(" + args.dump() + ")";
}

}  // namespace cdp_js

// Turns a DevTools endpoint into a page WebSocket URL. ws:// URLs pass
// through; for http://host:port the first page target from /json/list is used.
inline std::string resolve_devtools_endpoint(const std::string& endpoint,
                                             std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) {
  if (endpoint.rfind("ws://", 0) == 0) return endpoint;
  if (endpoint.rfind("http://", 0) != 0) throw ConfigError("DevTools endpoint must be ws:// or http://: " + endpoint);
  std::string host = endpoint.substr(7);
  if (auto slash = host.find('/'); slash != std::string::npos) host.resize(slash);
  httplib::Client client("http://" + host);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
                                (timeout.count() % 1000) * 1000);
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
                          (timeout.count() % 1000) * 1000);
  auto res = client.Get("/json/list");
  if (!res) throw ConnectError("cannot reach DevTools endpoint " + endpoint);
  if (res->status != 200) throw ConnectError("DevTools endpoint answered HTTP " + std::to_string(res->status));
  const auto targets = nlohmann::json::parse(res->body, nullptr, false);
  if (targets.is_array())
    for (const auto& t : targets)
      if (t.value("type", "") == "page" && t.contains("webSocketDebuggerUrl"))
        return t["webSocketDebuggerUrl"].get<std::string>();
  throw ConnectError("DevTools endpoint " + endpoint + " lists no page target");
}

// Backend over a browser speaking the DevTools protocol.
class LiveBackend : public Backend {
 public:
  using json = nlohmann::json;

  LiveBackend(std::unique_ptr<CdpSession> session, LiveConfig config)
      : session_(std::move(session)), config_(std::move(config)) {
    if (config_.instrumentation_script.empty()) throw ConfigError("live crawling needs an instrumentation script");
    session_->send("Runtime.enable");
    session_->send("Page.enable");
    session_->send("Debugger.enable");
    session_->send("Profiler.enable");
    session_->send("Profiler.startPreciseCoverage", {{"callCount", true}, {"detailed", true}});
  }

  static std::unique_ptr<LiveBackend> connect(const std::string& ws_url, LiveConfig config) {
    auto session = CdpSession::connect(ws_url, config.connect_timeout, config.command_timeout);
    return std::make_unique<LiveBackend>(std::move(session), std::move(config));
  }

  CdpSession& session() noexcept { return *session_; }

  DomSnapshot navigate(const std::string& url) {
    json r;
    try {
      r = session_->send("Page.navigate", {{"url", url}});
    } catch (const ProtocolError& e) {
      throw NavigationError(e.what());
    }
    if (r.contains("errorText") && !r["errorText"].get<std::string>().empty())
      throw NavigationError("navigation to '" + url + "' failed: " + r["errorText"].get<std::string>());
    wait_until_loaded();
    settle();
    return snapshot();
  }

  // Reads the current page without changing it.
  DomSnapshot snapshot() {
    const json html = evaluate(cdp_js::outer_html(), true);
    json payload;
    try {
      payload = evaluate(cdp_js::extract(config_.instrumentation_script), true);
    } catch (const PageScriptError& e) {
      throw InjectionError(std::string("instrumentation script failed: ") + e.what());
    }
    if (payload.is_string()) payload = json::parse(payload.get<std::string>(), nullptr, false);
    ParsedPayload parsed;
    try {
      parsed = parse_extraction_payload(payload);
    } catch (const json::exception& e) {
      throw InjectionError(std::string("malformed extraction payload: ") + e.what());
    }
    const std::string dom = html.is_string() ? html.get<std::string>() : std::string();
    DomSnapshot snap;
    try {
      snap = build_snapshot("page-" + std::to_string(++snapshots_), parsed.elements, dom, config_.site_id);
    } catch (const IncompleteObservationError& e) {
      throw InjectionError(e.what());
    }
    page_index_ = parsed.page_index;
    current_ = snap;
    return snap;
  }

  // Fills direct_listeners from the debugger's listener query. Elements whose
  // query fails are marked as having unknown listeners.
  DomSnapshot harvest_listeners(DomSnapshot snapshot) {
    const std::string group = "stylex-harvest";
    for (auto& e : snapshot.elements) {
      e.direct_listeners = {};
      try {
        const json obj = session_->send(
            "Runtime.evaluate",
            {{"expression", cdp_js::resolve_element(page_index_.at(e.element_id))}, {"objectGroup", group}});
        const auto& remote = obj.at("result");
        if (!remote.contains("objectId")) {
          e.listeners_known = false;
          continue;
        }
        const json listeners =
            session_->send("DOMDebugger.getEventListeners", {{"objectId", remote["objectId"]}});
        for (const auto& l : listeners.at("listeners"))
          if (auto ev = parse_event_type(l.value("type", ""))) e.direct_listeners.insert(*ev);
        e.listeners_known = true;
      } catch (const ProtocolError&) {
        e.listeners_known = false;
      } catch (const json::exception&) {
        e.listeners_known = false;
      }
    }
    try {
      session_->send("Runtime.releaseObjectGroup", {{"objectGroup", group}});
    } catch (const ProtocolError&) {
    }
    return snapshot;
  }

  // Dispatches one event and returns the settled page.
  DomSnapshot dispatch(ElementId element, EventType event, const EventPayload& payload) {
    if (element >= current_.size() || element >= page_index_.size())
      throw StaleElementError("element " + std::to_string(element) + " is not in the current page");
    const json ok = evaluate(
        cdp_js::dispatch(page_index_[element], current_.elements[element].tag_name, event, payload.button), true);
    if (!ok.is_boolean() || !ok.get<bool>())
      throw StaleElementError("element " + std::to_string(element) + " vanished");
    settle();
    return snapshot();
  }

  DomSnapshot reset() override { return navigate(config_.start_url); }

  DomSnapshot fire(ElementId element, EventType event, const EventPayload& payload) override {
    return dispatch(element, event, payload);
  }

  // Cumulative covered characters per script, embedded, inline and injected
  // scripts included. Every parsed script counts as discovered code.
  CoverageLedger coverage() override {
    for (const auto& ev : session_->take_events("Debugger.scriptParsed")) {
      const auto& p = ev.at("params");
      ScriptInfo info;
      const std::string url = p.value("url", "");
      const std::string hash = p.value("hash", "");
      info.key = url.empty() ? "inline:" + hash : url + "#" + hash;
      info.length = p.value("length", std::uint64_t{0});
      scripts_[p.value("scriptId", "")] = info;
      if (info.length > 0) ledger_.discover(info.key, 0, info.length);
    }
    const json r = session_->send("Profiler.takePreciseCoverage");
    for (const auto& script : r.at("result")) {
      std::vector<CoverageRange> ranges;
      for (const auto& fn : script.at("functions"))
        for (const auto& range : fn.at("ranges"))
          ranges.push_back({range.at("startOffset").get<std::uint64_t>(), range.at("endOffset").get<std::uint64_t>(),
                            range.at("count").get<std::int64_t>()});
      const std::string id = script.value("scriptId", "");
      auto it = scripts_.find(id);
      const std::string key =
          it != scripts_.end() ? it->second.key : script.value("url", std::string("inline")) + "#id:" + id;
      const IntervalSet covered = covered_characters(std::move(ranges));
      for (const auto& [b, e] : covered.spans()) ledger_.cover(key, b, e);
    }
    return ledger_;
  }

 private:
  struct ScriptInfo {
    std::string key;
    std::uint64_t length = 0;
  };

  struct PageScriptError : BackendError {
    using BackendError::BackendError;
  };

  json evaluate(const std::string& expression, bool by_value, bool await_promise = false) {
    json params = {{"expression", expression}, {"returnByValue", by_value}};
    if (await_promise) params["awaitPromise"] = true;
    const json r = session_->send("Runtime.evaluate", params);
    if (r.contains("exceptionDetails")) {
      const auto& d = r["exceptionDetails"];
      std::string text = d.value("text", std::string("exception"));
      if (d.contains("exception") && d["exception"].contains("description"))
        text += ": " + d["exception"]["description"].get<std::string>();
      throw PageScriptError(text);
    }
    return r.at("result").value("value", json());
  }

  void wait_until_loaded() {
    const auto deadline = std::chrono::steady_clock::now() + config_.load_timeout;
    for (;;) {
      try {
        const json state = evaluate(cdp_js::ready_state(), true);
        if (state.is_string() && state.get<std::string>() == "complete") return;
      } catch (const ProtocolError&) {
        // Execution context replaced mid-navigation; poll again.
      } catch (const PageScriptError&) {
      }
      if (std::chrono::steady_clock::now() >= deadline) throw NavigationError("page did not finish loading");
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }

  void settle() {
    if (config_.quiescence.count() <= 0) return;
    try {
      evaluate(cdp_js::settle(config_.quiescence), true, true);
    } catch (const ProtocolError&) {
      // The event navigated away and destroyed the context.
      wait_until_loaded();
      evaluate(cdp_js::settle(config_.quiescence), true, true);
    }
  }

  std::unique_ptr<CdpSession> session_;
  LiveConfig config_;
  DomSnapshot current_;
  std::vector<std::size_t> page_index_;
  std::size_t snapshots_ = 0;
  std::map<std::string, ScriptInfo> scripts_;
  CoverageLedger ledger_;
};

}  // namespace stylex
