#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylex/crawl/backend.hpp"
#include "stylex/crawl/graph.hpp"
#include "stylex/crawl/strategy.hpp"
#include "stylex/dataset/labels.hpp"

namespace stylex {

struct CrawlBudget {
  std::optional<std::chrono::milliseconds> max_wall_time;
  std::optional<std::size_t> max_actions;

  // Ten minutes or 100 actions, whichever comes first.
  static CrawlBudget defaults() { return {std::chrono::minutes(10), 100}; }

  void validate() const {
    if (!max_wall_time && !max_actions) throw ConfigError("a crawl budget needs a time or action bound");
  }
};

struct ActionRecord {
  std::size_t index = 0;
  std::string from;
  ElementId element = 0;
  EventType event = EventType::click;
  EventPayload payload;
  std::string to;
  double elapsed_seconds = 0;

  bool operator==(const ActionRecord&) const = default;
};

struct CrawlResult {
  StateFlowGraph graph;
  CoverageLedger coverage;
  std::vector<ActionRecord> log;
  // Cumulative coverage right after each logged action.
  std::vector<CoverageLedger> coverage_series;
  ExaminationRegistry registry;
  bool complete = true;
  std::string failure;
  // True when the crawl stopped because no unfired candidate remained.
  bool exhausted = false;
  std::size_t replayed_actions = 0;
};

// Depth-first: the most recently discovered state that still has unfired
// candidates.
inline std::optional<std::string> choose_next_state(
    const std::vector<std::string>& discovery_order,
    const std::function<bool(const std::string&)>& has_unfired) {
  for (auto it = discovery_order.rbegin(); it != discovery_order.rend(); ++it)
    if (has_unfired(*it)) return *it;
  return std::nullopt;
}

class CrawlSession {
 public:
  using Clock = std::chrono::steady_clock;

  CrawlSession(Backend& backend, Strategy strategy, CrawlBudget budget)
      : backend_(backend),
        strategy_(std::move(strategy)),
        budget_(budget),
        payload_rng_(util::derive_seed(strategy_.seed, "event-payload")) {
    strategy_.validate();
    budget_.validate();
    result_.registry = ExaminationRegistry(strategy_.epsilon);
  }

  CrawlResult run() {
    start_ = Clock::now();
    try {
      DomSnapshot snap = strip_ground_truth(backend_.reset());
      current_ = abstract_state(snap);
      result_.graph.initial = current_;
      discover(current_, std::move(snap), {});
      loop();
    } catch (const BackendError& e) {
      result_.complete = false;
      result_.failure = e.what();
    }
    return std::move(result_);
  }

 private:
  struct StateRecord {
    DomSnapshot snapshot;
    std::vector<Candidate> pending;
    std::vector<Edge> path;
  };

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  bool budget_left() const {
    if (budget_.max_actions && result_.log.size() >= *budget_.max_actions) return false;
    if (budget_.max_wall_time && Clock::now() - start_ >= *budget_.max_wall_time) return false;
    return true;
  }

  void discover(const std::string& id, DomSnapshot snap, std::vector<Edge> path) {
    StateRecord rec;
    rec.pending = extract_candidates(snap, strategy_, result_.registry);
    rec.path = std::move(path);
    result_.graph.states.push_back({id, snap.snapshot_id});
    rec.snapshot = std::move(snap);
    states_.emplace(id, std::move(rec));
    order_.push_back(id);
  }

  void loop() {
    while (budget_left()) {
      if (states_.at(current_).pending.empty()) {
        auto next = choose_next_state(order_, [&](const std::string& s) { return !states_.at(s).pending.empty(); });
        if (!next) {
          result_.exhausted = true;
          return;
        }
        travel_to(*next);
        continue;
      }
      StateRecord& here = states_.at(current_);
      if (is_style_guided(strategy_.kind))
        here.pending = rank_candidates(here.snapshot, here.pending, result_.registry);
      const Candidate c = here.pending.front();
      here.pending.erase(here.pending.begin());
      if (c.element >= here.snapshot.size()) continue;

      EventPayload payload;
      if (c.event == EventType::mousedown)
        payload.button = static_cast<int>(util::uniform_below(payload_rng_, 3));

      DomSnapshot after;
      try {
        after = strip_ground_truth(backend_.fire(c.element, c.event, payload));
      } catch (const StaleElementError&) {
        continue;
      }
      if (is_style_guided(strategy_.kind))
        result_.registry.record_examination(signature_of(here.snapshot.elements[c.element].features));

      const std::string to = abstract_state(after);
      Edge edge{current_, c.element, c.event, to};
      result_.graph.edges.push_back(edge);
      result_.log.push_back({result_.log.size(), current_, c.element, c.event, payload, to, elapsed()});
      result_.coverage = backend_.coverage();
      result_.coverage_series.push_back(result_.coverage);

      if (!states_.contains(to)) {
        std::vector<Edge> path = states_.at(current_).path;
        path.push_back(edge);
        discover(to, std::move(after), std::move(path));
      }
      current_ = to;
    }
  }

  // Backtracking: reload the initial page and replay the discovery path.
  void travel_to(const std::string& target) {
    DomSnapshot snap = strip_ground_truth(backend_.reset());
    std::string at = abstract_state(snap);
    for (const Edge& e : states_.at(target).path) {
      if (!budget_left()) break;
      snap = strip_ground_truth(backend_.fire(e.element, e.event, {}));
      ++result_.replayed_actions;
      at = abstract_state(snap);
    }
    if (at != target && !states_.contains(at)) {
      // The app did not reproduce the recorded path; explore where we are.
      discover(at, std::move(snap), {});
    }
    if (at != target) states_.at(target).pending.clear();
    current_ = at;
  }

  Backend& backend_;
  Strategy strategy_;
  CrawlBudget budget_;
  util::Rng payload_rng_;
  Clock::time_point start_;
  CrawlResult result_;
  std::map<std::string, StateRecord> states_;
  std::vector<std::string> order_;
  std::string current_;
};

inline CrawlResult crawl(Backend& backend, const Strategy& strategy, const CrawlBudget& budget) {
  return CrawlSession(backend, strategy, budget).run();
}

// Rebuilds the state-flow graph by re-firing a recorded action log, resetting
// and replaying discovery paths whenever the log continues from another state.
inline StateFlowGraph replay(Backend& backend, const std::vector<ActionRecord>& log) {
  StateFlowGraph g;
  std::map<std::string, std::vector<Edge>> paths;
  DomSnapshot snap = backend.reset();
  std::string cur = abstract_state(snap);
  g.initial = cur;
  g.states.push_back({cur, snap.snapshot_id});
  paths[cur] = {};
  for (const auto& a : log) {
    if (cur != a.from) {
      auto it = paths.find(a.from);
      if (it == paths.end()) throw ValidationError("log action starts from an unknown state");
      snap = backend.reset();
      for (const Edge& e : it->second) snap = backend.fire(e.element, e.event, {});
      cur = abstract_state(snap);
      if (cur != a.from) throw ValidationError("replay diverged from the recorded path");
    }
    snap = backend.fire(a.element, a.event, a.payload);
    std::string to = abstract_state(snap);
    Edge edge{cur, a.element, a.event, to};
    g.edges.push_back(edge);
    if (!paths.contains(to)) {
      auto p = paths[cur];
      p.push_back(edge);
      paths[to] = std::move(p);
      g.states.push_back({to, snap.snapshot_id});
    }
    cur = to;
  }
  return g;
}

}  // namespace stylex
