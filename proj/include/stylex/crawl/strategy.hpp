#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylex/classifier/boosting.hpp"
#include "stylex/core/structure.hpp"
#include "stylex/ranking/style_ranking.hpp"
#include "stylex/util/random.hpp"

namespace stylex {

enum class StrategyKind { DEF, RND, STYLEX_CLK, STYLEX_EVNTS };

inline std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::DEF: return "DEF";
    case StrategyKind::RND: return "RND";
    case StrategyKind::STYLEX_CLK: return "STYLEX_CLK";
    case StrategyKind::STYLEX_EVNTS: return "STYLEX_EVNTS";
  }
  return "DEF";
}

inline std::optional<StrategyKind> parse_strategy(std::string_view s) {
  for (auto k : {StrategyKind::DEF, StrategyKind::RND, StrategyKind::STYLEX_CLK, StrategyKind::STYLEX_EVNTS})
    if (to_string(k) == s) return k;
  if (s == "STYLEX-CLK") return StrategyKind::STYLEX_CLK;
  if (s == "STYLEX-EVNTS") return StrategyKind::STYLEX_EVNTS;
  return std::nullopt;
}

inline bool is_style_guided(StrategyKind k) {
  return k == StrategyKind::STYLEX_CLK || k == StrategyKind::STYLEX_EVNTS;
}

// Predicts which of the requested events an element listens to. Sees only what
// a strategy sees: a snapshot without listener ground truth.
class ActionablePredictor {
 public:
  virtual ~ActionablePredictor() = default;
  virtual bool supports(EventType event) const = 0;
  virtual EventSet predict(const DomSnapshot& snapshot, ElementId element, EventSet wanted) const = 0;
};

// One trained model per event type.
class ModelPredictor : public ActionablePredictor {
 public:
  ModelPredictor() = default;
  explicit ModelPredictor(std::vector<BoostedTreeModel> models) {
    for (auto& m : models) add(std::move(m));
  }

  void add(BoostedTreeModel model) { models_[model.event] = std::move(model); }

  bool supports(EventType event) const override { return models_.contains(event); }

  EventSet predict(const DomSnapshot& snapshot, ElementId element, EventSet wanted) const override {
    EventSet out;
    const auto row = to_feature_row(snapshot.elements.at(element).features);
    for (EventType e : wanted.to_vector()) {
      auto it = models_.find(e);
      if (it != models_.end() && it->second.predict_row(row).label) out.insert(e);
    }
    return out;
  }

 private:
  std::map<EventType, BoostedTreeModel> models_;
};

struct Strategy {
  StrategyKind kind = StrategyKind::DEF;
  std::uint64_t seed = 0;
  std::shared_ptr<const ActionablePredictor> predictor;
  double epsilon = 0.0;

  EventSet events() const {
    return kind == StrategyKind::STYLEX_EVNTS
               ? EventSet{EventType::click, EventType::mouseover, EventType::mouseout,
                          EventType::mousedown, EventType::touchstart}
               : EventSet{EventType::click};
  }

  void validate() const {
    if (!is_style_guided(kind)) return;
    if (!predictor) throw ConfigError(std::string(to_string(kind)) + " requires actionable models");
    for (EventType e : events().to_vector())
      if (!predictor->supports(e))
        throw ConfigError(std::string(to_string(kind)) + " is missing the '" +
                          std::string(to_string(e)) + "' model");
  }
};

struct Candidate {
  ElementId element = 0;
  EventType event = EventType::click;

  bool operator==(const Candidate&) const = default;
};

// Orders (element, event) pairs by the style ranking of their elements and,
// within one element, by event popularity.
inline std::vector<Candidate> rank_candidates(const DomSnapshot& snapshot,
                                              const std::vector<Candidate>& pending,
                                              const ExaminationRegistry& registry) {
  std::vector<RankCandidate> elements;
  std::map<ElementId, EventSet> events;
  for (const auto& c : pending) {
    auto [it, inserted] = events.try_emplace(c.element);
    it->second.insert(c.event);
    if (inserted)
      elements.push_back({c.element, signature_of(snapshot.elements.at(c.element).features), {}});
  }
  for (auto& e : elements) e.predicted = events[e.id];
  std::vector<Candidate> out;
  out.reserve(pending.size());
  for (const auto& r : rank_actionables(registry, std::move(elements)))
    for (EventType e : r.predicted.to_vector()) out.push_back({r.id, e});
  return out;
}

// Candidate actions for one state, in firing order.
inline std::vector<Candidate> extract_candidates(const DomSnapshot& snapshot, const Strategy& strategy,
                                                 const ExaminationRegistry& registry = ExaminationRegistry{}) {
  strategy.validate();
  const TreeOrder order = validate_tree(snapshot);
  std::vector<Candidate> out;
  switch (strategy.kind) {
    case StrategyKind::DEF:
      for (ElementId id : order.preorder)
        if (snapshot.elements[id].is_default_actionable) out.push_back({id, EventType::click});
      return out;
    case StrategyKind::RND: {
      for (ElementId id : order.preorder) out.push_back({id, EventType::click});
      util::Rng rng(util::derive_seed(strategy.seed, snapshot.serialized_dom));
      util::shuffle(std::span<Candidate>(out), rng);
      return out;
    }
    case StrategyKind::STYLEX_CLK:
    case StrategyKind::STYLEX_EVNTS: {
      const EventSet wanted = strategy.events();
      for (ElementId id : order.preorder) {
        EventSet predicted = strategy.predictor->predict(snapshot, id, wanted);
        for (EventType e : predicted.to_vector()) out.push_back({id, e});
      }
      return rank_candidates(snapshot, out, registry);
    }
  }
  return out;
}

}  // namespace stylex
