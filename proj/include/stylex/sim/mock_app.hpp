#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "stylex/crawl/backend.hpp"
#include "stylex/crawl/graph.hpp"
#include "stylex/crawl/strategy.hpp"
#include "stylex/dataset/labels.hpp"
#include "stylex/features/extract.hpp"
#include "stylex/util/random.hpp"

namespace stylex {

struct MockElement {
  std::string tag = "div";
  std::map<std::string, std::string> attributes;
  std::optional<ElementId> parent;
  BoundingBox box;
  // Declared overrides; missing properties take default_computed_style().
  StyleMap styles;
  // Hidden ground truth. Visible to the labeling pipeline only.
  EventSet listeners;

  bool operator==(const MockElement&) const = default;
};

struct MockState {
  std::vector<MockElement> elements;

  bool operator==(const MockState&) const = default;
};

struct TransitionKey {
  std::string state;
  ElementId element = 0;
  EventType event = EventType::click;

  auto operator<=>(const TransitionKey& o) const {
    return std::tie(state, element, event) <=> std::tie(o.state, o.element, o.event);
  }
  bool operator==(const TransitionKey&) const = default;
};

struct Transition {
  std::string target;
  std::vector<std::string> units;

  bool operator==(const Transition&) const = default;
};

// A deterministic stand-in for a web app: styled elements per state, hidden
// listeners, a transition table and weighted code units.
struct MockAppSpec {
  std::string name;
  std::string initial;
  std::map<std::string, MockState> states;
  std::map<TransitionKey, Transition> transitions;
  std::map<std::string, std::uint64_t> unit_weights;

  bool operator==(const MockAppSpec&) const = default;
};

inline constexpr int kMockAppSchemaVersion = 1;

inline void validate_app(const MockAppSpec& app) {
  if (!app.states.contains(app.initial))
    throw ValidationError("initial state '" + app.initial + "' is not declared");
  for (const auto& [id, st] : app.states) {
    if (st.elements.empty()) throw ValidationError("state '" + id + "' has no elements");
    for (std::size_t i = 0; i < st.elements.size(); ++i) {
      const auto& p = st.elements[i].parent;
      if ((i == 0) != !p.has_value() || (p && *p >= i))
        throw ValidationError("state '" + id + "' element " + std::to_string(i) +
                              " has an invalid parent (elements must be in preorder)");
    }
  }
  for (const auto& [key, tr] : app.transitions) {
    const std::string where = "transition (" + key.state + ", " + std::to_string(key.element) +
                              ", " + std::string(to_string(key.event)) + ")";
    auto st = app.states.find(key.state);
    if (st == app.states.end()) throw ValidationError(where + ": unknown source state");
    if (!app.states.contains(tr.target))
      throw ValidationError(where + ": target state '" + tr.target + "' is not declared");
    if (key.element >= st->second.elements.size()) throw ValidationError(where + ": unknown element");
    const auto& el = st->second.elements[key.element];
    const bool default_click =
        key.event == EventType::click && is_default_actionable(el.tag, el.attributes);
    if (!el.listeners.contains(key.event) && !default_click)
      throw ValidationError(where + ": element does not listen to the event");
    for (const auto& u : tr.units)
      if (!app.unit_weights.contains(u)) throw ValidationError(where + ": undeclared unit '" + u + "'");
  }
}

// Markup standing in for the page DOM. Includes the state id, so distinct
// states never share a DOM string.
inline std::string serialize_state(const std::string& id, const MockState& st) {
  std::vector<std::vector<ElementId>> kids(st.elements.size());
  for (std::size_t i = 1; i < st.elements.size(); ++i) kids[*st.elements[i].parent].push_back(i);
  std::string out = "<mock-state id=\"" + id + "\">";
  auto emit = [&](auto&& self, ElementId i) -> void {
    const auto& e = st.elements[i];
    out += "<" + e.tag + " data-sx=\"" + std::to_string(i) + "\"";
    for (const auto& [k, v] : e.attributes) out += " " + k + "=\"" + v + "\"";
    out += ">";
    for (ElementId c : kids[i]) self(self, c);
    out += "</" + e.tag + ">";
  };
  emit(emit, 0);
  out += "</mock-state>";
  return out;
}

inline std::vector<ObservedElement> observe_state(const MockState& st, bool with_listeners) {
  std::vector<ObservedElement> out;
  const StyleMap defaults = default_computed_style();
  for (const auto& e : st.elements) {
    ObservedElement o;
    o.observation.tag_name = e.tag;
    o.observation.attributes = e.attributes;
    o.observation.bounding_box = e.box;
    o.observation.computed_style = defaults;
    for (const auto& [k, v] : e.styles) o.observation.computed_style[k] = v;
    o.parent = e.parent;
    if (with_listeners) o.direct_listeners = e.listeners;
    out.push_back(std::move(o));
  }
  return out;
}

// Snapshot with listener ground truth, for corpus collection.
inline DomSnapshot labeled_snapshot(const MockAppSpec& app, const std::string& state,
                                    const std::string& site_id) {
  const auto& st = app.states.at(state);
  return build_snapshot(state, observe_state(st, true), serialize_state(state, st), site_id);
}

inline std::string mock_app_to_string(const MockAppSpec& app) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["format"] = "stylex-mock-app";
  j["schema_version"] = kMockAppSchemaVersion;
  j["name"] = app.name;
  j["initial"] = app.initial;
  j["units"] = oj::object();
  for (const auto& [u, w] : app.unit_weights) j["units"][u] = w;
  j["states"] = oj::object();
  for (const auto& [id, st] : app.states) {
    oj elements = oj::array();
    for (const auto& e : st.elements) {
      oj el;
      el["tag"] = e.tag;
      el["attributes"] = e.attributes;
      el["parent"] = e.parent ? oj(*e.parent) : oj(nullptr);
      el["box"] = {e.box.x, e.box.y, e.box.width, e.box.height};
      el["styles"] = oj::object();
      for (const auto& [k, v] : e.styles) el["styles"][k] = v;
      oj listeners = oj::array();
      for (EventType ev : e.listeners.to_vector()) listeners.push_back(std::string(to_string(ev)));
      el["listeners"] = listeners;
      elements.push_back(el);
    }
    j["states"][id] = oj{{"elements", elements}};
  }
  oj transitions = oj::array();
  for (const auto& [k, t] : app.transitions)
    transitions.push_back(oj{{"state", k.state},
                             {"element", k.element},
                             {"event", to_string(k.event)},
                             {"target", t.target},
                             {"units", t.units}});
  j["transitions"] = transitions;
  return j.dump(1) + "\n";
}

inline MockAppSpec mock_app_from_string(const std::string& text) {
  MockAppSpec app;
  try {
    auto j = nlohmann::ordered_json::parse(text);
    if (j.at("format").get<std::string>() != "stylex-mock-app")
      throw SchemaError("not a mock-app file");
    if (j.at("schema_version").get<int>() != kMockAppSchemaVersion)
      throw SchemaError("unsupported mock-app schema version");
    app.name = j.value("name", "");
    app.initial = j.at("initial").get<std::string>();
    for (const auto& [u, w] : j.at("units").items()) app.unit_weights[u] = w.get<std::uint64_t>();
    for (const auto& [id, sj] : j.at("states").items()) {
      MockState st;
      for (const auto& ej : sj.at("elements")) {
        MockElement e;
        e.tag = ej.value("tag", "div");
        if (ej.contains("attributes")) e.attributes = ej.at("attributes").get<std::map<std::string, std::string>>();
        if (ej.contains("parent") && !ej.at("parent").is_null()) e.parent = ej.at("parent").get<ElementId>();
        if (ej.contains("box")) {
          auto b = ej.at("box").get<std::vector<double>>();
          if (b.size() != 4) throw ValidationError("box must have 4 numbers");
          e.box = {b[0], b[1], b[2], b[3]};
        }
        if (ej.contains("styles"))
          for (const auto& [k, v] : ej.at("styles").items()) e.styles[k] = v.get<std::string>();
        if (ej.contains("listeners"))
          for (const auto& l : ej.at("listeners")) {
            auto ev = parse_event_type(l.get<std::string>());
            if (!ev) throw ValidationError("unknown listener type '" + l.get<std::string>() + "'");
            e.listeners.insert(*ev);
          }
        st.elements.push_back(std::move(e));
      }
      app.states[id] = std::move(st);
    }
    for (const auto& tj : j.at("transitions")) {
      auto ev = parse_event_type(tj.at("event").get<std::string>());
      if (!ev) throw ValidationError("unknown event in transition");
      TransitionKey key{tj.at("state").get<std::string>(), tj.at("element").get<ElementId>(), *ev};
      Transition t{tj.at("target").get<std::string>(),
                   tj.value("units", std::vector<std::string>{})};
      if (!app.transitions.emplace(key, std::move(t)).second)
        throw ValidationError("duplicate transition for (" + key.state + ", " +
                              std::to_string(key.element) + ")");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed mock app: ") + e.what());
  }
  validate_app(app);
  return app;
}

inline MockAppSpec load_app(const std::filesystem::path& path) {
  return mock_app_from_string(read_text_file(path));
}

inline void save_app(const MockAppSpec& app, const std::filesystem::path& path) {
  write_text_file(path, mock_app_to_string(app));
}

// Fires events against a MockAppSpec. Deterministic: the same action sequence
// always yields the same states and coverage.
class SimBackend : public Backend {
 public:
  explicit SimBackend(std::shared_ptr<const MockAppSpec> app) : app_(std::move(app)) {
    validate_app(*app_);
    current_ = app_->initial;
  }

  DomSnapshot reset() override {
    current_ = app_->initial;
    enter(current_);
    return snapshot(current_);
  }

  DomSnapshot fire(ElementId element, EventType event, const EventPayload&) override {
    auto [next, units] = step(element, event);
    (void)units;
    return snapshot(next);
  }

  // Next state and the units this firing covers.
  std::pair<std::string, std::vector<std::string>> step(ElementId element, EventType event) {
    const auto& st = app_->states.at(current_);
    if (element >= st.elements.size())
      throw UnknownElementError("state '" + current_ + "' has no element " + std::to_string(element));
    auto it = app_->transitions.find({current_, element, event});
    if (it == app_->transitions.end()) return {current_, {}};
    for (const auto& u : it->second.units) ledger_.cover(unit_key(u), 0, app_->unit_weights.at(u));
    current_ = it->second.target;
    enter(current_);
    return {current_, it->second.units};
  }

  CoverageLedger coverage() override { return ledger_; }

  const std::string& current_state() const noexcept { return current_; }
  const MockAppSpec& app() const noexcept { return *app_; }

  static std::string unit_key(const std::string& unit) { return "unit:" + unit; }

 private:
  // Entering a state loads the code behind its outgoing transitions.
  void enter(const std::string& state) {
    for (auto it = app_->transitions.lower_bound({state, 0, EventType::click});
         it != app_->transitions.end() && it->first.state == state; ++it)
      for (const auto& u : it->second.units) ledger_.discover(unit_key(u), 0, app_->unit_weights.at(u));
  }

  DomSnapshot snapshot(const std::string& state) {
    auto it = cache_.find(state);
    if (it == cache_.end()) {
      const auto& st = app_->states.at(state);
      it = cache_.emplace(state, build_snapshot(state, observe_state(st, false), serialize_state(state, st),
                                                app_->name)).first;
    }
    return it->second;
  }

  std::shared_ptr<const MockAppSpec> app_;
  std::string current_;
  CoverageLedger ledger_;
  std::map<std::string, DomSnapshot> cache_;
};

// Fire outcome as a plain function of the app description.
inline std::pair<std::string, std::vector<std::string>> fire(const MockAppSpec& app, const std::string& state,
                                                             ElementId element, EventType event) {
  const auto& st = app.states.at(state);
  if (element >= st.elements.size())
    throw UnknownElementError("state '" + state + "' has no element " + std::to_string(element));
  auto it = app.transitions.find({state, element, event});
  if (it == app.transitions.end()) return {state, {}};
  return {it->second.target, it->second.units};
}

// Test double for a perfect classifier: answers from the hidden listeners.
class OraclePredictor : public ActionablePredictor {
 public:
  explicit OraclePredictor(std::shared_ptr<const MockAppSpec> app) : app_(std::move(app)) {
    for (const auto& [id, st] : app_->states) by_dom_.emplace(serialize_state(id, st), id);
  }

  bool supports(EventType) const override { return true; }

  EventSet predict(const DomSnapshot& snapshot, ElementId element, EventSet wanted) const override {
    auto it = by_dom_.find(snapshot.serialized_dom);
    if (it == by_dom_.end()) return {};
    const auto& els = app_->states.at(it->second).elements;
    if (element >= els.size()) return {};
    return EventSet::from_bits(els[element].listeners.bits() & wanted.bits());
  }

 private:
  std::shared_ptr<const MockAppSpec> app_;
  std::map<std::string, std::string> by_dom_;
};

// One state holding classes * clones clickable elements. Clones of a class
// share every style and differ only in position; each class has its own code
// unit. Document order is shuffled by the seed.
inline MockAppSpec generate_equivalence_app(std::size_t classes, std::size_t clones, std::uint64_t seed) {
  if (classes == 0 || clones == 0) throw ConfigError("classes and clones must be at least 1");
  MockAppSpec app;
  app.name = "equivalence-classes-" + std::to_string(classes) + "x" + std::to_string(clones);
  app.initial = "main";
  std::vector<std::pair<std::size_t, std::size_t>> members;
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t k = 0; k < clones; ++k) members.emplace_back(c, k);
  util::Rng rng(seed);
  util::shuffle(std::span<std::pair<std::size_t, std::size_t>>(members), rng);

  static constexpr const char* kFontWeights[] = {"400", "700", "300", "600", "500", "900", "100", "800", "200"};
  MockState st;
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto [c, k] = members[i];
    MockElement e;
    e.tag = "div";
    if (i > 0) e.parent = 0;
    e.box = {10.0 + 130.0 * static_cast<double>(k), 10.0 + 50.0 * static_cast<double>(c), 120, 40};
    e.styles["cursor"] = "pointer";
    e.styles["background-color"] =
        "rgb(" + std::to_string((37 * c) % 256) + ", " + std::to_string((91 * c + 40) % 256) + ", " +
        std::to_string((53 * c + 120) % 256) + ")";
    e.styles["font-weight"] = kFontWeights[c % 9];
    e.styles["border-top-style"] = c % 2 ? "solid" : "none";
    e.listeners = {EventType::click};
    st.elements.push_back(std::move(e));
    const std::string unit = "u" + std::to_string(c);
    app.unit_weights[unit] = 100 + 10 * c;
    app.transitions[{"main", i, EventType::click}] = {"main", {unit}};
  }
  app.states["main"] = std::move(st);
  validate_app(app);
  return app;
}

// Two states: an anchor on the first page leads to the second.
inline MockAppSpec two_state_anchor_app() {
  MockAppSpec app;
  app.name = "two-state-anchor";
  app.initial = "A";
  MockState a;
  a.elements.push_back({"body", {}, std::nullopt, {0, 0, 800, 600}, {}, {}});
  a.elements.push_back({"a", {{"href", "#b"}}, 0, {10, 10, 80, 20}, {{"cursor", "pointer"}, {"display", "inline"}}, {}});
  a.elements.push_back({"div", {}, 0, {10, 40, 200, 20}, {}, {}});
  MockState b;
  b.elements.push_back({"body", {}, std::nullopt, {0, 0, 800, 600}, {}, {}});
  b.elements.push_back({"div", {}, 0, {10, 10, 200, 20}, {}, {}});
  app.states["A"] = a;
  app.states["B"] = b;
  app.unit_weights["nav"] = 120;
  app.transitions[{"A", 1, EventType::click}] = {"B", {"nav"}};
  validate_app(app);
  return app;
}

// A chain of menu levels behind the first link of the home page plus a second
// home link: the crawler must backtrack from the end of the chain to reach it.
inline MockAppSpec deep_menu_app(std::size_t depth = 3) {
  if (depth == 0) throw ConfigError("depth must be at least 1");
  MockAppSpec app;
  app.name = "deep-menu";
  app.initial = "home";
  auto page = [](std::size_t links) {
    MockState s;
    s.elements.push_back({"body", {}, std::nullopt, {0, 0, 800, 600}, {}, {}});
    for (std::size_t i = 0; i < links; ++i)
      s.elements.push_back({"a", {{"href", "#" + std::to_string(i)}}, 0,
                            {10, 10 + 30.0 * static_cast<double>(i), 100, 20},
                            {{"cursor", "pointer"}, {"display", "inline"}}, {}});
    return s;
  };
  app.states["home"] = page(2);
  for (std::size_t d = 1; d <= depth; ++d) app.states["level" + std::to_string(d)] = page(d < depth ? 1 : 0);
  app.states["about"] = page(0);
  app.unit_weights["open-about"] = 80;
  app.transitions[{"home", 2, EventType::click}] = {"about", {"open-about"}};
  std::string prev = "home";
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::string unit = "open-level" + std::to_string(d);
    app.unit_weights[unit] = 50 + 10 * d;
    app.transitions[{prev, 1, EventType::click}] = {"level" + std::to_string(d), {unit}};
    prev = "level" + std::to_string(d);
  }
  validate_app(app);
  return app;
}

}  // namespace stylex
