#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stylex/dataset/corpus.hpp"
#include "stylex/dataset/labels.hpp"
#include "stylex/features/extract.hpp"
#include "stylex/util/random.hpp"

namespace stylex::testing {

inline RawElementObservation default_observation(std::string tag = "div") {
  RawElementObservation o;
  o.computed_style = default_computed_style();
  o.bounding_box = {0, 0, 10, 10};
  o.tag_name = std::move(tag);
  return o;
}

// parents[i] is the parent of element i (nullopt for the root at 0); parents
// must precede children.
inline DomSnapshot tree_snapshot(const std::vector<std::optional<std::size_t>>& parents,
                                 const std::vector<EventSet>& listeners = {}, const std::string& site = "site") {
  std::vector<ObservedElement> els;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    ObservedElement e;
    e.observation = default_observation();
    e.parent = parents[i];
    if (i < listeners.size()) e.direct_listeners = listeners[i];
    els.push_back(std::move(e));
  }
  return build_snapshot("snap", els, "<dom/>", site);
}

// Random parent list in preorder-compatible form: parent index < child index.
inline std::vector<std::optional<std::size_t>> random_parents(util::Rng& rng, std::size_t n) {
  std::vector<std::optional<std::size_t>> p(n);
  for (std::size_t i = 1; i < n; ++i) p[i] = util::uniform_below(rng, i);
  return p;
}

// Row with default styles and a few overrides, for classifier corpora.
inline LabeledElement style_row(const StyleMap& overrides, bool positive, EventType event = EventType::click,
                                const std::string& site = "s", BoundingBox box = {0, 0, 10, 10}) {
  RawElementObservation o = default_observation();
  for (const auto& [k, v] : overrides) o.computed_style[k] = v;
  o.bounding_box = box;
  LabeledElement e;
  e.features = extract_features(o, {});
  e.site_id = site;
  e.tag_name = "div";
  if (positive) {
    e.direct_listeners.insert(event);
    e.effective_labels.insert(event);
  }
  return e;
}

inline Corpus corpus_of(std::vector<LabeledElement> rows, std::string provenance = "synthetic") {
  Corpus c;
  for (auto& r : rows) c.sites.insert(r.site_id);
  c.rows = std::move(rows);
  c.provenance = std::move(provenance);
  return c;
}

// Ancestor-or-self listens for the event, by walking parent links.
inline bool ancestor_has_listener(const std::vector<std::optional<std::size_t>>& parents,
                                  const std::vector<EventSet>& listeners, std::size_t i, EventType t) {
  for (std::optional<std::size_t> cur = i; cur; cur = parents[*cur])
    if (listeners[*cur].contains(t)) return true;
  return false;
}

}  // namespace stylex::testing

namespace stylex::testing {

// Random element looks over a handful of properties; everything else stays at
// its default. Labels come from the supplied rule.
inline std::vector<LabeledElement> synthetic_rows(util::Rng& rng, std::size_t n,
                                                  const std::function<bool(const FeatureVector&)>& rule,
                                                  EventType event = EventType::click) {
  static const std::vector<std::string> cursors = {"pointer", "auto", "default", "text"};
  static const std::vector<std::string> displays = {"block", "inline", "flex", "inline-block"};
  static const std::vector<std::string> weights = {"400", "700", "300"};
  static const std::vector<std::string> images = {"none", "url(\"a.png\")"};
  static const std::vector<std::string> aligns = {"start", "center", "left", "right"};
  auto pick = [&](const std::vector<std::string>& v) { return v[util::uniform_below(rng, v.size())]; };
  std::vector<LabeledElement> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RawElementObservation o = default_observation();
    o.computed_style["cursor"] = pick(cursors);
    o.computed_style["display"] = pick(displays);
    o.computed_style["font-weight"] = pick(weights);
    o.computed_style["background-image"] = pick(images);
    o.computed_style["text-align"] = pick(aligns);
    o.computed_style["opacity"] = std::to_string(static_cast<double>(util::uniform_below(rng, 11)) / 10.0);
    if (util::uniform_below(rng, 2)) o.computed_style["border-top-style"] = "solid";
    o.bounding_box = {static_cast<double>(util::uniform_below(rng, 1000)),
                      static_cast<double>(util::uniform_below(rng, 1000)),
                      static_cast<double>(util::uniform_below(rng, 300)),
                      static_cast<double>(util::uniform_below(rng, 100))};
    StructuralPosition pos{static_cast<std::int64_t>(util::uniform_below(rng, 15)),
                           static_cast<std::int64_t>(util::uniform_below(rng, 50)),
                           static_cast<std::int64_t>(util::uniform_below(rng, 8))};
    LabeledElement e;
    e.features = extract_features(o, pos);
    e.element_id = i;
    e.site_id = "site" + std::to_string(i % 10);
    e.tag_name = "div";
    if (rule(e.features)) {
      e.direct_listeners.insert(event);
      e.effective_labels.insert(event);
    }
    rows.push_back(std::move(e));
  }
  return rows;
}

inline const std::string& css_string(const FeatureVector& fv, std::string_view property) {
  return std::get<std::string>(fv.css[css_index(property)]);
}

}  // namespace stylex::testing
