#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "stylex/core/event_type.hpp"
#include "stylex/core/feature_schema.hpp"

namespace stylex {

using ElementId = std::size_t;

// Element geometry in CSS pixels as reported by getBoundingClientRect().
// x and y may be negative for off-viewport elements.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  bool operator==(const BoundingBox&) const = default;
};

// Computed CSS value. Numeric properties (opacity, flex-grow) hold a double,
// everything else the computed keyword string.
using CssValue = std::variant<std::string, double>;

// The 68 model features of one element, plus the raw values of the extra
// binary-predictor source properties (those are only used by style signatures,
// never by the classifier).
struct FeatureVector {
  BoundingBox box;
  std::int64_t dom_depth = 0;
  std::int64_t descendant_count = 0;
  std::int64_t subtree_height = 0;
  std::array<CssValue, kCssFeatureCount> css{};
  std::array<bool, kBinaryPredictorCount> binary{};
  std::array<std::string, kExtraSourceProperties.size()> predictor_sources{};

  bool predictor(BinaryPredictor p) const { return binary[static_cast<std::size_t>(p)]; }
  const CssValue& css_value(std::string_view property) const { return css[css_index(property)]; }

  bool operator==(const FeatureVector&) const = default;
};

// One value per schema slot. Numeric and binary features are doubles
// (binary as 0/1); categorical features are strings.
using FeatureValue = std::variant<double, std::string>;

inline std::vector<FeatureValue> to_feature_row(const FeatureVector& fv) {
  std::vector<FeatureValue> row;
  row.reserve(kFeatureCount);
  row.emplace_back(fv.box.x);
  row.emplace_back(fv.box.y);
  row.emplace_back(fv.box.width);
  row.emplace_back(fv.box.height);
  row.emplace_back(static_cast<double>(fv.dom_depth));
  row.emplace_back(static_cast<double>(fv.descendant_count));
  row.emplace_back(static_cast<double>(fv.subtree_height));
  for (const auto& v : fv.css) {
    if (const auto* d = std::get_if<double>(&v))
      row.emplace_back(*d);
    else
      row.emplace_back(std::get<std::string>(v));
  }
  for (bool b : fv.binary) row.emplace_back(b ? 1.0 : 0.0);
  return row;
}

struct LabeledElement {
  ElementId element_id = 0;
  FeatureVector features;
  EventSet direct_listeners;
  EventSet effective_labels;
  bool is_default_actionable = false;
  std::string site_id;
  std::string snapshot_id;
  // Metadata only; never a model feature.
  std::string tag_name;
  // Only the attributes needed for default-actionable detection (href, type).
  std::map<std::string, std::string> attributes;
  // False when listener harvesting failed; such rows are kept out of corpora.
  bool listeners_known = true;

  bool operator==(const LabeledElement&) const = default;
};

// A page at one instant. Element ids are preorder indices, so elements[i] has
// element_id == i and children[i] lists the ids of its children.
struct DomSnapshot {
  std::string snapshot_id;
  ElementId root = 0;
  std::vector<std::vector<ElementId>> children;
  std::vector<LabeledElement> elements;
  std::string serialized_dom;

  std::size_t size() const noexcept { return elements.size(); }

  bool operator==(const DomSnapshot&) const = default;
};

}  // namespace stylex
