#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace stylex {

inline constexpr std::size_t kStructuralFeatureCount = 7;
inline constexpr std::size_t kCssFeatureCount = 51;
inline constexpr std::size_t kBinaryPredictorCount = 10;
inline constexpr std::size_t kFeatureCount =
    kStructuralFeatureCount + kCssFeatureCount + kBinaryPredictorCount;

inline constexpr std::array<std::string_view, kStructuralFeatureCount> kStructuralFeatureNames = {
    "x", "y", "width", "height", "dom_depth", "descendant_count", "subtree_height"};

// Computed-style properties used verbatim as features, in schema order.
inline constexpr std::array<std::string_view, kCssFeatureCount> kCssProperties = {
    "align-content",
    "align-items",
    "align-self",
    "backface-visibility",
    "border-block-end-style",
    "border-block-start-style",
    "border-bottom-style",
    "border-collapse",
    "border-inline-end-style",
    "border-inline-start-style",
    "border-left-style",
    "border-right-style",
    "border-top-style",
    "box-sizing",
    "clear",
    "cursor",
    "display",
    "flex-direction",
    "flex-grow",
    "flex-wrap",
    "float",
    "font-style",
    "font-weight",
    "hyphens",
    "justify-content",
    "list-style-position",
    "list-style-type",
    "mix-blend-mode",
    "object-fit",
    "opacity",
    "outline-style",
    "overflow-wrap",
    "overflow-x",
    "overflow-y",
    "pointer-events",
    "position",
    "resize",
    "table-layout",
    "text-align",
    "text-decoration-line",
    "text-decoration-style",
    "text-overflow",
    "text-rendering",
    "text-size-adjust",
    "text-transform",
    "transform-style",
    "unicode-bidi",
    "user-select",
    "visibility",
    "white-space",
    "word-break",
};

enum class BinaryPredictor : std::size_t {
  has_animation = 0,
  has_background,
  has_border,
  has_outline,
  has_box_shadow,
  has_text_decoration,
  has_touch_action,
  has_transform,
  has_will_change,
  has_z_index,
};

inline constexpr std::array<std::string_view, kBinaryPredictorCount> kBinaryPredictorNames = {
    "has_animation",  "has_background",      "has_border",       "has_outline",
    "has_box_shadow", "has_text_decoration", "has_touch_action", "has_transform",
    "has_will_change", "has_z_index"};

// Properties the binary predictors are derived from that are not already
// among kCssProperties.
inline constexpr std::array<std::string_view, 9> kExtraSourceProperties = {
    "animation-name", "transition-property", "background-image", "background-color",
    "box-shadow",     "touch-action",        "transform",        "will-change",
    "z-index"};

inline constexpr std::size_t kRequiredPropertyCount =
    kCssFeatureCount + kExtraSourceProperties.size();

constexpr bool is_numeric_css_property(std::string_view name) noexcept {
  return name == "opacity" || name == "flex-grow";
}

enum class FeatureKind { numeric, categorical, binary };

struct FeatureSpec {
  std::string name;
  FeatureKind kind;

  bool operator==(const FeatureSpec&) const = default;
};

// The 68 ordered model features.
inline const std::vector<FeatureSpec>& feature_schema() {
  static const std::vector<FeatureSpec> schema = [] {
    std::vector<FeatureSpec> s;
    s.reserve(kFeatureCount);
    for (auto n : kStructuralFeatureNames) s.push_back({std::string(n), FeatureKind::numeric});
    for (auto n : kCssProperties)
      s.push_back({std::string(n), is_numeric_css_property(n) ? FeatureKind::numeric
                                                              : FeatureKind::categorical});
    for (auto n : kBinaryPredictorNames) s.push_back({std::string(n), FeatureKind::binary});
    return s;
  }();
  return schema;
}

inline std::vector<std::string> feature_names() {
  std::vector<std::string> out;
  for (const auto& f : feature_schema()) out.push_back(f.name);
  return out;
}

inline std::size_t feature_index(std::string_view name) {
  const auto& s = feature_schema();
  auto it = std::find_if(s.begin(), s.end(), [&](const FeatureSpec& f) { return f.name == name; });
  return it == s.end() ? kFeatureCount : static_cast<std::size_t>(it - s.begin());
}

inline std::size_t css_index(std::string_view property) {
  auto it = std::find(kCssProperties.begin(), kCssProperties.end(), property);
  return static_cast<std::size_t>(it - kCssProperties.begin());
}

// Every computed-style property an observation must carry: the CSS features
// followed by the extra predictor sources. Also the slot order of style
// signatures.
inline const std::vector<std::string>& required_properties() {
  static const std::vector<std::string> props = [] {
    std::vector<std::string> p;
    for (auto n : kCssProperties) p.emplace_back(n);
    for (auto n : kExtraSourceProperties) p.emplace_back(n);
    return p;
  }();
  return props;
}

}  // namespace stylex
