#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stylex/core/types.hpp"
#include "stylex/error.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

using StyleMap = std::map<std::string, std::string, std::less<>>;

// What the page reports for one element. computed_style may contain any
// number of extra properties; only required_properties() are read.
struct RawElementObservation {
  StyleMap computed_style;
  BoundingBox bounding_box;
  std::string tag_name;
  std::map<std::string, std::string> attributes;
};

struct StructuralPosition {
  std::int64_t dom_depth = 0;
  std::int64_t descendant_count = 0;
  std::int64_t subtree_height = 0;
};

struct ExtractionOptions {
  // When false, has_background looks at background-image only.
  bool background_color_counts = true;
};

namespace detail {

inline std::string_view style_of(const StyleMap& style, std::string_view property) {
  auto it = style.find(property);
  if (it == style.end()) throw IncompleteObservationError(std::string(property));
  return it->second;
}

}  // namespace detail

// True for colors that render as nothing: "transparent" or an rgb()/rgba()
// value with zero alpha.
inline bool is_fully_transparent(std::string_view color) {
  color = util::trim(color);
  if (color == "transparent") return true;
  auto open = color.find('(');
  auto close = color.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    return false;
  std::string_view fn = color.substr(0, open);
  if (fn != "rgba" && fn != "rgb") return false;
  std::string_view args = color.substr(open + 1, close - open - 1);

  std::string_view alpha;
  if (auto slash = args.rfind('/'); slash != std::string_view::npos) {
    alpha = args.substr(slash + 1);
  } else {
    int commas = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i] == ',') {
        ++commas;
        last = i;
      }
    if (commas != 3) return false;
    alpha = args.substr(last + 1);
  }
  alpha = util::trim(alpha);
  bool percent = !alpha.empty() && alpha.back() == '%';
  if (percent) alpha.remove_suffix(1);
  auto v = util::parse_double(alpha);
  return v && *v == 0.0;
}

struct PredictorRule {
  BinaryPredictor predictor;
  std::vector<std::string_view> sources;
  // Human-readable form of the non-default test.
  std::string_view rule;
};

// The fixed table of source properties and non-default tests behind each
// binary predictor. Defaults are the CSS initial values.
inline const std::array<PredictorRule, kBinaryPredictorCount>& binary_predictor_defaults() {
  static const std::array<PredictorRule, kBinaryPredictorCount> table = {{
      {BinaryPredictor::has_animation,
       {"animation-name", "transition-property"},
       "animation-name != none || transition-property not in {all, none, \"\"}"},
      {BinaryPredictor::has_background,
       {"background-image", "background-color"},
       "background-image != none || background-color not fully transparent"},
      {BinaryPredictor::has_border,
       {"border-top-style", "border-right-style", "border-bottom-style", "border-left-style"},
       "any border-*-style != none"},
      {BinaryPredictor::has_outline, {"outline-style"}, "outline-style != none"},
      {BinaryPredictor::has_box_shadow, {"box-shadow"}, "box-shadow != none"},
      {BinaryPredictor::has_text_decoration, {"text-decoration-line"}, "text-decoration-line != none"},
      {BinaryPredictor::has_touch_action, {"touch-action"}, "touch-action != auto"},
      {BinaryPredictor::has_transform, {"transform"}, "transform != none"},
      {BinaryPredictor::has_will_change, {"will-change"}, "will-change != auto"},
      {BinaryPredictor::has_z_index, {"z-index"}, "z-index != auto"},
  }};
  return table;
}

inline bool evaluate_predictor(BinaryPredictor p, const StyleMap& style,
                               const ExtractionOptions& options = {}) {
  using detail::style_of;
  switch (p) {
    case BinaryPredictor::has_animation: {
      auto tp = util::trim(style_of(style, "transition-property"));
      return style_of(style, "animation-name") != "none" || (tp != "all" && tp != "none" && !tp.empty());
    }
    case BinaryPredictor::has_background:
      return style_of(style, "background-image") != "none" ||
             (options.background_color_counts &&
              !is_fully_transparent(style_of(style, "background-color")));
    case BinaryPredictor::has_border:
      return style_of(style, "border-top-style") != "none" ||
             style_of(style, "border-right-style") != "none" ||
             style_of(style, "border-bottom-style") != "none" ||
             style_of(style, "border-left-style") != "none";
    case BinaryPredictor::has_outline: return style_of(style, "outline-style") != "none";
    case BinaryPredictor::has_box_shadow: return style_of(style, "box-shadow") != "none";
    case BinaryPredictor::has_text_decoration:
      return style_of(style, "text-decoration-line") != "none";
    case BinaryPredictor::has_touch_action: return style_of(style, "touch-action") != "auto";
    case BinaryPredictor::has_transform: return style_of(style, "transform") != "none";
    case BinaryPredictor::has_will_change: return style_of(style, "will-change") != "auto";
    case BinaryPredictor::has_z_index: return style_of(style, "z-index") != "auto";
  }
  return false;
}

inline FeatureVector extract_features(const RawElementObservation& obs,
                                      const StructuralPosition& position,
                                      const ExtractionOptions& options = {}) {
  const StyleMap& style = obs.computed_style;
  for (const auto& prop : required_properties())
    if (!style.contains(prop)) throw IncompleteObservationError(prop);

  const BoundingBox& box = obs.bounding_box;
  if (!(box.width >= 0) || !(box.height >= 0))
    throw IncompleteObservationError("bounding-box");

  FeatureVector fv;
  fv.box = box;
  fv.dom_depth = position.dom_depth;
  fv.descendant_count = position.descendant_count;
  fv.subtree_height = position.subtree_height;

  for (std::size_t i = 0; i < kCssFeatureCount; ++i) {
    std::string_view name = kCssProperties[i];
    std::string_view raw = detail::style_of(style, name);
    if (is_numeric_css_property(name)) {
      auto v = util::parse_double(raw);
      if (!v) throw IncompleteObservationError(std::string(name));
      fv.css[i] = *v;
    } else {
      fv.css[i] = std::string(raw);
    }
  }
  for (const auto& rule : binary_predictor_defaults())
    fv.binary[static_cast<std::size_t>(rule.predictor)] =
        evaluate_predictor(rule.predictor, style, options);
  for (std::size_t i = 0; i < kExtraSourceProperties.size(); ++i)
    fv.predictor_sources[i] = std::string(detail::style_of(style, kExtraSourceProperties[i]));
  return fv;
}

// Computed values of every required property on an unstyled element. Handy
// for fixtures; real pages always report their own values.
inline StyleMap default_computed_style() {
  static const StyleMap defaults = {
      {"align-content", "normal"},
      {"align-items", "normal"},
      {"align-self", "auto"},
      {"backface-visibility", "visible"},
      {"border-block-end-style", "none"},
      {"border-block-start-style", "none"},
      {"border-bottom-style", "none"},
      {"border-collapse", "separate"},
      {"border-inline-end-style", "none"},
      {"border-inline-start-style", "none"},
      {"border-left-style", "none"},
      {"border-right-style", "none"},
      {"border-top-style", "none"},
      {"box-sizing", "content-box"},
      {"clear", "none"},
      {"cursor", "auto"},
      {"display", "block"},
      {"flex-direction", "row"},
      {"flex-grow", "0"},
      {"flex-wrap", "nowrap"},
      {"float", "none"},
      {"font-style", "normal"},
      {"font-weight", "400"},
      {"hyphens", "manual"},
      {"justify-content", "normal"},
      {"list-style-position", "outside"},
      {"list-style-type", "disc"},
      {"mix-blend-mode", "normal"},
      {"object-fit", "fill"},
      {"opacity", "1"},
      {"outline-style", "none"},
      {"overflow-wrap", "normal"},
      {"overflow-x", "visible"},
      {"overflow-y", "visible"},
      {"pointer-events", "auto"},
      {"position", "static"},
      {"resize", "none"},
      {"table-layout", "auto"},
      {"text-align", "start"},
      {"text-decoration-line", "none"},
      {"text-decoration-style", "solid"},
      {"text-overflow", "clip"},
      {"text-rendering", "auto"},
      {"text-size-adjust", "auto"},
      {"text-transform", "none"},
      {"transform-style", "flat"},
      {"unicode-bidi", "normal"},
      {"user-select", "auto"},
      {"visibility", "visible"},
      {"white-space", "normal"},
      {"word-break", "normal"},
      {"animation-name", "none"},
      {"transition-property", "all"},
      {"background-image", "none"},
      {"background-color", "rgba(0, 0, 0, 0)"},
      {"box-shadow", "none"},
      {"touch-action", "auto"},
      {"transform", "none"},
      {"will-change", "auto"},
      {"z-index", "auto"},
  };
  return defaults;
}

}  // namespace stylex
