#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylex/crawl/coverage.hpp"
#include "stylex/dataset/labels.hpp"

namespace stylex {

inline constexpr int kExtractionPayloadVersion = 1;

// Page elements decoded from the in-page extraction script, with records the
// script could not read removed. page_index maps each kept element back to
// its preorder position in the live document.
struct ParsedPayload {
  std::vector<ObservedElement> elements;
  std::vector<std::size_t> page_index;
  std::size_t skipped = 0;
};

// Payload: {schema_version, elements: [{index, parent, tag, attrs, box:{x,y,w,h},
// styles, error?}]} in preorder. Children of a skipped record are attached to
// its nearest kept ancestor.
inline ParsedPayload parse_extraction_payload(const nlohmann::json& payload) {
  if (!payload.is_object() || payload.value("schema_version", 0) != kExtractionPayloadVersion)
    throw InjectionError("extraction payload has an unexpected schema version");
  const auto& els = payload.at("elements");
  ParsedPayload out;
  std::vector<std::optional<std::size_t>> kept_as(els.size());
  std::vector<std::optional<std::size_t>> parent_of(els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    const auto& e = els[i];
    if (e.at("index").get<std::size_t>() != i) throw InjectionError("payload is not in preorder");
    std::optional<std::size_t> parent;
    if (!e.at("parent").is_null()) {
      parent = e.at("parent").get<std::size_t>();
      if (*parent >= i) throw InjectionError("payload parent does not precede its child");
    } else if (i != 0) {
      throw InjectionError("payload has more than one root");
    }
    parent_of[i] = parent;
    if (e.contains("error")) {
      ++out.skipped;
      continue;
    }
    std::optional<std::size_t> kept_parent;
    for (auto p = parent; p; p = parent_of[*p])
      if (kept_as[*p]) {
        kept_parent = kept_as[*p];
        break;
      }
    if (!out.elements.empty() && !kept_parent) {
      ++out.skipped;
      continue;
    }
    ObservedElement o;
    o.parent = out.elements.empty() ? std::nullopt : kept_parent;
    o.observation.tag_name = e.at("tag").get<std::string>();
    if (e.contains("attrs"))
      for (const auto& [k, v] : e.at("attrs").items())
        if (v.is_string()) o.observation.attributes[k] = v.get<std::string>();
    const auto& b = e.at("box");
    o.observation.bounding_box = {b.at("x").get<double>(), b.at("y").get<double>(), b.at("w").get<double>(),
                                  b.at("h").get<double>()};
    for (const auto& [k, v] : e.at("styles").items()) o.observation.computed_style[k] = v.get<std::string>();
    kept_as[i] = out.elements.size();
    out.page_index.push_back(i);
    out.elements.push_back(std::move(o));
  }
  if (out.elements.empty()) throw InjectionError("extraction payload has no readable elements");
  return out;
}

struct CoverageRange {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::int64_t count = 0;
};

// Characters whose innermost enclosing range has a non-zero count. Ranges are
// properly nested block-coverage ranges from any number of functions.
inline IntervalSet covered_characters(std::vector<CoverageRange> ranges) {
  std::stable_sort(ranges.begin(), ranges.end(), [](const CoverageRange& a, const CoverageRange& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end > b.end;
  });
  IntervalSet out;
  std::vector<CoverageRange> open;
  std::uint64_t pos = 0;
  auto emit = [&](std::uint64_t from, std::uint64_t to, std::int64_t count) {
    if (count > 0 && from < to) out.add(from, to);
  };
  for (const auto& r : ranges) {
    while (!open.empty() && open.back().end <= r.start) {
      emit(pos, open.back().end, open.back().count);
      pos = std::max(pos, open.back().end);
      open.pop_back();
    }
    if (!open.empty()) emit(pos, r.start, open.back().count);
    pos = std::max(pos, r.start);
    open.push_back(r);
  }
  while (!open.empty()) {
    emit(pos, open.back().end, open.back().count);
    pos = std::max(pos, open.back().end);
    open.pop_back();
  }
  return out;
}

}  // namespace stylex
