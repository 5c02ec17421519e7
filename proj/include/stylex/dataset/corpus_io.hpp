#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stylex/dataset/corpus.hpp"
#include "stylex/error.hpp"

namespace stylex {

inline constexpr int kCorpusSchemaVersion = 1;

namespace corpus_detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json events_to_json(EventSet s) {
  ordered_json a = ordered_json::array();
  for (EventType e : s.to_vector()) a.push_back(std::string(to_string(e)));
  return a;
}

inline EventSet events_from_json(const ordered_json& a) {
  if (!a.is_array()) throw std::invalid_argument("event list must be an array");
  EventSet s;
  for (const auto& v : a) {
    auto e = parse_event_type(v.get<std::string>());
    if (!e) throw std::invalid_argument("unknown event type '" + v.get<std::string>() + "'");
    s.insert(*e);
  }
  return s;
}

inline ordered_json features_to_json(const FeatureVector& fv) {
  ordered_json a = ordered_json::array();
  for (const auto& value : to_feature_row(fv)) {
    if (const auto* s = std::get_if<std::string>(&value)) a.push_back(*s);
    else a.push_back(std::get<double>(value));
  }
  // Binary predictors are written as booleans.
  for (std::size_t i = 0; i < kBinaryPredictorCount; ++i)
    a[kStructuralFeatureCount + kCssFeatureCount + i] = fv.binary[i];
  return a;
}

inline double number_at(const ordered_json& a, std::size_t i) {
  if (!a[i].is_number()) throw std::invalid_argument("feature " + std::to_string(i) + " must be numeric");
  return a[i].get<double>();
}

inline std::int64_t count_at(const ordered_json& a, std::size_t i) {
  double v = number_at(a, i);
  if (v < 0 || v != static_cast<double>(static_cast<std::int64_t>(v)))
    throw std::invalid_argument("feature " + std::to_string(i) + " must be a non-negative count");
  return static_cast<std::int64_t>(v);
}

inline FeatureVector features_from_json(const ordered_json& a, const ordered_json& sources) {
  if (!a.is_array() || a.size() != kFeatureCount)
    throw std::invalid_argument("features must hold " + std::to_string(kFeatureCount) + " values");
  FeatureVector fv;
  fv.box = {number_at(a, 0), number_at(a, 1), number_at(a, 2), number_at(a, 3)};
  if (fv.box.width < 0 || fv.box.height < 0) throw std::invalid_argument("negative box size");
  fv.dom_depth = count_at(a, 4);
  fv.descendant_count = count_at(a, 5);
  fv.subtree_height = count_at(a, 6);
  for (std::size_t i = 0; i < kCssFeatureCount; ++i) {
    const auto& v = a[kStructuralFeatureCount + i];
    if (is_numeric_css_property(kCssProperties[i])) {
      if (!v.is_number()) throw std::invalid_argument(std::string(kCssProperties[i]) + " must be numeric");
      fv.css[i] = v.get<double>();
    } else {
      if (!v.is_string()) throw std::invalid_argument(std::string(kCssProperties[i]) + " must be a string");
      fv.css[i] = v.get<std::string>();
    }
  }
  for (std::size_t i = 0; i < kBinaryPredictorCount; ++i) {
    const auto& v = a[kStructuralFeatureCount + kCssFeatureCount + i];
    if (!v.is_boolean()) throw std::invalid_argument(std::string(kBinaryPredictorNames[i]) + " must be boolean");
    fv.binary[i] = v.get<bool>();
  }
  if (!sources.is_array() || sources.size() != kExtraSourceProperties.size())
    throw std::invalid_argument("style_sources must hold " +
                                std::to_string(kExtraSourceProperties.size()) + " strings");
  for (std::size_t i = 0; i < kExtraSourceProperties.size(); ++i)
    fv.predictor_sources[i] = sources[i].get<std::string>();
  return fv;
}

inline ordered_json header_json(const Corpus& corpus) {
  ordered_json h;
  h["schema_version"] = kCorpusSchemaVersion;
  h["feature_names"] = feature_names();
  h["style_source_names"] = ordered_json::array();
  for (auto n : kExtraSourceProperties) h["style_source_names"].push_back(std::string(n));
  h["sites"] = corpus.sites;
  h["provenance"] = corpus.provenance;
  return h;
}

inline ordered_json record_json(const LabeledElement& row) {
  ordered_json r;
  r["site_id"] = row.site_id;
  r["snapshot_id"] = row.snapshot_id;
  r["element_id"] = row.element_id;
  r["tag_name"] = row.tag_name;
  r["attributes"] = row.attributes;
  r["features"] = features_to_json(row.features);
  ordered_json sources = ordered_json::array();
  for (const auto& s : row.features.predictor_sources) sources.push_back(s);
  r["style_sources"] = sources;
  r["direct_listeners"] = events_to_json(row.direct_listeners);
  r["effective_labels"] = events_to_json(row.effective_labels);
  r["is_default_actionable"] = row.is_default_actionable;
  return r;
}

}  // namespace corpus_detail

// Line 1 is the header; every further line is one element record.
inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << corpus_detail::header_json(corpus).dump() << '\n';
  for (const auto& row : corpus.rows) out << corpus_detail::record_json(row).dump() << '\n';
}

inline std::string corpus_to_string(const Corpus& corpus) {
  std::ostringstream os;
  write_corpus(os, corpus);
  return os.str();
}

inline Corpus read_corpus(std::istream& in) {
  using corpus_detail::ordered_json;
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!have_header) {
      try {
        if (j.at("schema_version").get<int>() != kCorpusSchemaVersion)
          throw SchemaError("unsupported corpus schema version");
        if (j.at("feature_names").get<std::vector<std::string>>() != feature_names())
          throw SchemaError("corpus feature schema does not match the 68-feature schema");
        corpus.sites = j.at("sites").get<std::set<std::string>>();
        corpus.provenance = j.at("provenance").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("bad header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    try {
      LabeledElement row;
      row.site_id = j.at("site_id").get<std::string>();
      row.snapshot_id = j.at("snapshot_id").get<std::string>();
      row.element_id = j.at("element_id").get<ElementId>();
      row.tag_name = j.at("tag_name").get<std::string>();
      row.attributes = j.at("attributes").get<std::map<std::string, std::string>>();
      row.features = corpus_detail::features_from_json(j.at("features"), j.at("style_sources"));
      row.direct_listeners = corpus_detail::events_from_json(j.at("direct_listeners"));
      row.effective_labels = corpus_detail::events_from_json(j.at("effective_labels"));
      row.is_default_actionable = j.at("is_default_actionable").get<bool>();
      if (!corpus.sites.contains(row.site_id))
        throw std::invalid_argument("site '" + row.site_id + "' missing from header");
      corpus.rows.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header record");
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_corpus(out, corpus);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_corpus(in);
}

}  // namespace stylex
