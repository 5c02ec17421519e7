#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stylex/classifier/boosting.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr std::string_view kModelFormat = "stylex-boosted-trees";

namespace model_detail {

using ordered_json = nlohmann::ordered_json;

inline std::string_view kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::binary: return "binary";
  }
  return "numeric";
}

inline FeatureKind parse_kind(const std::string& s) {
  if (s == "numeric") return FeatureKind::numeric;
  if (s == "categorical") return FeatureKind::categorical;
  if (s == "binary") return FeatureKind::binary;
  throw SchemaError("unknown feature kind '" + s + "'");
}

// Doubles are stored as 17-significant-digit decimal strings.
inline double parse_real(const ordered_json& j) {
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("bad real '" + s + "'");
  return v;
}

inline ordered_json node_json(const TreeNode& n) {
  ordered_json j;
  j["samples"] = n.samples;
  j["label"] = n.label;
  j["probability"] = util::format_double17(n.probability);
  if (!n.is_leaf()) {
    j["feature"] = n.feature;
    j["threshold"] = util::format_double17(n.threshold);
    j["left_values"] = n.left_values;
    j["right_values"] = n.right_values;
    j["unseen_left"] = n.unseen_left;
    j["left"] = n.left;
    j["right"] = n.right;
  }
  return j;
}

inline TreeNode node_from_json(const ordered_json& j) {
  TreeNode n;
  n.samples = j.at("samples").get<std::size_t>();
  n.label = j.at("label").get<bool>();
  n.probability = parse_real(j.at("probability"));
  if (j.contains("feature")) {
    n.feature = j.at("feature").get<std::int32_t>();
    n.threshold = parse_real(j.at("threshold"));
    n.left_values = j.at("left_values").get<std::vector<std::string>>();
    n.right_values = j.at("right_values").get<std::vector<std::string>>();
    n.unseen_left = j.at("unseen_left").get<bool>();
    n.left = j.at("left").get<std::int32_t>();
    n.right = j.at("right").get<std::int32_t>();
  }
  return n;
}

// Children must come after their parent and every node must be reachable
// exactly once.
inline void validate_tree(const DecisionTree& t, std::size_t features) {
  if (t.nodes.empty()) throw SchemaError("tree has no nodes");
  std::vector<int> refs(t.nodes.size(), 0);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const TreeNode& n = t.nodes[i];
    if (n.probability < 0 || n.probability > 1) throw SchemaError("leaf probability outside [0,1]");
    if (n.is_leaf()) continue;
    if (static_cast<std::size_t>(n.feature) >= features) throw SchemaError("split feature out of range");
    for (std::int32_t c : {n.left, n.right}) {
      if (c <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(c) >= t.nodes.size())
        throw SchemaError("bad child index in tree");
      ++refs[static_cast<std::size_t>(c)];
    }
  }
  for (std::size_t i = 1; i < refs.size(); ++i)
    if (refs[i] != 1) throw SchemaError("tree node referenced " + std::to_string(refs[i]) + " times");
}

}  // namespace model_detail

inline std::string model_to_string(const BoostedTreeModel& model) {
  using model_detail::ordered_json;
  ordered_json j;
  j["format"] = kModelFormat;
  j["schema_version"] = kModelSchemaVersion;
  j["event"] = to_string(model.event);
  ordered_json schema = ordered_json::array();
  for (const auto& f : model.feature_schema)
    schema.push_back(ordered_json{{"name", f.name}, {"kind", model_detail::kind_name(f.kind)}});
  j["feature_schema"] = schema;
  j["config"] = ordered_json{{"boosting_rounds", model.config.boosting_rounds},
                             {"min_leaf_size", model.config.min_leaf_size},
                             {"max_depth", model.config.max_depth},
                             {"seed", std::to_string(model.seed)}};
  ordered_json stages = ordered_json::array();
  for (const auto& s : model.stages) {
    ordered_json st;
    st["weight"] = util::format_double17(s.weight);
    st["training_samples"] = s.tree.training_samples;
    ordered_json nodes = ordered_json::array();
    for (const auto& n : s.tree.nodes) nodes.push_back(model_detail::node_json(n));
    st["nodes"] = nodes;
    stages.push_back(st);
  }
  j["stages"] = stages;
  return j.dump(1) + "\n";
}

inline BoostedTreeModel model_from_string(const std::string& text) {
  using model_detail::ordered_json;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("model file is not valid: ") + e.what());
  }
  BoostedTreeModel m;
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw SchemaError("not a model file");
    if (j.at("schema_version").get<int>() != kModelSchemaVersion)
      throw SchemaError("unsupported model schema version");
    auto e = parse_event_type(j.at("event").get<std::string>());
    if (!e) throw SchemaError("unknown event type in model");
    m.event = *e;
    for (const auto& f : j.at("feature_schema"))
      m.feature_schema.push_back({f.at("name").get<std::string>(),
                                  model_detail::parse_kind(f.at("kind").get<std::string>())});
    if (m.feature_schema.size() != kFeatureCount)
      throw SchemaError("model schema has " + std::to_string(m.feature_schema.size()) +
                        " features, expected " + std::to_string(kFeatureCount));
    if (m.feature_schema != feature_schema())
      throw SchemaError("model feature schema does not match the 68-feature schema");
    const auto& c = j.at("config");
    m.config.boosting_rounds = c.at("boosting_rounds").get<std::size_t>();
    m.config.min_leaf_size = c.at("min_leaf_size").get<std::size_t>();
    m.config.max_depth = c.at("max_depth").get<std::size_t>();
    m.seed = std::stoull(c.at("seed").get<std::string>());
    for (const auto& st : j.at("stages")) {
      BoostingStage s;
      s.weight = model_detail::parse_real(st.at("weight"));
      if (!(s.weight >= 0)) throw SchemaError("negative stage weight");
      s.tree.training_samples = st.at("training_samples").get<std::size_t>();
      for (const auto& n : st.at("nodes")) s.tree.nodes.push_back(model_detail::node_from_json(n));
      model_detail::validate_tree(s.tree, m.feature_schema.size());
      m.stages.push_back(std::move(s));
    }
    if (m.stages.empty() || m.stages.size() > m.config.boosting_rounds)
      throw SchemaError("stage count outside [1, boosting_rounds]");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("malformed model: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(0, std::string("malformed model: ") + e.what());
  }
  return m;
}

inline void save_model(const BoostedTreeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << model_to_string(model);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline BoostedTreeModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_string(ss.str());
}

}  // namespace stylex
