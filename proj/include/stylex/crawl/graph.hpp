#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylex/core/types.hpp"
#include "stylex/error.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

// A state is identified by the SHA-256 of its trimmed serialized DOM, so any
// DOM change is a new state.
inline std::string abstract_state(const DomSnapshot& snapshot) {
  return util::sha256_hex(util::trim(snapshot.serialized_dom));
}

struct StateNode {
  std::string id;
  std::string snapshot_id;

  bool operator==(const StateNode&) const = default;
};

struct Edge {
  std::string from;
  ElementId element = 0;
  EventType event = EventType::click;
  std::string to;

  bool operator==(const Edge&) const = default;
};

// States in discovery order; one edge per fired action, self-loops and
// repeated transitions included.
struct StateFlowGraph {
  std::string initial;
  std::vector<StateNode> states;
  std::vector<Edge> edges;

  bool has_state(const std::string& id) const {
    return std::any_of(states.begin(), states.end(), [&](const StateNode& s) { return s.id == id; });
  }

  bool operator==(const StateFlowGraph&) const = default;
};

inline std::string graph_to_string(const StateFlowGraph& g) {
  nlohmann::ordered_json j;
  j["format"] = "stylex-state-flow-graph";
  j["schema_version"] = 1;
  j["initial"] = g.initial;
  auto states = nlohmann::ordered_json::array();
  for (const auto& s : g.states)
    states.push_back(nlohmann::ordered_json{{"id", s.id}, {"snapshot_id", s.snapshot_id}});
  j["states"] = states;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges)
    edges.push_back(nlohmann::ordered_json{
        {"from", e.from}, {"element", e.element}, {"event", to_string(e.event)}, {"to", e.to}});
  j["edges"] = edges;
  return j.dump(1) + "\n";
}

inline StateFlowGraph graph_from_string(const std::string& text) {
  StateFlowGraph g;
  try {
    auto j = nlohmann::ordered_json::parse(text);
    if (j.at("format").get<std::string>() != "stylex-state-flow-graph" ||
        j.at("schema_version").get<int>() != 1)
      throw SchemaError("not a version-1 state-flow graph");
    g.initial = j.at("initial").get<std::string>();
    for (const auto& s : j.at("states"))
      g.states.push_back({s.at("id").get<std::string>(), s.at("snapshot_id").get<std::string>()});
    for (const auto& e : j.at("edges")) {
      auto ev = parse_event_type(e.at("event").get<std::string>());
      if (!ev) throw SchemaError("unknown event in graph");
      g.edges.push_back({e.at("from").get<std::string>(), e.at("element").get<ElementId>(), *ev,
                         e.at("to").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed graph: ") + e.what());
  }
  if (!g.states.empty() && !g.has_state(g.initial)) throw SchemaError("initial state not in graph");
  for (const auto& e : g.edges)
    if (!g.has_state(e.from) || !g.has_state(e.to)) throw SchemaError("edge endpoint not in graph");
  return g;
}

// Graphviz rendering: nodes labelled with a short DOM hash, edges with
// element/event.
inline std::string graph_to_dot(const StateFlowGraph& g) {
  std::ostringstream os;
  os << "digraph state_flow {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const auto& s = g.states[i];
    os << "  \"" << s.id << "\" [label=\"s" << i << "\\n" << s.id.substr(0, 12) << "\"";
    if (s.id == g.initial) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto& e : g.edges)
    os << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\"#" << e.element << " "
       << to_string(e.event) << "\"];\n";
  os << "}\n";
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stylex
