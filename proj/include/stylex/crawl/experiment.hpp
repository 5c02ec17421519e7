#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylex/crawl/engine.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

struct StrategyRuns {
  StrategyKind kind = StrategyKind::DEF;
  std::vector<CrawlResult> runs;
};

// Mean coverage after each action, measured against the maximal set of every
// run in the comparison. A run that stopped early keeps its last value.
struct StrategySummary {
  StrategyKind kind = StrategyKind::DEF;
  std::vector<double> mean_coverage;  // index k = after k+1 actions
  std::vector<double> final_coverage; // one per repeat
  std::vector<std::size_t> actions;   // one per repeat
  // Per repeat: first action count at which the run reached its own final
  // coverage; empty entries mean the run never covered anything.
  std::vector<std::optional<std::size_t>> actions_to_final;
  std::size_t incomplete_runs = 0;

  double mean_final() const {
    if (final_coverage.empty()) return 0.0;
    double s = 0;
    for (double v : final_coverage) s += v;
    return s / static_cast<double>(final_coverage.size());
  }
};

struct Comparison {
  std::size_t horizon = 0;
  std::uint64_t maximal_weight = 0;
  std::vector<StrategySummary> strategies;
};

using BackendFactory = std::function<std::unique_ptr<Backend>()>;
using StrategyFactory = std::function<Strategy(StrategyKind, std::uint64_t seed)>;

inline std::uint64_t repeat_seed(std::uint64_t seed, StrategyKind kind, std::size_t repeat) {
  return util::derive_seed(seed, std::string(to_string(kind)) + "/" + std::to_string(repeat));
}

inline std::vector<StrategyRuns> run_repeats(const BackendFactory& make_backend, const StrategyFactory& make_strategy,
                                             const std::vector<StrategyKind>& kinds, std::size_t repeats,
                                             const CrawlBudget& budget, std::uint64_t seed) {
  if (repeats == 0) throw ConfigError("repeats must be at least 1");
  std::vector<StrategyRuns> out;
  for (StrategyKind k : kinds) {
    StrategyRuns sr{k, {}};
    for (std::size_t r = 0; r < repeats; ++r) {
      auto backend = make_backend();
      sr.runs.push_back(crawl(*backend, make_strategy(k, repeat_seed(seed, k, r)), budget));
    }
    out.push_back(std::move(sr));
  }
  return out;
}

inline Comparison summarize(const std::vector<StrategyRuns>& all) {
  std::vector<CoverageLedger> ledgers;
  Comparison c;
  for (const auto& s : all)
    for (const auto& r : s.runs) {
      ledgers.push_back(r.coverage);
      c.horizon = std::max(c.horizon, r.log.size());
    }
  const auto maximal = maximal_set(ledgers);
  c.maximal_weight = CoverageLedger::weight(maximal);
  for (const auto& s : all) {
    StrategySummary sum;
    sum.kind = s.kind;
    sum.mean_coverage.assign(c.horizon, 0.0);
    for (const auto& r : s.runs) {
      double last = 0;
      std::optional<std::size_t> reached;
      const double final_ratio = r.coverage.ratio(maximal);
      for (std::size_t k = 0; k < c.horizon; ++k) {
        if (k < r.coverage_series.size()) last = r.coverage_series[k].ratio(maximal);
        sum.mean_coverage[k] += last;
        if (!reached && k < r.coverage_series.size() && final_ratio > 0 && last >= final_ratio) reached = k + 1;
      }
      sum.final_coverage.push_back(final_ratio);
      sum.actions.push_back(r.log.size());
      sum.actions_to_final.push_back(reached);
      if (!r.complete) ++sum.incomplete_runs;
    }
    if (!s.runs.empty())
      for (double& v : sum.mean_coverage) v /= static_cast<double>(s.runs.size());
    c.strategies.push_back(std::move(sum));
  }
  return c;
}

inline std::string comparison_csv(const Comparison& c) {
  std::ostringstream os;
  os << "action";
  for (const auto& s : c.strategies) os << ',' << to_string(s.kind);
  os << '\n';
  for (std::size_t k = 0; k < c.horizon; ++k) {
    os << k + 1;
    for (const auto& s : c.strategies) os << ',' << util::format_double17(s.mean_coverage[k]);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json comparison_json(const Comparison& c) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["format"] = "stylex-comparison";
  j["schema_version"] = 1;
  j["horizon"] = c.horizon;
  j["maximal_weight"] = c.maximal_weight;
  oj arr = oj::array();
  for (const auto& s : c.strategies) {
    oj e;
    e["strategy"] = std::string(to_string(s.kind));
    e["mean_final_coverage"] = s.mean_final();
    e["final_coverage"] = s.final_coverage;
    e["actions"] = s.actions;
    oj reach = oj::array();
    for (const auto& r : s.actions_to_final) reach.push_back(r ? oj(*r) : oj(nullptr));
    e["actions_to_final"] = reach;
    e["incomplete_runs"] = s.incomplete_runs;
    e["mean_coverage_per_action"] = s.mean_coverage;
    arr.push_back(std::move(e));
  }
  j["strategies"] = std::move(arr);
  return j;
}

// Line chart of mean coverage against actions.
inline std::string comparison_svg(const Comparison& c) {
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  constexpr double W = 640, H = 400, L = 60, R = 150, T = 20, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  const double xmax = std::max<std::size_t>(c.horizon, 1);
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = T + ph - ph * i / 4.0;
    os << "<text x=\"" << L - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << i * 25 << "%</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">actions</text>\n";
  os << "<text x=\"" << L + pw << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"end\">" << c.horizon << "</text>\n";
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    const auto& s = c.strategies[i];
    const char* color = kColors[i % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << fmt(L) << ','
       << fmt(T + ph);
    for (std::size_t k = 0; k < s.mean_coverage.size(); ++k)
      os << ' ' << fmt(L + pw * static_cast<double>(k + 1) / xmax) << ',' << fmt(T + ph - ph * s.mean_coverage[k]);
    os << "\"/>\n";
    const double ly = T + 10 + 20.0 * static_cast<double>(i);
    os << "<line x1=\"" << L + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << L + pw + 36 << "\" y=\"" << ly + 4 << "\">" << to_string(s.kind) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stylex
