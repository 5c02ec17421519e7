#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace stylex {

// Disjoint, sorted half-open character intervals.
class IntervalSet {
 public:
  using Interval = std::pair<std::uint64_t, std::uint64_t>;

  void add(std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return;
    auto it = std::lower_bound(spans_.begin(), spans_.end(), Interval{begin, begin},
                               [](const Interval& a, const Interval& b) { return a.second < b.first; });
    auto first = it;
    while (it != spans_.end() && it->first <= end) {
      begin = std::min(begin, it->first);
      end = std::max(end, it->second);
      ++it;
    }
    it = spans_.erase(first, it);
    spans_.insert(it, {begin, end});
  }

  void add(const IntervalSet& other) {
    for (const auto& [b, e] : other.spans_) add(b, e);
  }

  std::uint64_t size() const {
    std::uint64_t n = 0;
    for (const auto& [b, e] : spans_) n += e - b;
    return n;
  }

  bool contains(const IntervalSet& other) const {
    IntervalSet merged = *this;
    merged.add(other);
    return merged == *this;
  }

  const std::vector<Interval>& spans() const noexcept { return spans_; }
  bool empty() const noexcept { return spans_.empty(); }

  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> spans_;
};

// Covered (and discovered) code measured in characters, keyed by script.
// Simulated code units are scripts of their own whose length is the unit
// weight. The maximal set used as the coverage denominator is the union of
// what every compared run discovered.
struct CoverageLedger {
  std::map<std::string, IntervalSet> covered;
  std::map<std::string, IntervalSet> discovered;

  void cover(const std::string& script, std::uint64_t begin, std::uint64_t end) {
    covered[script].add(begin, end);
    discovered[script].add(begin, end);
  }

  void discover(const std::string& script, std::uint64_t begin, std::uint64_t end) {
    discovered[script].add(begin, end);
  }

  void merge(const CoverageLedger& other) {
    for (const auto& [k, v] : other.covered) covered[k].add(v);
    for (const auto& [k, v] : other.discovered) discovered[k].add(v);
  }

  static std::uint64_t weight(const std::map<std::string, IntervalSet>& m) {
    std::uint64_t n = 0;
    for (const auto& [_, v] : m) n += v.size();
    return n;
  }

  std::uint64_t covered_weight() const { return weight(covered); }
  std::uint64_t discovered_weight() const { return weight(discovered); }

  // covered / maximal, in [0, 1]. Only characters inside the maximal set count.
  double ratio(const std::map<std::string, IntervalSet>& maximal_set) const {
    const std::uint64_t denom = weight(maximal_set);
    if (denom == 0) return 0.0;
    std::uint64_t num = 0;
    for (const auto& [k, v] : covered) {
      auto it = maximal_set.find(k);
      if (it == maximal_set.end()) continue;
      for (const auto& [b, e] : v.spans())
        for (const auto& [mb, me] : it->second.spans()) {
          auto lo = std::max(b, mb), hi = std::min(e, me);
          if (lo < hi) num += hi - lo;
        }
    }
    return static_cast<double>(num) / static_cast<double>(denom);
  }

  bool operator==(const CoverageLedger&) const = default;
};

inline std::map<std::string, IntervalSet> maximal_set(const std::vector<CoverageLedger>& runs) {
  std::map<std::string, IntervalSet> out;
  for (const auto& r : runs) {
    for (const auto& [k, v] : r.discovered) out[k].add(v);
    for (const auto& [k, v] : r.covered) out[k].add(v);
  }
  return out;
}

}  // namespace stylex
