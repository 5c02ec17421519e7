#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stylex/core/types.hpp"
#include "stylex/error.hpp"
#include "stylex/util/random.hpp"

namespace stylex {

struct Corpus {
  std::vector<LabeledElement> rows;
  std::set<std::string> sites;
  std::string provenance;

  bool operator==(const Corpus&) const = default;
};

struct SplitCorpus {
  Corpus train;
  Corpus test;
};

inline bool is_positive(const LabeledElement& row, EventType event) {
  return row.effective_labels.contains(event);
}

// Appends every element of a labeled snapshot whose listeners are known.
inline void add_snapshot(Corpus& corpus, const DomSnapshot& snapshot) {
  for (const auto& e : snapshot.elements) {
    if (!e.listeners_known) continue;
    corpus.sites.insert(e.site_id);
    corpus.rows.push_back(e);
  }
}

// Under-samples negatives until both classes have the same size. Positives
// are never touched and surviving rows keep their original order. When there
// are no more negatives than positives nothing is removed.
inline Corpus balance(const Corpus& corpus, EventType event, std::uint64_t seed) {
  if (corpus.rows.empty()) throw EmptyClassError("cannot balance an empty corpus");
  std::vector<std::size_t> negatives;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < corpus.rows.size(); ++i) {
    if (is_positive(corpus.rows[i], event))
      ++positives;
    else
      negatives.push_back(i);
  }
  if (positives == 0)
    throw EmptyClassError("no positive rows for event '" + std::string(to_string(event)) + "'");

  std::vector<bool> keep(corpus.rows.size(), true);
  if (negatives.size() > positives) {
    util::Rng rng(seed);
    util::shuffle(std::span<std::size_t>(negatives), rng);
    for (std::size_t k = positives; k < negatives.size(); ++k) keep[negatives[k]] = false;
  }

  Corpus out;
  out.provenance = corpus.provenance;
  for (std::size_t i = 0; i < corpus.rows.size(); ++i)
    if (keep[i]) {
      out.rows.push_back(corpus.rows[i]);
      out.sites.insert(corpus.rows[i].site_id);
    }
  return out;
}

// Splits by site, never by row. The test side gets ceil(fraction * sites)
// sites, at least one, and the train side keeps at least one.
inline SplitCorpus split_by_site(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  if (corpus.sites.size() < 2)
    throw CannotSplitError("a site split needs at least 2 sites, got " +
                           std::to_string(corpus.sites.size()));
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test fraction must lie in (0, 1)");

  std::vector<std::string> sites(corpus.sites.begin(), corpus.sites.end());
  const std::size_t n = sites.size();
  auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  util::Rng rng(seed);
  util::shuffle(std::span<std::string>(sites), rng);
  std::set<std::string> test_sites(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(n_test));

  SplitCorpus split;
  split.train.provenance = corpus.provenance;
  split.test.provenance = corpus.provenance;
  for (const auto& s : corpus.sites) (test_sites.contains(s) ? split.test : split.train).sites.insert(s);
  for (const auto& row : corpus.rows)
    (test_sites.contains(row.site_id) ? split.test : split.train).rows.push_back(row);
  return split;
}

}  // namespace stylex
