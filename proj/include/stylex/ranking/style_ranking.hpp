#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylex/core/types.hpp"
#include "stylex/error.hpp"
#include "stylex/util/text.hpp"

namespace stylex {

// Position-free look of an element: one string per required computed-style
// property (required_properties() order). Binary predictors are represented by
// the concrete values of their sources rather than by the booleans.
struct StyleSignature {
  std::vector<std::string> values;

  bool operator==(const StyleSignature&) const = default;
};

inline StyleSignature signature_of(const FeatureVector& fv) {
  StyleSignature sig;
  sig.values.reserve(kRequiredPropertyCount);
  for (const auto& v : fv.css) {
    if (const auto* d = std::get_if<double>(&v))
      sig.values.push_back(util::format_double_short(*d));
    else
      sig.values.push_back(std::get<std::string>(v));
  }
  for (const auto& s : fv.predictor_sources) sig.values.push_back(s);
  return sig;
}

// Normalized Hamming distance.
inline double delta(const StyleSignature& a, const StyleSignature& b) {
  if (a.values.size() != b.values.size())
    throw SchemaError("signatures have different slot counts");
  if (a.values.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.values[i] != b.values[i]) ++diff;
  return static_cast<double>(diff) / static_cast<double>(a.values.size());
}

struct RegistryEntry {
  StyleSignature signature;
  std::uint64_t counter = 1;

  bool operator==(const RegistryEntry&) const = default;
};

// The list of already examined style classes with how often each was
// exercised. With epsilon == 0 a signature matches only an identical one;
// otherwise it matches the first entry closer than epsilon.
class ExaminationRegistry {
 public:
  explicit ExaminationRegistry(double epsilon = 0.0) : epsilon_(epsilon) {
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  }

  double epsilon() const noexcept { return epsilon_; }
  const std::vector<RegistryEntry>& entries() const noexcept { return entries_; }
  std::uint64_t total_examinations() const noexcept { return total_; }

  std::optional<std::size_t> find(const StyleSignature& sig) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (epsilon_ == 0.0 ? e.signature == sig : delta(sig, e.signature) < epsilon_) return i;
    }
    return std::nullopt;
  }

  void record_examination(const StyleSignature& sig) {
    ++total_;
    if (auto i = find(sig)) {
      ++entries_[*i].counter;
      return;
    }
    entries_.push_back({sig, 1});
  }

  bool operator==(const ExaminationRegistry&) const = default;

  std::string to_string() const {
    nlohmann::ordered_json j;
    j["format"] = "stylex-registry";
    j["schema_version"] = 1;
    j["epsilon"] = util::format_double17(epsilon_);
    j["slot_names"] = required_properties();
    j["total_examinations"] = total_;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : entries_)
      entries.push_back(nlohmann::ordered_json{{"counter", e.counter}, {"signature", e.signature.values}});
    j["entries"] = entries;
    return j.dump(1) + "\n";
  }

  static ExaminationRegistry from_string(const std::string& text) {
    try {
      auto j = nlohmann::ordered_json::parse(text);
      if (j.at("format").get<std::string>() != "stylex-registry" || j.at("schema_version").get<int>() != 1)
        throw SchemaError("not a version-1 registry file");
      if (j.at("slot_names").get<std::vector<std::string>>() != required_properties())
        throw SchemaError("registry slot schema mismatch");
      const auto eps = util::parse_double(j.at("epsilon").get<std::string>());
      if (!eps) throw ParseError(0, "bad epsilon");
      ExaminationRegistry reg(*eps);
      std::uint64_t sum = 0;
      for (const auto& e : j.at("entries")) {
        RegistryEntry entry;
        entry.counter = e.at("counter").get<std::uint64_t>();
        entry.signature.values = e.at("signature").get<std::vector<std::string>>();
        if (entry.counter == 0 || entry.signature.values.size() != kRequiredPropertyCount)
          throw SchemaError("invalid registry entry");
        sum += entry.counter;
        reg.entries_.push_back(std::move(entry));
      }
      reg.total_ = j.at("total_examinations").get<std::uint64_t>();
      if (reg.total_ != sum) throw SchemaError("registry counters do not sum to total_examinations");
      return reg;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, std::string("malformed registry: ") + e.what());
    }
  }

 private:
  double epsilon_;
  std::vector<RegistryEntry> entries_;
  std::uint64_t total_ = 0;
};

inline void record_examination(ExaminationRegistry& reg, const StyleSignature& sig) {
  reg.record_examination(sig);
}

struct RankCandidate {
  std::size_t id = 0;
  StyleSignature signature;
  EventSet predicted;

  bool operator==(const RankCandidate&) const = default;
};

// Unseen styles first in their original order, then already examined styles
// by ascending counter; ties keep the original order.
inline std::vector<RankCandidate> rank_actionables(const ExaminationRegistry& reg,
                                                   std::vector<RankCandidate> candidates) {
  struct Keyed {
    bool seen;
    std::uint64_t counter;
    std::size_t position;
  };
  std::vector<Keyed> keys(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto match = reg.find(candidates[i].signature);
    keys[i] = {match.has_value(), match ? reg.entries()[*match].counter : 0, i};
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Keyed& ka = keys[a];
    const Keyed& kb = keys[b];
    if (ka.seen != kb.seen) return !ka.seen;
    return ka.counter < kb.counter;
  });
  std::vector<RankCandidate> out;
  out.reserve(candidates.size());
  for (std::size_t i : order) out.push_back(std::move(candidates[i]));
  return out;
}

}  // namespace stylex
