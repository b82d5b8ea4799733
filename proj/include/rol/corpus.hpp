// Deterministic, stratified scenario generation at desk scale.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "rol/core.hpp"
#include "rol/random.hpp"
#include "rol/scenario.hpp"

namespace rol {

/// How a generated perturbation map is drawn.
///   identity       U(x) = {x}
///   total          U(x) = X
///   disjoint       the U(x) are pairwise disjoint (no two distinct instances overlap)
///   random-overlap each z joins U(x) independently with probability `density`
enum class Stratum { kIdentity = 0, kTotal = 1, kDisjoint = 2, kRandomOverlap = 3 };
inline constexpr std::size_t kStratumCount = 4;

inline const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::kIdentity: return "identity";
    case Stratum::kTotal: return "total";
    case Stratum::kDisjoint: return "disjoint";
    case Stratum::kRandomOverlap: return "random-overlap";
  }
  return "?";
}

struct CorpusParams {
  std::size_t min_instances = 2;
  std::size_t max_instances = 5;
  std::size_t min_hypotheses = 1;
  std::size_t max_hypotheses = 16;
  std::size_t labels = 2;
  /// Relative weights of identity, total, disjoint, random-overlap.
  std::array<double, kStratumCount> proportions{1, 1, 1, 1};
  double density = 0.4;
  /// Random-overlap maps always contain x in U(x) when set.
  bool reflexive = true;
  /// Random-overlap maps may leave some U(x) empty when set.
  bool allow_empty = false;
  Protocol protocol = Protocol::kRobust;

  void validate() const {
    if (min_instances < 1 || min_instances > max_instances || max_instances > 5)
      throw DomainError("corpus instances must satisfy 1 <= min <= max <= 5");
    if (min_hypotheses < 1 || min_hypotheses > max_hypotheses || max_hypotheses > 16)
      throw DomainError("corpus hypotheses must satisfy 1 <= min <= max <= 16");
    if (labels < 2 || labels > 3) throw DomainError("corpus labels must be 2 or 3");
    double sum = 0;
    for (double p : proportions) {
      if (!(p >= 0)) throw DomainError("stratum proportions must be non-negative");
      sum += p;
    }
    if (!(sum > 0)) throw DomainError("stratum proportions must not all be zero");
  }
};

struct CorpusEntry {
  Stratum stratum = Stratum::kIdentity;
  Scenario scenario;
};

/// Largest-remainder apportionment of `count` items over the stratum weights.
inline std::array<std::size_t, kStratumCount> stratum_counts(const std::array<double, kStratumCount>& w,
                                                             std::size_t count) {
  double sum = 0;
  for (double p : w) sum += p;
  std::array<std::size_t, kStratumCount> out{};
  std::array<double, kStratumCount> rem{};
  std::size_t used = 0;
  for (std::size_t i = 0; i < kStratumCount; ++i) {
    const double exact = w[i] / sum * static_cast<double>(count);
    out[i] = static_cast<std::size_t>(exact);
    rem[i] = exact - static_cast<double>(out[i]);
    used += out[i];
  }
  while (used < count) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kStratumCount; ++i)
      if (rem[i] > rem[best]) best = i;
    ++out[best];
    rem[best] = -1;
    ++used;
  }
  return out;
}

namespace detail {

inline std::vector<std::string> numbered(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

}  // namespace detail

inline PerturbationMap random_perturbation(Stratum st, std::size_t n, const CorpusParams& p, Rng& rng) {
  std::vector<Mask> fwd(n, 0);
  switch (st) {
    case Stratum::kIdentity:
      for (std::size_t x = 0; x < n; ++x) fwd[x] = bit(x);
      break;
    case Stratum::kTotal:
      for (std::size_t x = 0; x < n; ++x) fwd[x] = low_bits(n);
      break;
    case Stratum::kDisjoint:
      // Each z has at most one owner, so distinct sets never meet.
      for (std::size_t z = 0; z < n; ++z) {
        const std::size_t owner = rng.below(n + 1);
        if (owner < n) fwd[owner] |= bit(z);
      }
      break;
    case Stratum::kRandomOverlap:
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z)
          if ((p.reflexive && z == x) || rng.bernoulli(p.density)) fwd[x] |= bit(z);
        if (fwd[x] == 0 && !p.allow_empty) fwd[x] = bit(rng.below(n));
      }
      break;
  }
  return PerturbationMap(std::move(fwd));
}

inline HypothesisClass random_class(std::size_t n, std::size_t labels, std::size_t count, Rng& rng) {
  std::vector<HypothesisClass::Table> tables(count, HypothesisClass::Table(n));
  for (auto& t : tables)
    for (auto& y : t) y = static_cast<Label>(rng.below(labels));
  return HypothesisClass(std::move(tables), n, labels);
}

inline Scenario random_scenario(Stratum st, const CorpusParams& p, Rng& rng, std::uint64_t seed) {
  const std::size_t n = detail::between(rng, p.min_instances, p.max_instances);
  const std::size_t m = detail::between(rng, p.min_hypotheses, p.max_hypotheses);
  Scenario sc;
  sc.instance_names = detail::numbered("x", n);
  sc.label_names = detail::numbered("", p.labels);
  sc.hypotheses = random_class(n, p.labels, m, rng);
  sc.hypothesis_names = detail::numbered("h", sc.hypotheses.size());
  sc.perturbation_names = {"U"};
  sc.perturbations = {random_perturbation(st, n, p, rng)};
  sc.game.protocol = p.protocol;
  sc.game.horizon = 2 * n + 4;
  sc.game.seed = seed;
  return sc;
}

/// `count` scenarios; strata are apportioned by `proportions` and interleaved
/// by a seeded shuffle. Scenario i draws from its own stream of `seed`.
inline std::vector<CorpusEntry> generate_corpus(const CorpusParams& p, std::size_t count, std::uint64_t seed) {
  p.validate();
  const auto counts = stratum_counts(p.proportions, count);
  std::vector<Stratum> order;
  for (std::size_t s = 0; s < kStratumCount; ++s) order.insert(order.end(), counts[s], static_cast<Stratum>(s));
  Rng shuffle(seed, 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);
  std::vector<CorpusEntry> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i + 1);
    out.push_back({order[i], random_scenario(order[i], p, rng, derive_seed(seed, i + 1))});
  }
  return out;
}

/// Scenarios carrying a family of `family_size` maps drawn from mixed strata;
/// game.truth names one of them uniformly at random.
inline std::vector<Scenario> generate_family_corpus(const CorpusParams& p, std::size_t count, std::size_t family_size,
                                                    std::uint64_t seed) {
  p.validate();
  if (family_size < 1 || family_size > 8) throw DomainError("family size must be in [1, 8]");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, family_size), i + 1);
    Scenario sc = random_scenario(Stratum::kRandomOverlap, p, rng, derive_seed(seed, i + 1));
    const std::size_t n = sc.instance_names.size();
    sc.perturbation_names = detail::numbered("U", family_size);
    sc.perturbations.clear();
    for (std::size_t g = 0; g < family_size; ++g) {
      const auto st = static_cast<Stratum>(rng.below(kStratumCount));
      sc.perturbations.push_back(random_perturbation(st, n, p, rng));
    }
    sc.game.truth = sc.perturbation_names[rng.below(family_size)];
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace rol
