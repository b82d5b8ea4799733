// Hand-rolled generators for property tests.
#pragma once

#include "rol/core.hpp"
#include "rol/random.hpp"

namespace rol::testing {

inline HypothesisClass gen_class(Rng& rng, std::size_t n, std::size_t labels, std::size_t max_size) {
  const std::size_t m = 1 + rng.below(max_size);
  std::vector<HypothesisClass::Table> tables(m, HypothesisClass::Table(n));
  for (auto& t : tables)
    for (auto& y : t) y = static_cast<Label>(rng.below(labels));
  return HypothesisClass(std::move(tables), n, labels);
}

/// Arbitrary map: may be non-reflexive and may leave sets empty.
inline PerturbationMap gen_map(Rng& rng, std::size_t n, double density = 0.4) {
  std::vector<Mask> fwd(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z)
      if (rng.bernoulli(density)) fwd[x] |= bit(z);
  return PerturbationMap(std::move(fwd));
}

/// All 2^n binary tables over n instances.
inline HypothesisClass full_binary_class(std::size_t n) {
  std::vector<HypothesisClass::Table> tables;
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    HypothesisClass::Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = has(m, i) ? 1 : 0;
    tables.push_back(t);
  }
  return HypothesisClass(std::move(tables), n, 2);
}

/// Thresholds on a line of n points: h_k(i) = 1 iff i >= k, k = 0..n.
inline HypothesisClass thresholds(std::size_t n) {
  std::vector<HypothesisClass::Table> tables;
  for (std::size_t k = 0; k <= n; ++k) {
    HypothesisClass::Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = i >= k ? 1 : 0;
    tables.push_back(t);
  }
  return HypothesisClass(std::move(tables), n, 2);
}

}  // namespace rol::testing
