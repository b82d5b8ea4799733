#include <gtest/gtest.h>

#include "rol/core.hpp"
#include "support.hpp"

using namespace rol;
using rol::testing::gen_class;
using rol::testing::gen_map;

namespace {

// a = 0, b = 1
HypothesisClass two_point(std::vector<HypothesisClass::Table> t) { return HypothesisClass(std::move(t), 2, 2); }

}  // namespace

TEST(AdversarialLoss, ConstantHypothesisMatchingLabel) {
  const auto hc = two_point({{0, 0}});
  for (Mask m = 0; m < 4; ++m) {
    const PerturbationMap u({m, m});
    EXPECT_EQ(adversarial_loss(hc, 0, 0, 0, u), 0);
    EXPECT_EQ(adversarial_loss(hc, 0, 1, 0, u), 0);
  }
}

TEST(AdversarialLoss, WitnessPerturbationCostsOne) {
  const auto hc = two_point({{0, 1}});
  const auto u = PerturbationMap::from_sets({{0, 1}, {1}});
  EXPECT_EQ(adversarial_loss(hc, 0, 0, 0, u), 1);
  EXPECT_EQ(adversarial_loss(hc, 0, 0, 1, u), 1);
  EXPECT_EQ(adversarial_loss(hc, 0, 1, 1, u), 0);
}

TEST(AdversarialLoss, EmptyPerturbationSetIsFree) {
  const auto hc = two_point({{0, 1}});
  const auto u = PerturbationMap::from_sets({{}, {1}});
  EXPECT_EQ(adversarial_loss(hc, 0, 0, 0, u), 0);
  EXPECT_EQ(adversarial_loss(hc, 0, 0, 1, u), 0);
}

TEST(AdversarialLoss, OutOfRangeIsDomainError) {
  const auto hc = two_point({{0, 1}});
  const auto u = PerturbationMap::identity(2);
  EXPECT_THROW(adversarial_loss(hc, 0, 2, 0, u), DomainError);
  EXPECT_THROW(adversarial_loss(hc, 0, 0, 2, u), DomainError);
  EXPECT_THROW(adversarial_loss(hc, 1, 0, 0, u), DomainError);
}

TEST(HypothesisClass, DuplicatesAreMerged) {
  std::vector<std::size_t> kept;
  const HypothesisClass hc({{0, 1}, {1, 1}, {0, 1}}, 2, 2, &kept);
  EXPECT_EQ(hc.size(), 2u);
  EXPECT_EQ(hc.merged_duplicates(), 1u);
  EXPECT_EQ(kept, (std::vector<std::size_t>{0, 1, 0}));
}

TEST(HypothesisClass, RejectsBadTables) {
  EXPECT_THROW(HypothesisClass({}, 2, 2), DomainError);
  EXPECT_THROW(HypothesisClass({{0}}, 2, 2), DomainError);
  EXPECT_THROW(HypothesisClass({{0, 2}}, 2, 2), DomainError);
}

TEST(Realizability, EmptySequence) {
  const Setting s(two_point({{0, 1}}), PerturbationMap::identity(2));
  EXPECT_TRUE(is_realizable_sequence({}, s));
}

TEST(Realizability, ContradictoryLabelsOnOverlappingSets) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto hc = gen_class(rng, 3, 2, 8);
    auto u = gen_map(rng, 3);
    std::vector<Mask> fwd = u.forward_sets();
    fwd[0] |= bit(0);
    const Setting s(hc, PerturbationMap(fwd));
    const std::vector<Example> seq{{0, 0}, {0, 1}};
    EXPECT_FALSE(is_realizable_sequence(seq, s));
  }
}

TEST(Realizability, ConstantZeroClass) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Setting s(HypothesisClass({{0, 0, 0}}, 3, 2), gen_map(rng, 3));
    const std::vector<Example> seq{{static_cast<Instance>(rng.below(3)), 0}};
    EXPECT_TRUE(is_realizable_sequence(seq, s));
  }
}

TEST(Restrict, EmptySetLeavesVersionSpaceUnchanged) {
  const Setting s(two_point({{0, 1}, {1, 1}, {0, 0}}), PerturbationMap::from_sets({{}, {1}}));
  for (Label y = 0; y < 2; ++y) EXPECT_EQ(restrict(s.full(), 0, y, s), s.full());
}

TEST(Restrict, SinglePoint) {
  const Setting s(HypothesisClass({{0}, {1}}, 1, 2), PerturbationMap::identity(1));
  const auto v = restrict(s.full(), 0, 1, s);
  EXPECT_EQ(v.bits(), bit(1));
}

TEST(Restrict, TwoPointExample) {
  // h1 = (0, 1), h2 = (1, 1), U(a) = {a, b}: only h2 labels all of U(a) with 1.
  const Setting s(two_point({{0, 1}, {1, 1}}), PerturbationMap::from_sets({{0, 1}, {1}}));
  EXPECT_EQ(restrict(s.full(), 0, 1, s).bits(), bit(1));
}

TEST(CompatiblePairs, IdentityGivesDiagonal) {
  const auto pairs = compatible_pairs(PerturbationMap::identity(4));
  ASSERT_EQ(pairs.size(), 4u);
  for (const auto& [a, b] : pairs) EXPECT_EQ(a, b);
}

TEST(CompatiblePairs, AllEmpty) { EXPECT_TRUE(compatible_pairs(PerturbationMap({0, 0, 0})).empty()); }

TEST(CompatiblePairs, TwoPointExample) {
  const auto pairs = compatible_pairs(PerturbationMap::from_sets({{0, 1}, {1}}));
  const std::vector<std::pair<Instance, Instance>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(pairs, want);
}

// Properties over random classes and maps.

TEST(CoreProperties, TransposeDuality) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(6);
    const auto u = gen_map(rng, n);
    ASSERT_TRUE(u.transpose_consistent());
    for (Instance x = 0; x < n; ++x)
      for (Instance z = 0; z < n; ++z) EXPECT_EQ(has(u.forward(x), z), has(u.preimage(z), x));
  }
}

TEST(CoreProperties, RestrictIsIdempotentAndMonotone) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const Setting s(gen_class(rng, n, 2 + rng.below(2), 16), gen_map(rng, n));
    const VersionSpace v(rng.next() & s.full().bits());
    const VersionSpace sub(rng.next() & v.bits());
    const Instance x = static_cast<Instance>(rng.below(n));
    const Label y = static_cast<Label>(rng.below(s.label_count()));
    const auto r = s.restrict(v, x, y);
    EXPECT_TRUE(r.subset_of(v));
    EXPECT_EQ(s.restrict(r, x, y), r);
    EXPECT_TRUE(s.restrict(sub, x, y).subset_of(r));
  }
}

TEST(CoreProperties, RestrictMatchesLossEnumeration) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2 + rng.below(2), 16);
    const auto u = gen_map(rng, n);
    const Setting s(hc, u);
    for (Instance x = 0; x < n; ++x)
      for (Label y = 0; y < hc.label_count(); ++y) {
        Mask want = 0;
        for (std::size_t h = 0; h < hc.size(); ++h)
          if (adversarial_loss(hc, h, x, y, u) == 0) want |= bit(h);
        EXPECT_EQ(s.consistent(x, y).bits(), want);
      }
  }
}

TEST(CoreProperties, ZeroLossMeansPointwiseAgreement) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto u = gen_map(rng, n);
    for (std::size_t h = 0; h < hc.size(); ++h)
      for (Instance x = 0; x < n; ++x)
        for (Label y = 0; y < 2; ++y)
          if (adversarial_loss(hc, h, x, y, u) == 0)
            for_each_bit(u.forward(x), [&](std::size_t z) { EXPECT_EQ(hc(h, static_cast<Instance>(z)), y); });
  }
}

TEST(CoreProperties, CompatiblePairsSymmetric) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(6);
    const auto u = gen_map(rng, n);
    const auto pairs = compatible_pairs(u);
    for (const auto& [a, b] : pairs) {
      EXPECT_TRUE(std::find(pairs.begin(), pairs.end(), std::make_pair(b, a)) != pairs.end());
      EXPECT_TRUE(u.overlaps(a, b));
    }
    std::size_t count = 0;
    for (Instance a = 0; a < n; ++a)
      for (Instance b = 0; b < n; ++b) count += u.overlaps(a, b) ? 1 : 0;
    EXPECT_EQ(pairs.size(), count);
  }
}

TEST(CoreProperties, BestInClassLossByEnumeration) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto u = gen_map(rng, n);
    const Setting s(hc, u);
    std::vector<Example> seq;
    for (int t = 0; t < 10; ++t) seq.push_back({static_cast<Instance>(rng.below(n)), static_cast<Label>(rng.below(2))});
    int want = 1 << 30;
    for (std::size_t h = 0; h < hc.size(); ++h) {
      int l = 0;
      for (const auto& e : seq) l += adversarial_loss(hc, h, e.x, e.y, u);
      want = std::min(want, l);
    }
    EXPECT_EQ(best_in_class_loss(seq, s).first, want);
    EXPECT_EQ(is_realizable_sequence(seq, s), want == 0);
  }
}
