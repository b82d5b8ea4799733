#include <gtest/gtest.h>

#include "rol/adversaries.hpp"
#include "rol/uncertain.hpp"
#include "support.hpp"

using namespace rol;
using rol::testing::full_binary_class;
using rol::testing::gen_class;
using rol::testing::gen_map;

namespace {

// Realizable play under `truth`: its shattered tree, then adaptive random reveals.
std::vector<RobustStep> truth_sequence(const Setting& truth, RobustLearner& learner, std::size_t horizon,
                                       std::uint64_t seed) {
  DimensionSolver solver(truth, LabelMode::kBinary);
  ChainedAdversary<RobustAdversary> adv(std::make_unique<TreeRobustAdversary>(truth, solver.witness()),
                                        std::make_unique<RandomRobustAdversary>(truth, seed, 1.0));
  const auto tr = play_robust(truth, learner, adv, {horizon, true});
  std::vector<RobustStep> out;
  for (const auto& r : tr.rounds) out.push_back({*r.z, r.x, r.y});
  return out;
}

PerturbationFamily random_family(Rng& rng, std::size_t n, std::size_t size) {
  PerturbationFamily g;
  for (std::size_t i = 0; i < size; ++i) {
    std::vector<Mask> fwd(n);
    for (std::size_t x = 0; x < n; ++x) fwd[x] = bit(x) | (rng.next() & low_bits(n) & rng.next());
    g.emplace_back(fwd);
  }
  return g;
}

int floor_log2(std::size_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

}  // namespace

TEST(FamilyExperts, SingleMemberMatchesKnownLearner) {
  Rng rng(51);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2, 16);
    const PerturbationFamily g = random_family(rng, n, 1);
    const Setting s(hc, g[0]);
    auto solver = std::make_shared<DimensionSolver>(s, LabelMode::kBinary);
    auto known = make_reduction_learner(solver);
    PhasedHalvingLearner halving(hc, g);
    UncertainEwaLearner ewa(hc, g, 3);
    RandomRobustAdversary adv(s, rng.next(), 0.8);
    for (int t = 0; t < 15; ++t) {
      const auto z = adv.emit();
      if (!z) break;
      const Label p = known->predict(*z);
      EXPECT_EQ(halving.predict(*z), p);
      EXPECT_EQ(ewa.predict(*z), p);
      const Example e = adv.respond(p);
      known->update(*z, e.x, e.y);
      halving.update(*z, e.x, e.y);
      ewa.update(*z, e.x, e.y);
    }
    EXPECT_EQ(halving.mistakes(), known->mistakes());
    EXPECT_DOUBLE_EQ(ewa.expected_mistakes(), static_cast<double>(known->mistakes()));
    EXPECT_LE(halving.mistakes(), static_cast<std::size_t>(halving_bound(std::max(0, solver->ldim()), 1)));
  }
}

TEST(FamilyExperts, EmptiedExpertPredictsOne) {
  const HypothesisClass hc({{0, 0}}, 2, 2);
  FamilyExperts experts(hc, {PerturbationMap::identity(2)});
  experts.update(0, 0, 1);
  EXPECT_TRUE(experts.expert(0).exhausted());
  for (Instance z = 0; z < 2; ++z) EXPECT_EQ(experts.predict(z)[0], 1u);
}

TEST(FamilyExperts, DimensionsPerMember) {
  const auto hc = full_binary_class(2);
  FamilyExperts experts(hc, {PerturbationMap::identity(2), PerturbationMap::total(2), PerturbationMap({0, 0})});
  EXPECT_EQ(experts.dimension(0), 2);
  EXPECT_EQ(experts.dimension(1), 1);
  EXPECT_EQ(experts.dimension(2), 0);
  EXPECT_EQ(experts.max_dimension(), 2);
}

TEST(Halving, Bounds) {
  EXPECT_EQ(halving_bound(1, 4), 4);
  EXPECT_EQ(halving_bound(2, 8), 9);
  EXPECT_EQ(halving_bound(3, 5), 12);
  EXPECT_EQ(halving_bound(2, 1), 2);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(5), 3);
}

TEST(Halving, FourMapsDimensionOne) {
  // Two constants on two points; the truth lets either point reach both.
  const HypothesisClass hc({{0, 0}, {1, 1}}, 2, 2);
  const PerturbationFamily g{PerturbationMap::total(2), PerturbationMap::identity(2),
                             PerturbationMap::from_sets({{0, 1}, {1}}), PerturbationMap::from_sets({{0}, {0, 1}})};
  const Setting truth(hc, g[0]);
  ASSERT_EQ(ldim_u(truth, LabelMode::kBinary).value, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PhasedHalvingLearner learner(hc, g);
    const auto seq = truth_sequence(truth, learner, 12, seed);
    const auto r = halving_run(hc, g, seq);
    EXPECT_TRUE(r.valid);
    EXPECT_EQ(r.mistakes, learner.mistakes());
    EXPECT_LE(r.mistakes, 4u);
  }
}

TEST(Halving, TiesPredictOne) {
  // At z = 0 the identity expert sees only label 0; the other map never reaches 0 and falls back to 1.
  const HypothesisClass hc({{0, 0}, {0, 1}}, 2, 2);
  const PerturbationFamily g{PerturbationMap::identity(2), PerturbationMap({bit(1), bit(1)})};
  FamilyExperts probe(hc, g);
  ASSERT_EQ(probe.predict(0), (std::vector<Label>{0, 1}));
  PhasedHalvingLearner learner(hc, g);
  EXPECT_EQ(learner.predict(0), 1u);
  learner.update(0, 0, 0);
  EXPECT_EQ(learner.mistakes(), 1u);
  EXPECT_EQ(learner.alive(), bit(0));
}

TEST(HalvingProperties, PhasesAndTruthExpert) {
  Rng rng(52);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const std::size_t size = 1 + rng.below(8);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto g = random_family(rng, n, size);
    const std::size_t truth = rng.below(size);
    const Setting s(hc, g[truth]);
    PhasedHalvingLearner learner(hc, g);
    const auto seq = truth_sequence(s, learner, 30, rng.next());
    const std::size_t l = static_cast<std::size_t>(std::max(0, learner.experts().dimension(truth)));
    EXPECT_LE(learner.experts().expert(truth).mistakes(), l);
    EXPECT_LE(learner.completed_phases(), l);
    const auto& phases = learner.phase_mistakes();
    for (std::size_t p = 0; p + 1 < phases.size(); ++p)
      EXPECT_LE(phases[p], static_cast<std::size_t>(floor_log2(size) + 1));
    EXPECT_LE(phases.back(), static_cast<std::size_t>(floor_log2(size)));
    EXPECT_LE(learner.mistakes(), l * static_cast<std::size_t>(floor_log2(size) + 1) + floor_log2(size));
  }
}

// The mistake that empties the alive set belongs to the phase it ends, so a
// completed phase can cost floor(log2 |G|) + 1, one more than ceil(log2 |G|)
// when |G| is a power of two.
TEST(HalvingProperties, PhaseCanCostOneMoreThanLogOfFamily) {
  Rng rng(53);
  bool found = false;
  for (int i = 0; i < 2000 && !found; ++i) {
    const std::size_t n = 1 + rng.below(4);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto g = random_family(rng, n, 2);
    const Setting s(hc, g[0]);
    PhasedHalvingLearner learner(hc, g);
    truth_sequence(s, learner, 30, rng.next());
    for (std::size_t p = 0; p + 1 < learner.phase_mistakes().size(); ++p)
      if (learner.phase_mistakes()[p] == 2) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(UncertainEwa, SingleMemberWithinDimension) {
  Rng rng(54);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto g = random_family(rng, n, 1);
    const Setting s(hc, g[0]);
    UncertainEwaLearner learner(hc, g, rng.next());
    const auto seq = truth_sequence(s, learner, 20, rng.next());
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const auto r = uncertain_ewa_run(hc, g, seq, seeds);
    EXPECT_TRUE(r.valid);
    for (double m : r.expected_mistakes) EXPECT_LE(m, std::max(0, r.max_dimension) + 1e-9);
  }
}

TEST(UncertainEwa, BoundConstant) {
  EXPECT_NEAR(uncertain_ewa_bound(2, 8), 2 + std::sqrt(2.0) * (std::sqrt(2 * std::log(8.0)) + std::log(8.0)), 1e-12);
  EXPECT_DOUBLE_EQ(uncertain_ewa_bound(3, 1), 3.0);
}

TEST(UncertainEwa, TreeForcesTruthDimension) {
  Rng rng(55);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng.below(4);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto g = random_family(rng, n, 4);
    const Setting s(hc, g[1]);
    UncertainEwaLearner learner(hc, g, rng.next());
    DimensionSolver solver(s, LabelMode::kBinary);
    const auto forced = static_cast<std::size_t>(std::max(0, solver.ldim()));
    TreeRobustAdversary tree(s, solver.witness());
    const auto tr = play_robust(s, learner, tree, {forced, true});
    EXPECT_EQ(tr.mistakes(), forced);
  }
}

TEST(Realizability, InvalidSequencesAreFlagged) {
  const HypothesisClass hc({{0, 0}, {1, 1}}, 2, 2);
  const PerturbationFamily g{PerturbationMap::identity(2)};
  const std::vector<RobustStep> contradiction{{0, 0, 0}, {1, 1, 1}};
  EXPECT_FALSE(halving_run(hc, g, contradiction).valid);
  const std::vector<RobustStep> outside{{1, 0, 0}};
  EXPECT_FALSE(realizable_under(hc, g[0], outside));
  const std::vector<RobustStep> fine{{0, 0, 1}, {1, 1, 1}};
  EXPECT_TRUE(halving_run(hc, g, fine).valid);
}
