#include <gtest/gtest.h>

#include "rol/adversaries.hpp"
#include "rol/dimension.hpp"
#include "rol/game.hpp"
#include "rol/learners.hpp"
#include "support.hpp"

using namespace rol;
using rol::testing::full_binary_class;
using rol::testing::gen_class;
using rol::testing::gen_map;

namespace {

struct Fixture {
  Setting setting;
  std::shared_ptr<DimensionSolver> solver;
  Fixture(HypothesisClass hc, PerturbationMap u, LabelMode mode = LabelMode::kBinary)
      : setting(std::move(hc), std::move(u)), solver(std::make_shared<DimensionSolver>(setting, mode)) {}
};

OrientationReductionLearner& as_reduction(RobustLearner& l) { return dynamic_cast<OrientationReductionLearner&>(l); }

}  // namespace

TEST(SoaOrientation, EmptySideNeverChosen) {
  Fixture f(HypothesisClass({{1, 1}}, 2, 2), PerturbationMap::identity(2));
  SoaOrientationLearner soa(f.solver);
  EXPECT_EQ(soa.predict({0, 0, 0, 1}), 1u);
}

TEST(SoaOrientation, StrictArgmax) {
  // Side 0 keeps the full class on {1, 2} (ldim 2); side 1 keeps one hypothesis.
  std::vector<HypothesisClass::Table> t;
  for (Label a = 0; a < 2; ++a)
    for (Label b = 0; b < 2; ++b) t.push_back({0, a, b});
  t.push_back({1, 0, 0});
  Fixture f(HypothesisClass(t, 3, 2), PerturbationMap::identity(3));
  SoaOrientationLearner soa(f.solver);
  EXPECT_EQ(soa.predict({0, 0, 0, 1}), 0u);
}

TEST(SoaOrientation, TieBreak) {
  Fixture f(full_binary_class(1), PerturbationMap::identity(1));
  SoaOrientationLearner low(f.solver, TieBreak::kLowLabel);
  SoaOrientationLearner high(f.solver, TieBreak::kHighLabel);
  EXPECT_EQ(low.predict({0, 0, 0, 1}), 0u);
  EXPECT_EQ(high.predict({0, 0, 0, 1}), 1u);
}

TEST(SoaOrientation, PredictionIsPure) {
  Fixture f(full_binary_class(2), PerturbationMap::total(2));
  SoaOrientationLearner soa(f.solver);
  const auto before = soa.version_space();
  (void)soa.predict({0, 1, 0, 1});
  EXPECT_EQ(soa.version_space(), before);
  EXPECT_TRUE(soa.history().empty());
}

TEST(SoaOrientation, CorrectRevealKeepsMistakes) {
  Fixture f(full_binary_class(2), PerturbationMap::identity(2));
  SoaOrientationLearner soa(f.solver);
  const OrientationQuery q{0, 0, 0, 1};
  soa.update(q, soa.choose_side(q));
  EXPECT_EQ(soa.mistakes(), 0u);
  EXPECT_EQ(soa.version_space().size(), 2);
}

TEST(SoaOrientation, EmptyingRevealIsProtocolViolation) {
  Fixture f(HypothesisClass({{0}}, 1, 2), PerturbationMap::identity(1));
  SoaOrientationLearner soa(f.solver);
  EXPECT_THROW(soa.update({0, 0, 0, 1}, 1), ProtocolViolation);
}

TEST(SoaOrientationProperties, ChoiceMatchesArgmaxOfRestrictions) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const bool multi = rng.bernoulli(0.4);
    Fixture f(gen_class(rng, n, multi ? 3 : 2, 16), gen_map(rng, n), multi ? LabelMode::kMulticlass : LabelMode::kBinary);
    const auto pairs = f.setting.compatible_pairs();
    if (pairs.empty()) continue;
    SoaOrientationLearner soa(f.solver);
    const auto [a, b] = pairs[rng.below(pairs.size())];
    const Label y0 = multi ? static_cast<Label>(rng.below(3)) : 0;
    const Label y1 = multi ? static_cast<Label>((y0 + 1 + rng.below(2)) % 3) : 1;
    const OrientationQuery q{a, b, y0, y1};
    const int d0 = f.solver->ldim(f.setting.restrict(f.setting.full(), a, y0));
    const int d1 = f.solver->ldim(f.setting.restrict(f.setting.full(), b, y1));
    const Label p = soa.predict(q);
    EXPECT_TRUE(p == y0 || p == y1);
    EXPECT_EQ(p == y0 ? d0 : d1, std::max(d0, d1));
    if (d0 == d1) { EXPECT_EQ(p, std::min(y0, y1)); }
  }
}

TEST(SoaOrientationProperties, EveryMistakeLowersDimension) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const bool multi = rng.bernoulli(0.3);
    const LabelMode mode = multi ? LabelMode::kMulticlass : LabelMode::kBinary;
    Fixture f(gen_class(rng, n, multi ? 3 : 2, 16), gen_map(rng, n), mode);
    if (f.setting.compatible_pairs().empty()) continue;
    SoaOrientationLearner soa(f.solver, rng.bernoulli(0.5) ? TieBreak::kLowLabel : TieBreak::kHighLabel);
    RandomOrientationAdversary adv(f.setting, rng.next(), 0.8);
    for (int t = 0; t < 15; ++t) {
      const auto q = adv.present();
      if (!q) break;
      const int before = f.solver->ldim(soa.version_space());
      const Label p = soa.predict(*q);
      const int side = adv.respond(p);
      soa.update(*q, side);
      if (p != q->label(side)) { EXPECT_LT(f.solver->ldim(soa.version_space()), before); }
      EXPECT_FALSE(soa.version_space().empty());
    }
    EXPECT_LE(soa.mistakes(), static_cast<std::size_t>(std::max(0, f.solver->ldim())));
  }
}

TEST(SoaOrientationProperties, TreeAdversaryForcesDimension) {
  Rng rng(23);
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 1 + rng.below(5);
    Fixture f(gen_class(rng, n, 2, 16), gen_map(rng, n));
    const int d = std::max(0, f.solver->ldim());
    for (TieBreak tie : {TieBreak::kLowLabel, TieBreak::kHighLabel}) {
      SoaOrientationLearner soa(f.solver, tie);
      TreeOrientationAdversary adv(f.solver->witness());
      const auto tr = play_orientation(f.setting, soa, adv, {static_cast<std::size_t>(d), true});
      EXPECT_EQ(tr.mistakes(), static_cast<std::size_t>(d));
    }
  }
}

TEST(Reduction, OnlyOneLabelHasCandidates) {
  Fixture f(HypothesisClass({{1, 1}}, 2, 2), PerturbationMap::identity(2));
  auto l = make_reduction_learner(f.solver);
  const auto d = l->decide(0);
  EXPECT_EQ(d.candidates[0], 0u);
  EXPECT_EQ(d.candidates[1], bit(0));
  EXPECT_EQ(d.label, 1u);
  EXPECT_FALSE(d.fallback);
}

TEST(Reduction, NoCandidatesFallsBackToOne) {
  Fixture f(full_binary_class(2), PerturbationMap::from_sets({{0}, {}}));
  auto l = make_reduction_learner(f.solver);
  const auto d = l->decide(1);
  EXPECT_TRUE(d.fallback);
  EXPECT_EQ(d.label, 1u);
}

TEST(Reduction, MulticlassFallbackIsSmallestLabel) {
  Fixture f(HypothesisClass({{0, 1}, {2, 2}}, 2, 3), PerturbationMap::from_sets({{0}, {}}),
            LabelMode::kMulticlass);
  auto l = make_reduction_learner(f.solver);
  EXPECT_EQ(l->decide(1).label, 0u);
}

TEST(Reduction, MulticlassSingleLabelWithCandidates) {
  Fixture f(HypothesisClass({{2, 0}, {2, 1}}, 2, 3), PerturbationMap::identity(2), LabelMode::kMulticlass);
  auto l = make_reduction_learner(f.solver);
  EXPECT_EQ(l->decide(0).label, 2u);
}

// Reference: P_y by brute force over hypotheses and the orientation learner
// queried for every pair in P_0 x P_1.
TEST(ReductionProperties, DecisionMatchesExhaustiveOrientationCheck) {
  Rng rng(24);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(3);
    Fixture f(gen_class(rng, n, 2, 8), gen_map(rng, n, 0.5));
    auto l = make_reduction_learner(f.solver);
    SoaOrientationLearner oracle(f.solver);
    const auto& hc = f.setting.hypotheses();
    const PerturbationMap& u = f.setting.perturbations();
    for (Instance z = 0; z < n; ++z) {
      std::vector<Instance> p[2];
      for (Instance x = 0; x < n; ++x) {
        if (!u.allows(x, z)) continue;
        for (Label y = 0; y < 2; ++y)
          for (std::size_t h = 0; h < hc.size(); ++h)
            if (adversarial_loss(hc, h, x, y, u) == 0) {
              p[y].push_back(x);
              break;
            }
      }
      int winner = -1;
      for (Label y = 0; y < 2 && winner < 0; ++y)
        for (Instance xy : p[y]) {
          bool all = true;
          for (Instance xo : p[1 - y]) {
            const OrientationQuery q = y == 0 ? OrientationQuery{xy, xo, 0, 1} : OrientationQuery{xo, xy, 0, 1};
            all = all && oracle.predict(q) == y;
          }
          if (all) {
            winner = static_cast<int>(y);
            break;
          }
        }
      EXPECT_EQ(l->predict(z), winner < 0 ? 1u : static_cast<Label>(winner));
    }
  }
}

TEST(ReductionProperties, RealizableRunsRespectDimension) {
  Rng rng(25);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const bool multi = rng.bernoulli(0.3);
    const LabelMode mode = multi ? LabelMode::kMulticlass : LabelMode::kBinary;
    Fixture f(gen_class(rng, n, multi ? 3 : 2, 16), gen_map(rng, n), mode);
    const auto d = static_cast<std::size_t>(std::max(0, f.solver->ldim()));
    LearnerOptions lo;
    lo.tie = rng.bernoulli(0.5) ? TieBreak::kLowLabel : TieBreak::kHighLabel;
    auto l = make_reduction_learner(f.solver, lo);
    RandomRobustAdversary adv(f.setting, rng.next(), 0.9);
    for (int t = 0; t < 20; ++t) {
      const auto z = adv.emit();
      if (!z) break;
      const auto dec = l->decide(*z);
      const Example e = adv.respond(dec.label);
      EXPECT_TRUE(has(dec.candidates[e.y], e.x));
      const std::size_t history = l->orientation_history().size();
      l->update(*z, e.x, e.y);
      EXPECT_EQ(l->orientation_history().size(), history + (dec.label != e.y ? 1 : 0));
      EXPECT_FALSE(l->version_space().empty());
      if (!multi) { EXPECT_FALSE(dec.several); }
    }
    EXPECT_LE(l->mistakes(), l->orientation_history().size());
    EXPECT_LE(l->orientation_history().size(), d);
  }
}

TEST(ReductionProperties, TwoLabelMulticlassRuleMatchesBinaryRule) {
  Rng rng(26);
  std::size_t compared = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(5);
    const auto hc = gen_class(rng, n, 2, 16);
    const auto u = gen_map(rng, n);
    Fixture fb(hc, u, LabelMode::kBinary);
    Fixture fm(hc, u, LabelMode::kMulticlass);
    auto b = make_reduction_learner(fb.solver);
    auto m = make_reduction_learner(fm.solver);
    RandomRobustAdversary adv(fb.setting, rng.next(), 0.7);
    for (int t = 0; t < 15; ++t) {
      const auto z = adv.emit();
      if (!z) break;
      const auto db = b->decide(*z);
      const auto dm = m->decide(*z);
      if (db.fallback || dm.fallback) break;  // the two rules use different fallbacks
      ASSERT_EQ(db.label, dm.label);
      ++compared;
      const Example e = adv.respond(db.label);
      b->update(*z, e.x, e.y);
      m->update(*z, e.x, e.y);
    }
  }
  EXPECT_GT(compared, 200u);
}

TEST(Reduction, StrictModeRejectsEmptyingReveal) {
  Fixture f(HypothesisClass({{0, 0}}, 2, 2), PerturbationMap::identity(2));
  auto l = make_reduction_learner(f.solver);
  (void)l->predict(0);
  EXPECT_THROW(l->update(0, 0, 1), ProtocolViolation);
}

TEST(Reduction, TolerantModeGoesQuiet) {
  Fixture f(HypothesisClass({{0, 0}}, 2, 2), PerturbationMap::identity(2));
  LearnerOptions lo;
  lo.strict = false;
  lo.empty_prediction = 0;
  auto l = make_reduction_learner(f.solver, lo);
  l->update(0, 0, 1);
  EXPECT_TRUE(l->exhausted());
  EXPECT_EQ(l->predict(1), 0u);
  l->update(1, 1, 1);
  EXPECT_EQ(l->mistakes(), 2u);
}

TEST(Lazy, NoMistakesLeavesInnerStateUntouched) {
  Fixture f(HypothesisClass({{0, 0}, {0, 1}}, 2, 2), PerturbationMap::identity(2));
  LazyLearner lazy(make_reduction_learner(f.solver));
  auto eager = make_reduction_learner(f.solver);
  EXPECT_EQ(lazy.predict(1), 0u);
  lazy.update(1, 1, 0);
  EXPECT_EQ(eager->predict(1), 0u);
  eager->update(1, 1, 0);
  EXPECT_EQ(lazy.mistakes(), 0u);
  EXPECT_EQ(as_reduction(lazy.inner()).version_space(), f.setting.full());
  EXPECT_EQ(eager->version_space().size(), 1);
}

TEST(LazyProperties, MistakesWithinDimension) {
  Rng rng(27);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.below(5);
    Fixture f(gen_class(rng, n, 2, 16), gen_map(rng, n));
    auto lazy = make_robust_learner("soa-lazy", f.solver);
    RandomRobustAdversary adv(f.setting, rng.next(), 0.9);
    const auto tr = play_robust(f.setting, *lazy, adv, {20, true});
    EXPECT_LE(tr.mistakes(), static_cast<std::size_t>(std::max(0, f.solver->ldim())));
    auto& inner = as_reduction(dynamic_cast<LazyLearner&>(*lazy).inner());
    EXPECT_EQ(inner.mistakes(), tr.mistakes());
  }
}

TEST(Baselines, MajorityVote) {
  const Setting s(HypothesisClass({{0, 1}, {1, 1}, {1, 0}}, 2, 2), PerturbationMap::identity(2));
  MajorityVoteLearner m(s);
  EXPECT_EQ(m.predict(0), 1u);
  EXPECT_EQ(m.predict(1), 1u);
  m.update(1, 1, 0);
  EXPECT_EQ(m.predict(0), 1u);
  m.update(0, 0, 0);
  EXPECT_EQ(m.predict(0), 1u);  // empty version space
}

TEST(Baselines, MajorityTiesGoLow) {
  const Setting s(full_binary_class(1), PerturbationMap::identity(1));
  MajorityVoteLearner m(s);
  EXPECT_EQ(m.predict(0), 0u);
}

TEST(Registry, AllNamesConstruct) {
  Fixture f(full_binary_class(2), PerturbationMap::identity(2));
  for (const auto& name : robust_learner_names()) EXPECT_NE(make_robust_learner(name, f.solver), nullptr);
  for (const auto& name : orientation_learner_names()) EXPECT_NE(make_orientation_learner(name, f.solver), nullptr);
  EXPECT_THROW(make_robust_learner("nope", f.solver), DomainError);
  EXPECT_EQ(make_robust_learner("soa-lazy", f.solver)->name(), "soa-lazy");
}

TEST(Protocol, PerturbationOutsideUIsRejectedWithRound) {
  Fixture f(full_binary_class(2), PerturbationMap::identity(2));
  ConstantLearner c(0);
  SequenceAdversary adv({{0, 0, 0}, {1, 0, 1}});
  try {
    play_robust(f.setting, c, adv, {5, false});
    FAIL() << "expected a protocol violation";
  } catch (const ProtocolViolation& e) {
    EXPECT_EQ(e.round(), 2u);
  }
}

TEST(Protocol, NonRealizableRevealIsRejectedWithRound) {
  Fixture f(HypothesisClass({{0, 0}, {1, 1}}, 2, 2), PerturbationMap::identity(2));
  ConstantLearner c(0);
  SequenceAdversary adv({{0, 0, 0}, {1, 1, 0}, {1, 1, 1}});
  try {
    play_robust(f.setting, c, adv, {5, true});
    FAIL() << "expected a protocol violation";
  } catch (const ProtocolViolation& e) {
    EXPECT_EQ(e.round(), 3u);
  }
}

TEST(Protocol, OrientationQueryOutsidePairsRejected) {
  Fixture f(full_binary_class(2), PerturbationMap::identity(2));
  SoaOrientationLearner soa(f.solver);
  TreeOrientationAdversary adv(AdversarialTree{1, {{0, 1, 0, 1}}});
  EXPECT_THROW(play_orientation(f.setting, soa, adv, {3, false}), ProtocolViolation);
}

TEST(Protocol, LossBitsMatchPredictions) {
  Rng rng(28);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + rng.below(5);
    Fixture f(gen_class(rng, n, 2, 16), gen_map(rng, n));
    RandomLearner l(2, rng.next());
    RandomRobustAdversary adv(f.setting, rng.next());
    const auto tr = play_robust(f.setting, l, adv, {12, true});
    for (const auto& r : tr.rounds) {
      EXPECT_EQ(r.loss, r.prediction != r.y ? 1 : 0);
      EXPECT_TRUE(f.setting.perturbations().allows(r.x, *r.z));
    }
  }
}
