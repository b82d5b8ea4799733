// Learning when the true perturbation map is only known to lie in a finite
// family G. Each member U gets an expert A_U: the orientation-reduction
// learner run as if U were the truth, predicting 1 once its version space
// is empty. The experts are combined either by the exponentially weighted
// forecaster tuned with L* = max_U ldim_U, or by phased halving.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/experts.hpp"
#include "rol/game.hpp"
#include "rol/learners.hpp"
#include "rol/random.hpp"

namespace rol {

/// Candidate perturbation maps. The index of the true map is held by the
/// harness, never by a learner.
using PerturbationFamily = std::vector<PerturbationMap>;

/// One A_U per family member, each owning its Setting and dimension memo.
class FamilyExperts {
 public:
  FamilyExperts(const HypothesisClass& hc, const PerturbationFamily& family, TieBreak tie = TieBreak::kLowLabel)
      : tie_(tie) {
    if (family.empty()) throw DomainError("perturbation family must be nonempty");
    for (const auto& u : family) {
      auto s = std::make_shared<Setting>(hc, u);
      auto solver = std::make_shared<DimensionSolver>(*s, LabelMode::kBinary);
      dims_.push_back(solver->ldim());
      settings_.push_back(std::move(s));
      solvers_.push_back(std::move(solver));
    }
    for (std::size_t i = 0; i < size(); ++i) experts_.push_back(fresh(i));
  }

  std::size_t size() const noexcept { return solvers_.size(); }
  int dimension(std::size_t i) const { return dims_.at(i); }
  int max_dimension() const { return *std::max_element(dims_.begin(), dims_.end()); }
  OrientationReductionLearner& expert(std::size_t i) { return *experts_.at(i); }

  const std::vector<Label>& predict(Instance z) {
    advice_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) advice_[i] = experts_[i]->predict(z);
    return advice_;
  }

  void update(Instance z, Instance x, Label y) {
    for (auto& e : experts_) e->update(z, x, y);
  }

  /// Replaces expert i by an untrained one.
  void reset(std::size_t i) { experts_.at(i) = fresh(i); }

 private:
  std::unique_ptr<OrientationReductionLearner> fresh(std::size_t i) {
    LearnerOptions opt;
    opt.tie = tie_;
    opt.strict = false;
    opt.empty_prediction = 1;
    return make_reduction_learner(solvers_[i], opt);
  }

  TieBreak tie_;
  std::vector<std::shared_ptr<Setting>> settings_;
  std::vector<std::shared_ptr<DimensionSolver>> solvers_;
  std::vector<int> dims_;
  std::vector<std::unique_ptr<OrientationReductionLearner>> experts_;
  std::vector<Label> advice_;
};

/// Forecaster over the family experts with rate tuned to L* = max_U ldim_U(H).
class UncertainEwaLearner final : public RobustLearner {
 public:
  UncertainEwaLearner(const HypothesisClass& hc, const PerturbationFamily& family, std::uint64_t seed)
      : experts_(hc, family),
        pool_(experts_.size(), ExponentialWeights::loss_bound_rate(experts_.size(), experts_.max_dimension())),
        rng_(seed, 0) {}

  Label predict(Instance z) override {
    advice_ = experts_.predict(z);
    p_ = pool_.probability_of_one(advice_);
    return rng_.bernoulli(p_) ? 1 : 0;
  }

  void update(Instance z, Instance x, Label y) override {
    std::vector<double> losses(advice_.size());
    for (std::size_t i = 0; i < advice_.size(); ++i) losses[i] = advice_[i] != y ? 1.0 : 0.0;
    pool_.update(losses);
    expected_mistakes_ += y == 1 ? 1.0 - p_ : p_;
    experts_.update(z, x, y);
  }

  std::string name() const override { return "uncertain-ewa"; }
  double expected_mistakes() const noexcept { return expected_mistakes_; }
  FamilyExperts& experts() noexcept { return experts_; }

 private:
  FamilyExperts experts_;
  ExponentialWeights pool_;
  Rng rng_;
  std::vector<Label> advice_;
  double p_ = 0;
  double expected_mistakes_ = 0;
};

/// Phased halving over the family. Within a phase, predict the majority of
/// the alive experts (ties predict 1) and drop every alive expert that erred;
/// when none is left a new phase starts with all experts alive. Experts keep
/// learning from every reveal whether alive or not, unless `reset_on_phase`.
class PhasedHalvingLearner final : public RobustLearner {
 public:
  PhasedHalvingLearner(const HypothesisClass& hc, const PerturbationFamily& family, bool reset_on_phase = false)
      : experts_(hc, family), reset_(reset_on_phase), alive_(low_bits(experts_.size())) {
    if (hc.label_count() != 2) throw DomainError("halving over the family is binary only");
    phase_mistakes_.push_back(0);
  }

  Label predict(Instance z) override {
    advice_ = experts_.predict(z);
    int ones = 0, votes = 0;
    for_each_bit(alive_, [&](std::size_t i) {
      ++votes;
      ones += advice_[i] == 1 ? 1 : 0;
    });
    return 2 * ones >= votes ? 1 : 0;
  }

  void update(Instance z, Instance x, Label y) override {
    Label pred;
    {
      int ones = 0, votes = 0;
      for_each_bit(alive_, [&](std::size_t i) {
        ++votes;
        ones += advice_[i] == 1 ? 1 : 0;
      });
      pred = 2 * ones >= votes ? 1 : 0;
    }
    if (pred != y) {
      ++mistakes_;
      ++phase_mistakes_.back();
    }
    for_each_bit(alive_, [&](std::size_t i) {
      if (advice_[i] != y) alive_ &= ~bit(i);
    });
    experts_.update(z, x, y);
    if (alive_ == 0) {
      alive_ = low_bits(experts_.size());
      phase_mistakes_.push_back(0);
      if (reset_)
        for (std::size_t i = 0; i < experts_.size(); ++i) experts_.reset(i);
    }
  }

  std::string name() const override { return reset_ ? "halving-reset" : "halving"; }

  std::size_t mistakes() const noexcept { return mistakes_; }
  /// Mistakes per phase; the last entry is the phase in progress.
  const std::vector<std::size_t>& phase_mistakes() const noexcept { return phase_mistakes_; }
  std::size_t completed_phases() const noexcept { return phase_mistakes_.size() - 1; }
  Mask alive() const noexcept { return alive_; }
  FamilyExperts& experts() noexcept { return experts_; }

 private:
  FamilyExperts experts_;
  bool reset_;
  Mask alive_;
  std::vector<Label> advice_;
  std::size_t mistakes_ = 0;
  std::vector<std::size_t> phase_mistakes_;
};

/// True iff every Z_t lies in U(X_t) and the sequence is U-realizable.
inline bool realizable_under(const HypothesisClass& hc, const PerturbationMap& u, std::span<const RobustStep> seq) {
  const Setting s(hc, u);
  VersionSpace v = s.full();
  for (const auto& st : seq) {
    if (!u.allows(st.x, st.z)) return false;
    v = s.restrict(v, st.x, st.y);
    if (v.empty()) return false;
  }
  return true;
}

inline bool realizable_for_some_member(const HypothesisClass& hc, const PerturbationFamily& family,
                                       std::span<const RobustStep> seq) {
  for (const auto& u : family)
    if (realizable_under(hc, u, seq)) return true;
  return false;
}

struct HalvingReport {
  std::size_t mistakes = 0;
  std::vector<std::size_t> phase_mistakes;
  std::size_t completed_phases = 0;
  std::vector<std::size_t> expert_mistakes;
  std::vector<int> dimensions;
  bool valid = false;
};

inline int ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

/// (L_{U*} + 1) * ceil(log2 |G|) for |G| >= 2; ldim_{U*} for a single-member family.
inline long halving_bound(int truth_dimension, std::size_t family_size) {
  if (family_size <= 1) return truth_dimension;
  return static_cast<long>(truth_dimension + 1) * ceil_log2(family_size);
}

inline HalvingReport halving_run(const HypothesisClass& hc, const PerturbationFamily& family,
                                 std::span<const RobustStep> seq, bool reset_on_phase = false) {
  PhasedHalvingLearner learner(hc, family, reset_on_phase);
  HalvingReport r;
  r.valid = realizable_for_some_member(hc, family, seq);
  for (const auto& st : seq) {
    learner.predict(st.z);
    learner.update(st.z, st.x, st.y);
  }
  r.mistakes = learner.mistakes();
  r.phase_mistakes = learner.phase_mistakes();
  r.completed_phases = learner.completed_phases();
  for (std::size_t i = 0; i < family.size(); ++i) {
    r.expert_mistakes.push_back(learner.experts().expert(i).mistakes());
    r.dimensions.push_back(learner.experts().dimension(i));
  }
  return r;
}

struct UncertainEwaReport {
  bool valid = false;
  int max_dimension = 0;
  std::vector<double> mistakes;           // realised, one per seed
  std::vector<double> expected_mistakes;  // exact expectation over the forecaster's coins, per seed
};

inline UncertainEwaReport uncertain_ewa_run(const HypothesisClass& hc, const PerturbationFamily& family,
                                            std::span<const RobustStep> seq, std::span<const std::uint64_t> seeds) {
  UncertainEwaReport r;
  r.valid = realizable_for_some_member(hc, family, seq);
  for (std::uint64_t seed : seeds) {
    UncertainEwaLearner learner(hc, family, seed);
    r.max_dimension = learner.experts().max_dimension();
    std::size_t m = 0;
    for (const auto& st : seq) {
      if (learner.predict(st.z) != st.y) ++m;
      learner.update(st.z, st.x, st.y);
    }
    r.mistakes.push_back(static_cast<double>(m));
    r.expected_mistakes.push_back(learner.expected_mistakes());
  }
  return r;
}

/// Constant multiplying (sqrt(L* ln|G|) + ln|G|) in the known-loss forecaster bound:
/// E[mistakes] <= L* + sqrt(2 L* ln N) + ln N <= L* + sqrt(2) (sqrt(L* ln N) + ln N).
inline constexpr double kKnownLossConstant = 1.4142135623730951;

inline double uncertain_ewa_bound(int max_dimension, std::size_t family_size) {
  const double l = max_dimension;
  const double ln = std::log(static_cast<double>(family_size));
  return l + kKnownLossConstant * (std::sqrt(l * ln) + ln);
}

}  // namespace rol
