// Agnostic robust online learning.
//
// One expert A_J per round subset J of size <= ldim_u: A_J is a lazy
// orientation-reduction learner that is only shown the rounds in J and
// predicts 0 once its version space is empty. The experts are aggregated by
// the exponentially weighted forecaster tuned for horizon T.
#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "rol/adversaries.hpp"
#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/experts.hpp"
#include "rol/game.hpp"
#include "rol/learners.hpp"
#include "rol/random.hpp"
#include "rol/stats.hpp"

namespace rol {

inline constexpr std::size_t kMaxSubsetExperts = 4096;

/// sum_{k <= L} C(T, k).
inline double subset_expert_count(std::size_t horizon, std::size_t dimension) {
  double n = 0;
  for (std::size_t k = 0; k <= std::min(dimension, horizon); ++k) n += binomial(horizon, k);
  return n;
}

/// Lazy realizable learner trained only on the rounds in J (0-based, sorted).
class SubsetExpert {
 public:
  SubsetExpert(const std::shared_ptr<DimensionSolver>& solver, std::vector<std::size_t> rounds)
      : rounds_(std::move(rounds)) {
    LearnerOptions opt;
    opt.strict = false;
    opt.empty_prediction = 0;
    learner_ = std::make_unique<LazyLearner>(make_reduction_learner(solver, opt));
  }

  Label predict(Instance z) { return learner_->predict(z); }

  /// Reveal of round t; forwarded to the lazy learner only when t is in J.
  void observe(std::size_t t, Instance z, Instance x, Label y) {
    if (std::binary_search(rounds_.begin(), rounds_.end(), t)) learner_->update(z, x, y);
  }

  const std::vector<std::size_t>& rounds() const noexcept { return rounds_; }

 private:
  std::vector<std::size_t> rounds_;
  std::unique_ptr<LazyLearner> learner_;
};

/// All J subseteq {0..T-1} with |J| <= L, by size then lexicographically.
inline std::vector<SubsetExpert> build_subset_experts(const std::shared_ptr<DimensionSolver>& solver,
                                                      std::size_t horizon, std::size_t dimension,
                                                      std::size_t max_experts = kMaxSubsetExperts) {
  const double needed = subset_expert_count(horizon, dimension);
  if (needed > static_cast<double>(max_experts))
    throw LimitExceeded("subset experts: " + std::to_string(static_cast<long long>(needed)) +
                        " needed for T = " + std::to_string(horizon) + ", L = " + std::to_string(dimension) +
                        "; limit is " + std::to_string(max_experts));
  std::vector<SubsetExpert> experts;
  experts.reserve(static_cast<std::size_t>(needed));
  std::vector<std::size_t> j;
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> void {
    if (j.size() == size) {
      experts.emplace_back(solver, j);
      return;
    }
    for (std::size_t t = start; t < horizon; ++t) {
      j.push_back(t);
      self(self, t + 1, size);
      j.pop_back();
    }
  };
  for (std::size_t k = 0; k <= std::min(dimension, horizon); ++k) rec(rec, 0, k);
  return experts;
}

inline std::vector<SubsetExpert> build_subset_experts(const std::shared_ptr<DimensionSolver>& solver,
                                                      std::size_t horizon) {
  return build_subset_experts(solver, horizon, static_cast<std::size_t>(std::max(0, solver->ldim())));
}

struct AgnosticTraceRow {
  std::size_t t = 0;
  Instance z = 0, x = 0;
  Label y = 0, prediction = 0;
  double p_one = 0;
  int loss = 0;
};

/// Forecaster over subset experts, playable as an ordinary robust learner for T rounds.
class AgnosticLearner final : public RobustLearner {
 public:
  AgnosticLearner(const std::shared_ptr<DimensionSolver>& solver, std::size_t horizon, std::uint64_t seed)
      : experts_(build_subset_experts(solver, horizon)),
        pool_(experts_.size(), ExponentialWeights::horizon_rate(experts_.size(), horizon)),
        rng_(seed, 0) {
    if (solver->mode() != LabelMode::kBinary) throw DomainError("agnostic learner is binary only");
  }

  Label predict(Instance z) override {
    advice_.resize(experts_.size());
    for (std::size_t i = 0; i < experts_.size(); ++i) advice_[i] = experts_[i].predict(z);
    p_ = pool_.probability_of_one(advice_);
    pred_ = rng_.bernoulli(p_) ? 1 : 0;
    return pred_;
  }

  void update(Instance z, Instance x, Label y) override {
    std::vector<double> losses(experts_.size());
    for (std::size_t i = 0; i < experts_.size(); ++i) losses[i] = advice_[i] != y ? 1.0 : 0.0;
    pool_.update(losses);
    expected_loss_ += y == 1 ? 1.0 - p_ : p_;
    trace_.push_back({t_, z, x, y, pred_, p_, pred_ != y ? 1 : 0});
    for (auto& e : experts_) e.observe(t_, z, x, y);
    ++t_;
  }

  std::string name() const override { return "agnostic"; }

  std::size_t expert_count() const noexcept { return experts_.size(); }
  double expected_loss() const noexcept { return expected_loss_; }
  const std::vector<AgnosticTraceRow>& trace() const noexcept { return trace_; }
  const ExponentialWeights& pool() const noexcept { return pool_; }

 private:
  std::vector<SubsetExpert> experts_;
  ExponentialWeights pool_;
  Rng rng_;
  std::vector<Label> advice_;
  double p_ = 0;
  Label pred_ = 0;
  double expected_loss_ = 0;
  std::size_t t_ = 0;
  std::vector<AgnosticTraceRow> trace_;
};

struct RegretReport {
  std::size_t rounds = 0;
  std::size_t experts = 0;
  double learner_loss = 0;     // realised mistakes
  double expected_loss = 0;    // sum_t P(prediction != Y_t)
  int comparator_loss = 0;     // min_h sum_t l_U(h, (X_t, Y_t))
  double regret = 0;           // learner_loss - comparator_loss
  double expected_regret = 0;  // expected_loss - comparator_loss
  std::vector<AgnosticTraceRow> trace;
};

inline std::vector<Example> examples_of(std::span<const RobustStep> seq) {
  std::vector<Example> out;
  out.reserve(seq.size());
  for (const auto& s : seq) out.push_back(s.example());
  return out;
}

inline RegretReport agnostic_run(const std::shared_ptr<DimensionSolver>& solver, std::span<const RobustStep> seq,
                                 std::uint64_t seed) {
  const Setting& s = solver->setting();
  AgnosticLearner learner(solver, seq.size(), seed);
  SequenceAdversary adversary({seq.begin(), seq.end()});
  const Transcript tr = play_robust(s, learner, adversary, {seq.size(), false});
  RegretReport r;
  r.rounds = tr.rounds.size();
  r.experts = learner.expert_count();
  r.learner_loss = static_cast<double>(tr.mistakes());
  r.expected_loss = learner.expected_loss();
  const auto ex = examples_of(seq);
  r.comparator_loss = best_in_class_loss(ex, s).first;
  r.regret = r.learner_loss - r.comparator_loss;
  r.expected_regret = r.expected_loss - r.comparator_loss;
  r.trace = learner.trace();
  return r;
}

/// Bookkeeping of the compression argument behind the agnostic bound: the
/// expert indexed by the lazy learner's mistake rounds on the comparator's
/// zero-loss rounds R makes at most ldim_u + comparator loss mistakes overall.
struct Decomposition {
  int dimension = 0;
  int comparator_loss = 0;
  std::size_t comparator = 0;
  std::vector<std::size_t> realizable_rounds;  // R
  std::vector<std::size_t> mistake_rounds;     // J
  std::size_t expert_mistakes = 0;             // mistakes of A_J on the whole sequence
  std::size_t expert_mistakes_on_realizable = 0;
  bool holds() const { return expert_mistakes <= static_cast<std::size_t>(dimension + comparator_loss); }
};

inline Decomposition decompose(const std::shared_ptr<DimensionSolver>& solver, std::span<const RobustStep> seq) {
  const Setting& s = solver->setting();
  Decomposition d;
  d.dimension = solver->ldim();
  const auto ex = examples_of(seq);
  std::tie(d.comparator_loss, d.comparator) = best_in_class_loss(ex, s);
  for (std::size_t t = 0; t < seq.size(); ++t)
    if (s.loss(d.comparator, seq[t].x, seq[t].y) == 0) d.realizable_rounds.push_back(t);

  SubsetExpert lazy(solver, d.realizable_rounds);
  for (std::size_t t : d.realizable_rounds) {
    if (lazy.predict(seq[t].z) != seq[t].y) d.mistake_rounds.push_back(t);
    lazy.observe(t, seq[t].z, seq[t].x, seq[t].y);
  }

  SubsetExpert chosen(solver, d.mistake_rounds);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (chosen.predict(seq[t].z) != seq[t].y) {
      ++d.expert_mistakes;
      if (std::binary_search(d.realizable_rounds.begin(), d.realizable_rounds.end(), t))
        ++d.expert_mistakes_on_realizable;
    }
    chosen.observe(t, seq[t].z, seq[t].x, seq[t].y);
  }
  return d;
}

/// True iff some hypothesis is constant on some nonempty U(x), which
/// sample_corrupted_sequence needs.
inline bool can_sample_sequences(const Setting& s) {
  bool ok = false;
  for_each_bit(s.perturbable(), [&](std::size_t x) {
    for (Label y = 0; y < s.label_count(); ++y)
      if (!s.consistent(static_cast<Instance>(x), y).empty()) ok = true;
  });
  return ok;
}

/// Draws a sequence labelled by a random hypothesis h* (restricted to rounds
/// where h* is constant on U(x)), then flips the labels of `corruptions`
/// distinct rounds. Binary labels.
inline std::vector<RobustStep> sample_corrupted_sequence(const Setting& s, std::size_t horizon,
                                                         std::size_t corruptions, Rng& rng) {
  const auto& hc = s.hypotheses();
  std::vector<std::size_t> usable;
  std::vector<std::vector<Example>> clean(hc.size());
  for (std::size_t h = 0; h < hc.size(); ++h) {
    for_each_bit(s.perturbable(), [&](std::size_t x) {
      for (Label y = 0; y < s.label_count(); ++y)
        if (s.consistent(static_cast<Instance>(x), y).contains(h)) clean[h].push_back({static_cast<Instance>(x), y});
    });
    if (!clean[h].empty()) usable.push_back(h);
  }
  if (usable.empty()) throw DomainError("no hypothesis is constant on any nonempty perturbation set");
  const std::size_t target = usable[rng.below(usable.size())];
  std::vector<RobustStep> seq;
  for (std::size_t t = 0; t < horizon; ++t) {
    const Example e = clean[target][rng.below(clean[target].size())];
    const Instance z = static_cast<Instance>(rng.pick(s.perturbations().forward(e.x)));
    seq.push_back({z, e.x, e.y});
  }
  std::vector<std::size_t> idx(horizon);
  for (std::size_t t = 0; t < horizon; ++t) idx[t] = t;
  for (std::size_t i = 0; i < std::min(corruptions, horizon); ++i) {
    std::swap(idx[i], idx[i + rng.below(horizon - i)]);
    seq[idx[i]].y = 1 - seq[idx[i]].y;
  }
  return seq;
}

struct CoinRootSample {
  double learner_loss = 0;
  int comparator_loss = 0;
  double regret = 0;
};

/// Plays the root of a shattered tree T times with fair-coin labels against
/// the orientation-reduction learner run without the realizability guard.
inline CoinRootSample coin_root_demo(const std::shared_ptr<DimensionSolver>& solver, std::size_t horizon,
                                std::uint64_t seed) {
  const Setting& s = solver->setting();
  if (solver->ldim() < 1) throw DomainError("coin-flip root demonstration needs ldim_u >= 1");
  const TreeNode root = solver->witness(s.full(), 1).nodes.at(0);
  const Mask common = s.perturbations().forward(root.x0) & s.perturbations().forward(root.x1);
  const Instance z = static_cast<Instance>(std::countr_zero(common));
  Rng rng(seed, 1);
  std::vector<RobustStep> seq;
  for (std::size_t t = 0; t < horizon; ++t) {
    const int side = static_cast<int>(rng.below(2));
    seq.push_back({z, root.instance(side), root.label(side)});
  }
  LearnerOptions opt;
  opt.strict = false;
  opt.empty_prediction = 0;
  auto learner = make_reduction_learner(solver, opt);
  SequenceAdversary adversary(seq);
  const Transcript tr = play_robust(s, *learner, adversary, {horizon, false});
  CoinRootSample out;
  out.learner_loss = static_cast<double>(tr.mistakes());
  out.comparator_loss = best_in_class_loss(examples_of(seq), s).first;
  out.regret = out.learner_loss - out.comparator_loss;
  return out;
}

}  // namespace rol
