// Realizable learners.
//
//  * SoaOrientationLearner: standard optimal algorithm for the (multiclass)
//    orientation game; predicts the side whose restriction keeps the larger
//    ldim_u.
//  * OrientationReductionLearner: robust online learner built from any
//    orientation learner. For input z it forms P_y = {x : z in U(x), V_{x,y} != {}}
//    and predicts y when some x_y in P_y is oriented towards y against every
//    candidate of every other label. Mistakes are replayed to the orientation
//    learner as the query it got wrong.
//  * LazyLearner: forwards updates only on rounds the wrapped learner got wrong.
//  * Baselines: constant, uniform random, majority vote over the version space.
#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/game.hpp"
#include "rol/random.hpp"

namespace rol {

enum class TieBreak { kLowLabel, kHighLabel };

class SoaOrientationLearner final : public OrientationLearner {
 public:
  struct Step {
    OrientationQuery query;
    int side = 0;
    Label prediction = 0;
  };

  explicit SoaOrientationLearner(std::shared_ptr<DimensionSolver> solver, TieBreak tie = TieBreak::kLowLabel)
      : solver_(std::move(solver)), tie_(tie), v_(solver_->setting().full()) {}

  /// Side in argmax_b ldim(restrict(V, x_b, y_b)); ties resolved by label id.
  int choose_side(const OrientationQuery& q) {
    const Setting& s = solver_->setting();
    const int d0 = solver_->ldim(s.restrict(v_, q.x0, q.y0));
    const int d1 = solver_->ldim(s.restrict(v_, q.x1, q.y1));
    if (d0 != d1) return d0 > d1 ? 0 : 1;
    const int low = q.y0 < q.y1 ? 0 : 1;
    return tie_ == TieBreak::kLowLabel ? low : 1 - low;
  }

  Label predict(const OrientationQuery& q) override { return q.label(choose_side(q)); }

  void update(const OrientationQuery& q, int side) override {
    const Label pred = predict(q);
    const Label y = q.label(side);
    if (pred != y) ++mistakes_;
    history_.push_back({q, side, pred});
    v_ = solver_->setting().restrict(v_, q.instance(side), y);
    if (v_.empty()) throw ProtocolViolation("orientation reveal emptied the version space", history_.size());
  }

  std::string name() const override { return "soa"; }

  VersionSpace version_space() const noexcept { return v_; }
  std::size_t mistakes() const noexcept { return mistakes_; }
  const std::vector<Step>& history() const noexcept { return history_; }
  DimensionSolver& solver() noexcept { return *solver_; }

 private:
  std::shared_ptr<DimensionSolver> solver_;
  TieBreak tie_;
  VersionSpace v_;
  std::size_t mistakes_ = 0;
  std::vector<Step> history_;
};

/// Orientation-game baseline that always predicts `label`, or a random side when label < 0.
class FixedOrientationLearner final : public OrientationLearner {
 public:
  FixedOrientationLearner(int label, std::uint64_t seed = 0) : label_(label), rng_(seed) {}
  Label predict(const OrientationQuery& q) override {
    if (label_ >= 0) return static_cast<Label>(label_);
    return q.label(static_cast<int>(rng_.below(2)));
  }
  void update(const OrientationQuery&, int) override {}
  std::string name() const override {
    return label_ < 0 ? "random" : "const" + std::to_string(label_);
  }

 private:
  int label_;
  Rng rng_;
};

struct ReductionOptions {
  /// Multiclass rule: compare each label against all others. Binary rule otherwise.
  bool multiclass = false;
  /// Throw on non-realizable input; otherwise go quiet and predict `empty_prediction`.
  bool strict = true;
  Label empty_prediction = 1;
};

class OrientationReductionLearner final : public RobustLearner {
 public:
  struct Decision {
    Instance z = 0;
    Label label = 0;
    std::vector<Mask> candidates;  // P_y per label
    bool fallback = false;         // nobody qualified
    bool several = false;          // more than one label qualified
  };

  struct Replay {
    std::size_t round = 0;
    OrientationQuery query;
    int side = 0;
  };

  OrientationReductionLearner(const Setting& s, std::unique_ptr<OrientationLearner> orienter,
                              ReductionOptions opt = {})
      : s_(&s), orienter_(std::move(orienter)), opt_(opt), v_(s.full()) {
    if (!opt_.multiclass && s.label_count() != 2) throw DomainError("binary reduction needs two labels");
  }

  Decision decide(Instance z) {
    if (cache_ && cache_->z == z) return *cache_;
    Decision d;
    d.z = z;
    const std::size_t ny = s_->label_count();
    d.candidates.assign(ny, 0);
    if (v_.empty()) {
      d.label = opt_.empty_prediction;
      cache_ = d;
      return d;
    }
    for_each_bit(s_->candidates(z), [&](std::size_t x) {
      for (Label y = 0; y < ny; ++y)
        if (!s_->restrict(v_, static_cast<Instance>(x), y).empty()) d.candidates[y] |= bit(x);
    });
    std::vector<Label> winners;
    for (Label y = 0; y < ny; ++y)
      if (qualifies(d.candidates, y)) winners.push_back(y);
    if (winners.empty()) {
      d.fallback = true;
      d.label = opt_.multiclass ? 0 : 1;
    } else {
      d.several = winners.size() > 1;
      d.label = winners.front();
      if (d.several) ++several_events_;
    }
    cache_ = d;
    return d;
  }

  Label predict(Instance z) override { return decide(z).label; }

  void update(Instance z, Instance x, Label y) override {
    ++round_;
    const Decision d = decide(z);
    cache_.reset();
    const bool mistake = d.label != y;
    if (mistake) ++mistakes_;
    if (v_.empty()) return;
    if (mistake) replay_mistake(d, x, y);
    v_ = s_->restrict(v_, x, y);
    if (v_.empty() && opt_.strict) throw ProtocolViolation("clean reveal emptied the version space", round_);
  }

  std::string name() const override { return "soa"; }

  VersionSpace version_space() const noexcept { return v_; }
  std::size_t mistakes() const noexcept { return mistakes_; }
  const std::vector<Replay>& orientation_history() const noexcept { return replays_; }
  std::size_t several_winner_events() const noexcept { return several_events_; }
  OrientationLearner& orienter() noexcept { return *orienter_; }
  bool exhausted() const noexcept { return v_.empty(); }

 private:
  Label orient(Instance a, Instance b, Label ya, Label yb) { return orienter_->predict({a, b, ya, yb}); }

  bool qualifies(const std::vector<Mask>& p, Label y) {
    bool found = false;
    for_each_bit(p[y], [&](std::size_t xy) {
      if (found) return;
      bool all = true;
      for (Label other = 0; other < p.size() && all; ++other) {
        if (other == y) continue;
        for_each_bit(p[other], [&](std::size_t xo) {
          if (!all) return;
          Label f = opt_.multiclass || y == 0
                        ? orient(static_cast<Instance>(xy), static_cast<Instance>(xo), y, other)
                        : orient(static_cast<Instance>(xo), static_cast<Instance>(xy), other, y);
          if (f != y) all = false;
        });
      }
      if (all) found = true;
    });
    return found;
  }

  void replay_mistake(const Decision& d, Instance x, Label y) {
    if (!has(d.candidates[y], x)) {
      if (opt_.strict)
        throw ProtocolViolation("revealed (x, y) is not a candidate for z: non-realizable or z not in U(x)", round_);
      return;
    }
    for (Instance xo = 0; xo < s_->instance_count(); ++xo) {
      for (Label yo = 0; yo < s_->label_count(); ++yo) {
        if (yo == y || !has(d.candidates[yo], xo)) continue;
        OrientationQuery q;
        int side;
        if (opt_.multiclass) {
          q = {x, xo, y, yo};
          side = 0;
        } else {
          q = y == 0 ? OrientationQuery{x, xo, 0, 1} : OrientationQuery{xo, x, 0, 1};
          side = static_cast<int>(y);
        }
        if (orienter_->predict(q) != y) {
          orienter_->update(q, side);
          replays_.push_back({round_, q, side});
          return;
        }
      }
    }
    if (opt_.strict) throw InvariantViolation("mistake round without a wrongly oriented counterpart");
  }

  const Setting* s_;
  std::unique_ptr<OrientationLearner> orienter_;
  ReductionOptions opt_;
  VersionSpace v_;
  std::optional<Decision> cache_;
  std::size_t round_ = 0;
  std::size_t mistakes_ = 0;
  std::size_t several_events_ = 0;
  std::vector<Replay> replays_;
};

/// Updates the wrapped learner only on rounds it mispredicted.
class LazyLearner final : public RobustLearner {
 public:
  explicit LazyLearner(std::unique_ptr<RobustLearner> inner) : inner_(std::move(inner)) {}

  Label predict(Instance z) override {
    if (!last_ || last_->first != z) last_ = {z, inner_->predict(z)};
    return last_->second;
  }

  void update(Instance z, Instance x, Label y) override {
    const Label pred = predict(z);
    last_.reset();
    if (pred != y) {
      ++mistakes_;
      inner_->update(z, x, y);
    }
  }

  std::string name() const override { return inner_->name() + "-lazy"; }
  std::size_t mistakes() const noexcept { return mistakes_; }
  RobustLearner& inner() noexcept { return *inner_; }

 private:
  std::unique_ptr<RobustLearner> inner_;
  std::optional<std::pair<Instance, Label>> last_;
  std::size_t mistakes_ = 0;
};

class ConstantLearner final : public RobustLearner {
 public:
  explicit ConstantLearner(Label y) : y_(y) {}
  Label predict(Instance) override { return y_; }
  void update(Instance, Instance, Label) override {}
  std::string name() const override { return "const" + std::to_string(y_); }

 private:
  Label y_;
};

class RandomLearner final : public RobustLearner {
 public:
  RandomLearner(std::size_t label_count, std::uint64_t seed) : labels_(label_count), rng_(seed) {}
  Label predict(Instance) override { return static_cast<Label>(rng_.below(labels_)); }
  void update(Instance, Instance, Label) override {}
  std::string name() const override { return "random"; }

 private:
  std::size_t labels_;
  Rng rng_;
};

/// Plurality of h(z) over the version space (ties to the smallest label); predicts 1 once empty.
class MajorityVoteLearner final : public RobustLearner {
 public:
  explicit MajorityVoteLearner(const Setting& s) : s_(&s), v_(s.full()) {}
  Label predict(Instance z) override {
    if (v_.empty()) return 1;
    std::vector<int> votes(s_->label_count(), 0);
    for_each_bit(v_.bits(), [&](std::size_t h) { ++votes[s_->hypotheses()(h, z)]; });
    return static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  void update(Instance, Instance x, Label y) override { v_ = s_->restrict(v_, x, y); }
  std::string name() const override { return "majority"; }

 private:
  const Setting* s_;
  VersionSpace v_;
};

// ---------------------------------------------------------------------------
// registry

inline const std::vector<std::string>& robust_learner_names() {
  static const std::vector<std::string> names{"soa", "soa-lazy", "const0", "const1", "random", "majority"};
  return names;
}

inline const std::vector<std::string>& orientation_learner_names() {
  static const std::vector<std::string> names{"soa", "const0", "const1", "random"};
  return names;
}

struct LearnerOptions {
  TieBreak tie = TieBreak::kLowLabel;
  std::uint64_t seed = 0;
  bool strict = true;
  Label empty_prediction = 1;
};

/// Orientation-reduction learner over SOA_OG; multiclass rule when the solver is multiclass.
inline std::unique_ptr<OrientationReductionLearner> make_reduction_learner(
    const std::shared_ptr<DimensionSolver>& solver, const LearnerOptions& opt = {}) {
  ReductionOptions ro;
  ro.multiclass = solver->mode() == LabelMode::kMulticlass;
  ro.strict = opt.strict;
  ro.empty_prediction = opt.empty_prediction;
  return std::make_unique<OrientationReductionLearner>(
      solver->setting(), std::make_unique<SoaOrientationLearner>(solver, opt.tie), ro);
}

inline std::unique_ptr<RobustLearner> make_robust_learner(std::string_view name,
                                                          const std::shared_ptr<DimensionSolver>& solver,
                                                          const LearnerOptions& opt = {}) {
  const Setting& s = solver->setting();
  if (name == "soa") return make_reduction_learner(solver, opt);
  if (name == "soa-lazy") return std::make_unique<LazyLearner>(make_reduction_learner(solver, opt));
  if (name == "const0") return std::make_unique<ConstantLearner>(0);
  if (name == "const1") return std::make_unique<ConstantLearner>(1);
  if (name == "random") return std::make_unique<RandomLearner>(s.label_count(), opt.seed);
  if (name == "majority") return std::make_unique<MajorityVoteLearner>(s);
  throw DomainError("unknown learner '" + std::string(name) + "'");
}

inline std::unique_ptr<OrientationLearner> make_orientation_learner(std::string_view name,
                                                                    const std::shared_ptr<DimensionSolver>& solver,
                                                                    const LearnerOptions& opt = {}) {
  if (name == "soa") return std::make_unique<SoaOrientationLearner>(solver, opt.tie);
  if (name == "const0") return std::make_unique<FixedOrientationLearner>(0);
  if (name == "const1") return std::make_unique<FixedOrientationLearner>(1);
  if (name == "random") return std::make_unique<FixedOrientationLearner>(-1, opt.seed);
  throw DomainError("unknown orientation learner '" + std::string(name) + "'");
}

}  // namespace rol
