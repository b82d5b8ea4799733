// Adversaries: shattered-tree players for both games, a randomised
// realizability-preserving adversary, a fixed-sequence replayer, and chaining.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/game.hpp"
#include "rol/random.hpp"

namespace rol {

/// Walks a shattered tree, always revealing the side the learner did not pick.
/// A prediction equal to neither node label reveals side 0.
class TreeCursor {
 public:
  explicit TreeCursor(AdversarialTree tree) : tree_(std::move(tree)) {}

  bool exhausted() const noexcept { return steps_ >= tree_.depth; }
  const TreeNode& node() const { return tree_.nodes.at(index_); }
  std::size_t steps() const noexcept { return steps_; }
  const AdversarialTree& tree() const noexcept { return tree_; }
  const std::vector<int>& path() const noexcept { return path_; }

  static int forced_side(const TreeNode& n, Label prediction) { return prediction == n.y0 ? 1 : 0; }

  void descend(int side) {
    if (exhausted()) throw ProtocolViolation("tree adversary stepped past its depth");
    path_.push_back(side);
    index_ = AdversarialTree::child(index_, side);
    ++steps_;
  }

 private:
  AdversarialTree tree_;
  std::size_t index_ = 0;
  std::size_t steps_ = 0;
  std::vector<int> path_;
};

class TreeOrientationAdversary final : public OrientationAdversary {
 public:
  explicit TreeOrientationAdversary(AdversarialTree tree) : cursor_(std::move(tree)) {}

  std::optional<OrientationQuery> present() override {
    if (cursor_.exhausted()) return std::nullopt;
    return cursor_.node();
  }
  int respond(Label prediction) override {
    const int side = TreeCursor::forced_side(cursor_.node(), prediction);
    cursor_.descend(side);
    return side;
  }
  const TreeCursor& cursor() const noexcept { return cursor_; }

 private:
  TreeCursor cursor_;
};

class TreeRobustAdversary final : public RobustAdversary {
 public:
  TreeRobustAdversary(const Setting& s, AdversarialTree tree) : s_(&s), cursor_(std::move(tree)) {}

  /// Smallest common perturbation of the current node's pair.
  std::optional<Instance> emit() override {
    if (cursor_.exhausted()) return std::nullopt;
    const TreeNode& n = cursor_.node();
    const Mask common = s_->perturbations().forward(n.x0) & s_->perturbations().forward(n.x1);
    if (common == 0) throw StructuralError("tree node pair has no common perturbation");
    return static_cast<Instance>(std::countr_zero(common));
  }
  Example respond(Label prediction) override {
    const TreeNode n = cursor_.node();
    const int side = TreeCursor::forced_side(n, prediction);
    cursor_.descend(side);
    return {n.instance(side), n.label(side)};
  }
  const TreeCursor& cursor() const noexcept { return cursor_; }

 private:
  const Setting* s_;
  TreeCursor cursor_;
};

/// Random choices that keep the revealed sequence realizable. With
/// probability `adaptive` a label different from the prediction is revealed
/// whenever one is available.
class RealizableChooser {
 public:
  RealizableChooser(const Setting& s, std::uint64_t seed, double adaptive)
      : s_(&s), rng_(seed), adaptive_(adaptive), w_(s.full()) {}

  const Setting& setting() const noexcept { return *s_; }
  Rng& rng() noexcept { return rng_; }
  VersionSpace consistent() const noexcept { return w_; }
  bool viable(Instance x, Label y) const { return !s_->restrict(w_, x, y).empty(); }
  void observe(const Example& e) { w_ = s_->restrict(w_, e.x, e.y); }

  template <typename T, typename LabelOf>
  T choose(const std::vector<T>& opts, Label prediction, LabelOf label_of) {
    if (opts.empty()) throw InvariantViolation("random adversary has no realizable option");
    if (rng_.bernoulli(adaptive_)) {
      std::vector<T> wrong;
      for (const auto& o : opts)
        if (label_of(o) != prediction) wrong.push_back(o);
      if (!wrong.empty()) return wrong[rng_.below(wrong.size())];
    }
    return opts[rng_.below(opts.size())];
  }

 private:
  const Setting* s_;
  Rng rng_;
  double adaptive_;
  VersionSpace w_;
};

/// Robust-game adversary drawing Z_t uniformly among inputs that still admit
/// a realizable reveal.
class RandomRobustAdversary final : public RobustAdversary {
 public:
  RandomRobustAdversary(const Setting& s, std::uint64_t seed, double adaptive = 0.5)
      : c_(s, seed, adaptive) {}

  std::optional<Instance> emit() override {
    Mask zs = 0;
    for (Instance z = 0; z < c_.setting().instance_count(); ++z)
      if (!options_for(z).empty()) zs |= bit(z);
    if (zs == 0) return std::nullopt;
    z_ = static_cast<Instance>(c_.rng().pick(zs));
    return z_;
  }

  Example respond(Label prediction) override {
    const Example e = c_.choose(options_for(z_), prediction, [](const Example& o) { return o.y; });
    c_.observe(e);
    return e;
  }

  void observe(const Example& e) override { c_.observe(e); }
  VersionSpace consistent() const noexcept { return c_.consistent(); }

 private:
  std::vector<Example> options_for(Instance z) const {
    std::vector<Example> out;
    const Setting& s = c_.setting();
    for_each_bit(s.candidates(z), [&](std::size_t x) {
      for (Label y = 0; y < s.label_count(); ++y)
        if (c_.viable(static_cast<Instance>(x), y)) out.push_back({static_cast<Instance>(x), y});
    });
    return out;
  }

  RealizableChooser c_;
  Instance z_ = 0;
};

/// Orientation-game adversary presenting a uniformly random query with at
/// least one realizable side. Binary classes only use labels (0, 1).
class RandomOrientationAdversary final : public OrientationAdversary {
 public:
  RandomOrientationAdversary(const Setting& s, std::uint64_t seed, double adaptive = 0.5)
      : c_(s, seed, adaptive) {}

  std::optional<OrientationQuery> present() override {
    const Setting& s = c_.setting();
    const std::size_t ny = s.label_count();
    std::vector<OrientationQuery> viable;
    for (const auto& [a, b] : s.compatible_pairs())
      for (Label y0 = 0; y0 < ny; ++y0)
        for (Label y1 = 0; y1 < ny; ++y1) {
          if (y0 == y1 || (ny == 2 && y0 != 0)) continue;
          if (c_.viable(a, y0) || c_.viable(b, y1)) viable.push_back({a, b, y0, y1});
        }
    if (viable.empty()) return std::nullopt;
    q_ = viable[c_.rng().below(viable.size())];
    return q_;
  }

  int respond(Label prediction) override {
    std::vector<int> sides;
    for (int b = 0; b < 2; ++b)
      if (c_.viable(q_.instance(b), q_.label(b))) sides.push_back(b);
    const int side = c_.choose(sides, prediction, [&](int b) { return q_.label(b); });
    c_.observe({q_.instance(side), q_.label(side)});
    return side;
  }

  void observe(const Example& e) override { c_.observe(e); }

 private:
  RealizableChooser c_;
  OrientationQuery q_{};
};

/// Replays a fixed robust sequence regardless of predictions.
class SequenceAdversary final : public RobustAdversary {
 public:
  explicit SequenceAdversary(std::vector<RobustStep> steps) : steps_(std::move(steps)) {}
  std::optional<Instance> emit() override {
    if (next_ >= steps_.size()) return std::nullopt;
    return steps_[next_].z;
  }
  Example respond(Label) override { return steps_[next_++].example(); }

 private:
  std::vector<RobustStep> steps_;
  std::size_t next_ = 0;
};

/// Plays `first` until it stops, then `rest`; reveals of `first` are forwarded to `rest`.
template <typename Base>
class ChainedAdversary;

template <>
class ChainedAdversary<RobustAdversary> final : public RobustAdversary {
 public:
  ChainedAdversary(std::unique_ptr<RobustAdversary> first, std::unique_ptr<RobustAdversary> rest)
      : first_(std::move(first)), rest_(std::move(rest)) {}
  std::optional<Instance> emit() override {
    if (!done_) {
      if (auto z = first_->emit()) return z;
      done_ = true;
    }
    return rest_->emit();
  }
  Example respond(Label p) override {
    if (done_) return rest_->respond(p);
    Example e = first_->respond(p);
    rest_->observe(e);
    return e;
  }

 private:
  std::unique_ptr<RobustAdversary> first_, rest_;
  bool done_ = false;
};

template <>
class ChainedAdversary<OrientationAdversary> final : public OrientationAdversary {
 public:
  ChainedAdversary(std::unique_ptr<OrientationAdversary> first, std::unique_ptr<OrientationAdversary> rest)
      : first_(std::move(first)), rest_(std::move(rest)) {}
  std::optional<OrientationQuery> present() override {
    if (!done_) {
      if (auto q = first_->present()) {
        q_ = *q;
        return q;
      }
      done_ = true;
    }
    return rest_->present();
  }
  int respond(Label p) override {
    if (done_) return rest_->respond(p);
    int side = first_->respond(p);
    rest_->observe({q_.instance(side), q_.label(side)});
    return side;
  }

 private:
  std::unique_ptr<OrientationAdversary> first_, rest_;
  OrientationQuery q_{};
  bool done_ = false;
};

}  // namespace rol
