// Exact value of the realizable robust game and orientation game by
// game-tree search: the adversary maximises mistakes subject to keeping the
// revealed sequence realizable, the learner minimises. Independent of the
// dimension code; it only uses the per-(x, y) consistency masks.
#pragma once

#include <optional>
#include <string>
#include <unordered_map>

#include "rol/core.hpp"

namespace rol {

enum class GameKind { kRobust, kOrientation };

struct OracleLimits {
  std::size_t max_instances = 5;
  std::size_t max_hypotheses = 16;
};

class MinimaxOracle {
 public:
  MinimaxOracle(const Setting& s, GameKind kind, OracleLimits limits = {}) : s_(&s), kind_(kind) {
    if (s.instance_count() > limits.max_instances || s.hypotheses().size() > limits.max_hypotheses)
      throw LimitExceeded("minimax oracle limited to |X| <= " + std::to_string(limits.max_instances) +
                          " and |H| <= " + std::to_string(limits.max_hypotheses) + " (got |X| = " +
                          std::to_string(s.instance_count()) + ", |H| = " +
                          std::to_string(s.hypotheses().size()) + ")");
  }

  /// Game value with `horizon` rounds left, |H| by default. That is enough for
  /// the unbounded value: at most |H| - 1 rounds can shrink the consistent set,
  /// and in a round where some reveal keeps it whole, every realizable reveal
  /// carries the label all consistent hypotheses give z, so predicting it is free.
  int value(std::optional<std::size_t> horizon = std::nullopt) {
    return solve(s_->full(), static_cast<int>(horizon.value_or(s_->hypotheses().size())));
  }

  std::size_t states() const noexcept { return memo_.size(); }

 private:
  int solve(VersionSpace v, int left) {
    if (left == 0 || v.empty()) return 0;
    const Mask key = v.bits() | (static_cast<Mask>(left) << 32);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int best = kind_ == GameKind::kRobust ? robust_move(v, left) : orientation_move(v, left);
    memo_.emplace(key, best);
    return best;
  }

  // Adversary picks z; learner picks a label; adversary picks a realizable (x, y) with z in U(x).
  int robust_move(VersionSpace v, int left) {
    const std::size_t ny = s_->label_count();
    int best = 0;
    for (Instance z = 0; z < s_->instance_count(); ++z) {
      std::vector<std::pair<Label, VersionSpace>> options;
      for_each_bit(s_->perturbations().preimage(z), [&](std::size_t x) {
        for (Label y = 0; y < ny; ++y) {
          VersionSpace w = s_->restrict(v, static_cast<Instance>(x), y);
          if (!w.empty()) options.emplace_back(y, w);
        }
      });
      if (options.empty()) continue;
      int learner_best = -1;
      for (Label guess = 0; guess < ny; ++guess) {
        int worst = 0;
        for (const auto& [y, w] : options)
          worst = std::max(worst, (guess != y ? 1 : 0) + solve(w, left - 1));
        if (learner_best < 0 || worst < learner_best) learner_best = worst;
      }
      best = std::max(best, learner_best);
    }
    return best;
  }

  // Adversary picks a pair in X^2_U and distinct labels; learner picks a label;
  // adversary reveals a realizable side.
  int orientation_move(VersionSpace v, int left) {
    const std::size_t ny = s_->label_count();
    const auto& u = s_->perturbations();
    int best = 0;
    for (Instance a = 0; a < s_->instance_count(); ++a)
      for (Instance b = 0; b < s_->instance_count(); ++b) {
        if (!u.overlaps(a, b)) continue;
        for (Label y0 = 0; y0 < ny; ++y0)
          for (Label y1 = 0; y1 < ny; ++y1) {
            if (y0 == y1) continue;
            const VersionSpace w0 = s_->restrict(v, a, y0);
            const VersionSpace w1 = s_->restrict(v, b, y1);
            if (w0.empty() && w1.empty()) continue;
            int learner_best = -1;
            for (Label guess = 0; guess < ny; ++guess) {
              int worst = 0;
              if (!w0.empty()) worst = std::max(worst, (guess != y0 ? 1 : 0) + solve(w0, left - 1));
              if (!w1.empty()) worst = std::max(worst, (guess != y1 ? 1 : 0) + solve(w1, left - 1));
              if (learner_best < 0 || worst < learner_best) learner_best = worst;
            }
            best = std::max(best, learner_best);
          }
      }
    return best;
  }

  const Setting* s_;
  GameKind kind_;
  std::unordered_map<Mask, int> memo_;
};

inline int minimax_optimal_mistakes(const Setting& s, GameKind kind,
                                    std::optional<std::size_t> horizon = std::nullopt,
                                    OracleLimits limits = {}) {
  MinimaxOracle oracle(s, kind, limits);
  return oracle.value(horizon);
}

}  // namespace rol
