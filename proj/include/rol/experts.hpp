// Exponentially weighted average forecaster with randomised rounding.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rol/core.hpp"
#include "rol/random.hpp"

namespace rol {

class ExponentialWeights {
 public:
  ExponentialWeights(std::size_t experts, double eta) : log_w_(experts, 0.0), eta_(eta) {
    if (experts == 0) throw DomainError("forecaster needs at least one expert");
    if (!(eta >= 0.0)) throw DomainError("learning rate must be non-negative");
  }

  /// sqrt(8 ln N / T): the rate for a known horizon T.
  static double horizon_rate(std::size_t experts, std::size_t horizon) {
    if (experts <= 1 || horizon == 0) return 0.0;
    return std::sqrt(8.0 * std::log(static_cast<double>(experts)) / static_cast<double>(horizon));
  }

  /// ln(1 + sqrt(2 ln N / L*)): the rate for a known bound L* on the best expert's loss.
  /// For L* = 0 the rate is kEliminationRate, which effectively drops any expert that errs.
  static double loss_bound_rate(std::size_t experts, double loss_bound) {
    if (experts <= 1) return 0.0;
    if (loss_bound <= 0) return kEliminationRate;
    return std::log1p(std::sqrt(2.0 * std::log(static_cast<double>(experts)) / loss_bound));
  }

  static constexpr double kEliminationRate = 20.0;

  std::size_t size() const noexcept { return log_w_.size(); }
  double eta() const noexcept { return eta_; }

  std::vector<double> weights() const {
    const double top = *std::max_element(log_w_.begin(), log_w_.end());
    std::vector<double> w(log_w_.size());
    double sum = 0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += (w[i] = std::exp(log_w_[i] - top));
    for (double& x : w) x /= sum;
    return w;
  }

  /// Weighted mean of per-expert losses in [0, 1].
  double mix(std::span<const double> values) const {
    if (values.size() != size()) throw DomainError("one value per expert expected");
    const auto w = weights();
    double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
    return acc;
  }

  /// Probability of predicting 1 given binary expert advice.
  double probability_of_one(std::span<const Label> predictions) const {
    if (predictions.size() != size()) throw DomainError("one prediction per expert expected");
    const auto w = weights();
    double p = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (predictions[i] == 1) p += w[i];
    return std::clamp(p, 0.0, 1.0);
  }

  /// w_i <- w_i * exp(-eta * loss_i), kept in log space and shifted so the
  /// largest log-weight is 0.
  void update(std::span<const double> losses) {
    if (losses.size() != size()) throw DomainError("one loss per expert expected");
    for (std::size_t i = 0; i < size(); ++i) log_w_[i] -= eta_ * losses[i];
    const double top = *std::max_element(log_w_.begin(), log_w_.end());
    for (double& x : log_w_) x -= top;
  }

  /// Multiplies every weight by c > 0.
  void scale(double c) {
    if (!(c > 0)) throw DomainError("scale must be positive");
    for (double& x : log_w_) x += std::log(c);
  }

  std::span<const double> log_weights() const noexcept { return log_w_; }

 private:
  std::vector<double> log_w_;
  double eta_;
};

/// Distribution over labels for binary advice: {P(0), P(1)}.
inline std::pair<double, double> ewa_predict(const ExponentialWeights& pool, std::span<const Label> advice) {
  const double p = pool.probability_of_one(advice);
  return {1.0 - p, p};
}

inline void ewa_update(ExponentialWeights& pool, std::span<const double> losses) { pool.update(losses); }

/// Result of running the forecaster on a loss matrix.
struct ForecastOutcome {
  double realized_loss = 0;   // sampled
  double expected_loss = 0;   // sum of mixture losses
  double best_expert_loss = 0;
  std::size_t best_expert = 0;
};

/// Plays the forecaster against an adaptive loss generator. `losses_for(t, weights)`
/// returns the round's per-expert losses in [0, 1]; it may look at the current weights.
template <typename LossFn>
ForecastOutcome forecast(std::size_t experts, std::size_t horizon, double eta, Rng& rng, LossFn&& losses_for) {
  ExponentialWeights pool(experts, eta);
  std::vector<double> cumulative(experts, 0.0);
  ForecastOutcome out;
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto w = pool.weights();
    std::vector<double> losses = losses_for(t, std::span<const double>(w));
    // Sample an expert from w and pay its loss.
    double u = rng.uniform(), acc = 0;
    std::size_t pick = experts - 1;
    for (std::size_t i = 0; i < experts; ++i) {
      acc += w[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    out.realized_loss += losses[pick];
    out.expected_loss += pool.mix(losses);
    for (std::size_t i = 0; i < experts; ++i) cumulative[i] += losses[i];
    pool.update(losses);
  }
  auto it = std::min_element(cumulative.begin(), cumulative.end());
  out.best_expert_loss = *it;
  out.best_expert = static_cast<std::size_t>(it - cumulative.begin());
  return out;
}

}  // namespace rol
