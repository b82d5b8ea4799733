// The acceptance suite: twelve criteria, each reduced to one status line.
// Output is a pure function of the seed; timings never enter it.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rol/adversaries.hpp"
#include "rol/agnostic.hpp"
#include "rol/corpus.hpp"
#include "rol/dimension.hpp"
#include "rol/experts.hpp"
#include "rol/game.hpp"
#include "rol/harness.hpp"
#include "rol/learners.hpp"
#include "rol/oracle.hpp"
#include "rol/stats.hpp"
#include "rol/uncertain.hpp"

namespace rol {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;

  std::string line() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", id);
    return std::string(passed ? "PASS" : "FAIL") + " " + buf + " " + name + ": " + detail;
  }
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  /// Criterion 12 reruns 1-11; turning it off halves the runtime.
  bool reproducibility = true;
};

namespace acceptance {

inline std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Pinned sizes; the criteria's minimums are noted alongside.
struct Sizes {
  std::size_t binary_corpus = 200;         // >= 200
  std::size_t identity_corpus = 100;       // >= 100
  std::size_t multiclass_corpus = 40;
  std::size_t upper_bound_scenarios = 200;  // binary; each gets the sequences below
  std::size_t sequences_per_scenario = 1000;  // >= 1000
  std::size_t decomposition_suite = 50;    // 50
  std::size_t ewa_seeds = 100;             // >= 100
  std::size_t agnostic_scenarios = 16;
  std::size_t agnostic_horizon = 12;       // <= 12
  std::size_t agnostic_seeds = 200;        // >= 200
  std::size_t family_per_size = 60;        // 3 sizes -> 180 >= 100
  std::size_t halving_runs = 10;
  std::size_t family_horizon = 40;
  std::size_t uncertain_scenarios = 36;
  std::size_t uncertain_seeds = 100;       // >= 100
  std::size_t coin_scenarios = 4;
  std::size_t coin_seeds = 500;           // >= 500
};

struct Corpora {
  std::vector<CorpusEntry> binary;
  std::vector<CorpusEntry> identity;
  std::vector<CorpusEntry> multiclass;
  std::vector<Scenario> families;

  Corpora(std::uint64_t seed, const Sizes& z) {
    CorpusParams bp;
    binary = generate_corpus(bp, z.binary_corpus, derive_seed(seed, 101));
    CorpusParams ip;
    ip.proportions = {1, 0, 0, 0};
    identity = generate_corpus(ip, z.identity_corpus, derive_seed(seed, 102));
    CorpusParams mp;
    mp.labels = 3;
    mp.max_hypotheses = 12;
    mp.protocol = Protocol::kMulticlassRobust;
    multiclass = generate_corpus(mp, z.multiclass_corpus, derive_seed(seed, 103));
    for (std::size_t g : {2, 4, 8}) {
      auto f = generate_family_corpus(bp, z.family_per_size, g, derive_seed(seed, 104));
      families.insert(families.end(), f.begin(), f.end());
    }
  }
};

// 1 -------------------------------------------------------------------------
inline CriterionResult dimension_minimax(const Corpora& c) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t agree = 0, total = 0, positive = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < c.binary.size(); ++i) {
    const Scenario& sc = c.binary[i].scenario;
    const Setting s(sc.hypotheses, sc.perturbation());
    const int l = std::max(0, ldim_u(s, LabelMode::kBinary).value);
    const int r = minimax_optimal_mistakes(s, GameKind::kRobust);
    const int o = minimax_optimal_mistakes(s, GameKind::kOrientation);
    ++total;
    positive += l > 0 ? 1 : 0;
    if (l == r && r == o) ++agree;
    else if (first_bad.empty())
      first_bad = "; first mismatch #" + std::to_string(i) + " ldim=" + std::to_string(l) + " robust=" +
                  std::to_string(r) + " orientation=" + std::to_string(o);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= 600;
  return {1, "dimension-minimax", agree == total && total >= 200 && in_time,
          std::to_string(agree) + "/" + std::to_string(total) + " scenarios with robust = orientation = ldim (" +
              std::to_string(positive) + " with ldim > 0)" + (in_time ? "" : "; over the 10 minute budget") +
              first_bad};
}

// 2 -------------------------------------------------------------------------
inline CriterionResult classic_specialization(const Corpora& c) {
  std::size_t agree = 0, total = 0;
  auto check = [&](const Scenario& sc) {
    const Setting s(sc.hypotheses, sc.perturbation());
    ++total;
    if (std::max(0, ldim_u(s, LabelMode::kBinary).value) == classic_ldim(sc.hypotheses)) ++agree;
  };
  for (const auto& e : c.identity) check(e.scenario);
  for (const auto& e : c.binary)
    if (e.stratum == Stratum::kIdentity) check(e.scenario);
  return {2, "classic-specialization", agree == total && total >= 100,
          std::to_string(agree) + "/" + std::to_string(total) + " identity-map scenarios with ldim_u = classic ldim"};
}

// 3 and 5 -------------------------------------------------------------------
struct UpperBoundTally {
  std::size_t scenarios = 0, sequences = 0, violations = 0;
  std::size_t soa_mistakes = 0, monotone_checked = 0, monotone_violations = 0;
};

/// SOA_OG in the orientation game; each mistake is checked to lower ldim of V.
inline void orientation_runs(const Scenario& sc, LabelMode mode, Protocol tag, std::size_t runs, std::uint64_t seed,
                             UpperBoundTally& t) {
  auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
  auto solver = std::make_shared<DimensionSolver>(*setting, mode);
  const int l = std::max(0, solver->ldim());
  const GameOptions game{sc.game.horizon, true};
  for (std::size_t r = 0; r < runs; ++r) {
    SoaOrientationLearner learner(solver);
    RandomOrientationAdversary adv(*setting, derive_seed(seed, r));
    const Transcript tr = play_orientation(*setting, learner, adv, game, tag);
    ++t.sequences;
    if (tr.mistakes() > static_cast<std::size_t>(l)) ++t.violations;
    VersionSpace v = setting->full();
    for (const auto& round : tr.rounds) {
      const VersionSpace next = setting->restrict(v, round.x, round.y);
      if (round.loss) {
        ++t.monotone_checked;
        if (!(solver->ldim(next) < solver->ldim(v))) ++t.monotone_violations;
      }
      v = next;
    }
  }
}

/// The orientation-reduction learner in the robust game.
inline void robust_runs(const Scenario& sc, LabelMode mode, Protocol tag, std::size_t runs, std::uint64_t seed,
                        UpperBoundTally& t) {
  auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
  auto solver = std::make_shared<DimensionSolver>(*setting, mode);
  const int l = std::max(0, solver->ldim());
  const GameOptions game{sc.game.horizon, true};
  for (std::size_t r = 0; r < runs; ++r) {
    auto learner = make_reduction_learner(solver);
    RandomRobustAdversary adv(*setting, derive_seed(seed, r));
    const Transcript tr = play_robust(*setting, *learner, adv, game, tag);
    ++t.sequences;
    if (tr.mistakes() > static_cast<std::size_t>(l)) ++t.violations;
  }
}

struct UpperBoundOutcome {
  CriterionResult bounds;
  CriterionResult monotone;
};

inline UpperBoundOutcome upper_bounds(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  UpperBoundTally soa, alg2, multi;
  const std::size_t nb = std::min(z.upper_bound_scenarios, c.binary.size());
  for (std::size_t i = 0; i < nb; ++i) {
    const Scenario& sc = c.binary[i].scenario;
    orientation_runs(sc, LabelMode::kBinary, Protocol::kOrientation, z.sequences_per_scenario,
                     derive_seed(seed, 3000 + i), soa);
    robust_runs(sc, LabelMode::kBinary, Protocol::kRobust, z.sequences_per_scenario, derive_seed(seed, 4000 + i),
                alg2);
    ++soa.scenarios;
    ++alg2.scenarios;
  }
  for (std::size_t i = 0; i < c.multiclass.size(); ++i) {
    const Scenario& sc = c.multiclass[i].scenario;
    robust_runs(sc, LabelMode::kMulticlass, Protocol::kMulticlassRobust, z.sequences_per_scenario,
                derive_seed(seed, 5000 + i), multi);
    orientation_runs(sc, LabelMode::kMulticlass, Protocol::kMulticlassOrientation, z.sequences_per_scenario,
                     derive_seed(seed, 6000 + i), multi);
    ++multi.scenarios;
  }
  const std::size_t bad = soa.violations + alg2.violations + multi.violations;
  auto part = [](const char* name, const UpperBoundTally& t) {
    return std::string(name) + " " + std::to_string(t.violations) + "/" + std::to_string(t.sequences);
  };
  UpperBoundOutcome out;
  out.bounds = {3, "upper-bounds", bad == 0,
                "violations: " + part("soa-og", soa) + ", " + part("orientation-reduction", alg2) + ", " +
                    part("multiclass", multi) + " over " + std::to_string(nb) + " binary and " +
                    std::to_string(c.multiclass.size()) + " multiclass scenarios"};
  const std::size_t checked = soa.monotone_checked + multi.monotone_checked;
  const std::size_t mbad = soa.monotone_violations + multi.monotone_violations;
  out.monotone = {5, "mistake-monotone", mbad == 0 && checked > 0,
                  std::to_string(checked - mbad) + "/" + std::to_string(checked) +
                      " soa-og mistake rounds lowered ldim of the version space"};
  return out;
}

// 4 -------------------------------------------------------------------------
inline CriterionResult tightness(const Corpora& c, std::uint64_t seed) {
  std::size_t runs = 0, bad = 0, exact_runs = 0;
  std::string first_bad;
  auto record = [&](bool ok, const std::string& what) {
    ++runs;
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = "; first failure " + what;
    }
  };
  auto one = [&](const Scenario& sc, std::size_t idx, bool multiclass) {
    const LabelMode mode = multiclass ? LabelMode::kMulticlass : LabelMode::kBinary;
    auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
    auto solver = std::make_shared<DimensionSolver>(*setting, mode);
    const int l = std::max(0, solver->ldim());
    const AdversarialTree tree = solver->witness(setting->full(), static_cast<std::size_t>(l));
    const std::size_t horizon = static_cast<std::size_t>(l) + sc.game.horizon;
    const GameOptions game{horizon, true};
    LearnerOptions lo;
    lo.seed = derive_seed(seed, idx);
    for (const auto& name : robust_learner_names()) {
      auto learner = make_robust_learner(name, solver, lo);
      ChainedAdversary<RobustAdversary> adv(std::make_unique<TreeRobustAdversary>(*setting, tree),
                                            std::make_unique<RandomRobustAdversary>(*setting, derive_seed(seed, idx)));
      const auto m = play_robust(*setting, *learner, adv, game).mistakes();
      const bool optimal = name == "soa" || name == "soa-lazy";
      exact_runs += optimal ? 1 : 0;
      record(optimal ? m == static_cast<std::size_t>(l) : m >= static_cast<std::size_t>(l),
             "#" + std::to_string(idx) + " robust/" + name + " mistakes=" + std::to_string(m) +
                 " ldim=" + std::to_string(l));
    }
    for (const auto& name : orientation_learner_names()) {
      auto learner = make_orientation_learner(name, solver, lo);
      ChainedAdversary<OrientationAdversary> adv(
          std::make_unique<TreeOrientationAdversary>(tree),
          std::make_unique<RandomOrientationAdversary>(*setting, derive_seed(seed, idx)));
      const auto m = play_orientation(*setting, *learner, adv, game).mistakes();
      const bool optimal = name == "soa";
      exact_runs += optimal ? 1 : 0;
      record(optimal ? m == static_cast<std::size_t>(l) : m >= static_cast<std::size_t>(l),
             "#" + std::to_string(idx) + " orientation/" + name + " mistakes=" + std::to_string(m) +
                 " ldim=" + std::to_string(l));
    }
  };
  for (std::size_t i = 0; i < c.binary.size(); ++i) one(c.binary[i].scenario, i, false);
  for (std::size_t i = 0; i < c.multiclass.size(); ++i) one(c.multiclass[i].scenario, 10000 + i, true);
  return {4, "tree-tightness", bad == 0,
          std::to_string(runs - bad) + "/" + std::to_string(runs) + " tree-adversary runs as required (" +
              std::to_string(exact_runs) + " exact for soa learners)" + first_bad};
}

// 6 -------------------------------------------------------------------------
inline CriterionResult decomposition(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  std::size_t scenarios = 0, sequences = 0, bad = 0;
  for (std::size_t i = 0; i < c.binary.size() && scenarios < z.decomposition_suite; ++i) {
    const Scenario& sc = c.binary[i].scenario;
    auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
    if (!can_sample_sequences(*setting)) continue;
    auto solver = std::make_shared<DimensionSolver>(*setting, LabelMode::kBinary);
    ++scenarios;
    for (std::size_t k = 0; k <= 3; ++k)
      for (std::size_t r = 0; r < 5; ++r) {
        Rng rng(derive_seed(seed, i), k * 16 + r);
        const auto seq = sample_corrupted_sequence(*setting, 12, k, rng);
        const Decomposition d = decompose(solver, seq);
        ++sequences;
        if (!d.holds() || d.comparator_loss > static_cast<int>(k)) ++bad;
      }
  }
  return {6, "agnostic-decomposition", bad == 0 && scenarios == z.decomposition_suite,
          std::to_string(sequences - bad) + "/" + std::to_string(sequences) +
              " corrupted sequences with A_J mistakes <= ldim + comparator loss over " + std::to_string(scenarios) +
              " scenarios"};
}

// 7 -------------------------------------------------------------------------
/// Losses: the designated expert errs with probability 0.35, the others with
/// probability 0.5, and whichever other expert carries the most weight errs.
inline std::vector<double> ewa_losses(std::size_t n, std::size_t best, std::span<const double> w, Rng& rng) {
  std::vector<double> l(n);
  std::size_t top = best == 0 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != best && w[i] > w[top]) top = i;
  for (std::size_t i = 0; i < n; ++i) l[i] = rng.bernoulli(i == best ? 0.35 : 0.5) ? 1.0 : 0.0;
  l[top] = 1.0;
  return l;
}

inline CriterionResult ewa_regret(const Sizes& z, std::uint64_t seed) {
  bool ok = true;
  double worst = 0;
  std::string detail;
  for (std::size_t n : {4, 8, 16})
    for (std::size_t t : {256, 1024}) {
      std::vector<double> regret;
      for (std::size_t s = 0; s < z.ewa_seeds; ++s) {
        Rng rng(derive_seed(seed, n * 10000 + t), s);
        const std::size_t best = s % n;
        const auto out = forecast(n, t, ExponentialWeights::horizon_rate(n, t), rng,
                                  [&](std::size_t, std::span<const double> w) { return ewa_losses(n, best, w, rng); });
        regret.push_back(out.realized_loss - out.best_expert_loss);
      }
      const auto st = summarize(regret);
      const double bound = std::sqrt(static_cast<double>(t) / 2 * std::log(static_cast<double>(n)));
      ok = ok && st.mean <= bound + 3 * st.sem;
      worst = std::max(worst, st.mean / bound);
      detail += (detail.empty() ? "" : ", ") + std::string("N=") + std::to_string(n) + "/T=" + std::to_string(t) +
                " " + fmt(st.mean, 2) + "<=" + fmt(bound, 2);
    }
  return {7, "ewa-regret", ok, "mean regret vs sqrt(T/2 ln N): " + detail + "; worst ratio " + fmt(worst)};
}

// 8 -------------------------------------------------------------------------
inline CriterionResult agnostic_end_to_end(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  bool ok = true;
  std::size_t used = 0;
  double worst_mean = 0, worst_exact = 0;
  for (std::size_t i = 0; i < c.binary.size() && used < z.agnostic_scenarios; ++i) {
    const Scenario& sc = c.binary[i].scenario;
    auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
    if (!can_sample_sequences(*setting)) continue;
    auto solver = std::make_shared<DimensionSolver>(*setting, LabelMode::kBinary);
    const int l = solver->ldim();
    if (l < 1 || l > 2) continue;
    ++used;
    const std::size_t t = z.agnostic_horizon;
    Rng seq_rng(derive_seed(seed, 8000 + i));
    const auto seq = sample_corrupted_sequence(*setting, t, 2, seq_rng);
    std::vector<double> regret;
    double exact = 0;
    for (std::size_t s = 0; s < z.agnostic_seeds; ++s) {
      const RegretReport r = agnostic_run(solver, seq, derive_seed(seed, 9000 + i * 1000 + s));
      regret.push_back(r.regret);
      exact = r.expected_regret;
    }
    const auto st = summarize(regret);
    const double bound =
        l + std::sqrt(static_cast<double>(t) / 2 * std::log(subset_expert_count(t, static_cast<std::size_t>(l))));
    ok = ok && st.mean <= bound + 3 * st.sem && exact <= bound;
    worst_mean = std::max(worst_mean, st.mean / bound);
    worst_exact = std::max(worst_exact, exact / bound);
  }
  return {8, "agnostic-regret", ok && used == z.agnostic_scenarios,
          std::to_string(used) + " scenarios (ldim 1-2, T=" + std::to_string(z.agnostic_horizon) + ", " +
              std::to_string(z.agnostic_seeds) + " seeds, 2 corruptions); worst mean/bound " + fmt(worst_mean) +
              ", worst expected/bound " + fmt(worst_exact)};
}

// 9 and 10 ------------------------------------------------------------------
inline CriterionResult halving(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  std::size_t runs = 0, total_bad = 0, phase_bad = 0, corrected_bad = 0, reset_bad = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < c.families.size(); ++i) {
    const Scenario& sc = c.families[i];
    const std::size_t g = sc.perturbations.size();
    const Setting truth(sc.hypotheses, sc.perturbation());
    const int l = std::max(0, DimensionSolver(truth, LabelMode::kBinary).ldim());
    const long bound = halving_bound(l, g);
    const long lg = ceil_log2(g);
    const long fl = std::bit_width(g) - 1;
    for (std::size_t r = 0; r < z.halving_runs; ++r) {
      PhasedHalvingLearner learner(sc.hypotheses, sc.perturbations);
      const Transcript tr = family_game(sc, learner, z.family_horizon, derive_seed(seed, i * 100 + r));
      ++runs;
      const long m = static_cast<long>(tr.mistakes());
      bool phase_ok = true;
      for (std::size_t pm : learner.phase_mistakes()) phase_ok = phase_ok && static_cast<long>(pm) <= lg;
      if (m > bound) ++total_bad;
      if (!phase_ok) ++phase_bad;
      if ((m > bound || !phase_ok) && first_bad.empty()) {
        first_bad = "; first #" + std::to_string(i) + " |G|=" + std::to_string(g) + " ldim=" + std::to_string(l) +
                    " mistakes=" + std::to_string(m) + " phases=[";
        for (std::size_t k = 0; k < learner.phase_mistakes().size(); ++k)
          first_bad += (k ? " " : "") + std::to_string(learner.phase_mistakes()[k]);
        first_bad += "]";
      }
      // Completed phases can cost floor(log2 G) + 1 (the emptying mistake), the open one floor(log2 G).
      if (m > l * (fl + 1) + fl) ++corrected_bad;
      const auto rm = static_cast<long>(halving_run(sc.hypotheses, sc.perturbations, steps_of(tr), true).mistakes);
      if (rm > bound) ++reset_bad;
    }
  }
  return {9, "halving-bound", total_bad == 0 && phase_bad == 0 && c.families.size() >= 100,
          std::to_string(c.families.size()) + " family scenarios x " + std::to_string(z.halving_runs) +
              " adaptive runs: total > (ldim+1)ceil(log2|G|) in " + std::to_string(total_bad) + "/" +
              std::to_string(runs) + ", a phase > ceil(log2|G|) in " + std::to_string(phase_bad) + "/" +
              std::to_string(runs) + "; ldim(floor(log2|G|)+1)+floor(log2|G|) exceeded in " +
              std::to_string(corrected_bad) + "; reset variant over bound in " + std::to_string(reset_bad) +
              first_bad};
}

inline CriterionResult uncertain_ewa(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  bool ok = true;
  std::size_t used = 0;
  double worst_mean = 0, worst_exact = 0;
  for (std::size_t i = 0; i < c.families.size() && used < z.uncertain_scenarios; i += 5) {
    const Scenario& sc = c.families[i];
    PhasedHalvingLearner driver(sc.hypotheses, sc.perturbations);
    const auto seq = steps_of(family_game(sc, driver, z.family_horizon, derive_seed(seed, 10000 + i)));
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < z.uncertain_seeds; ++s) seeds.push_back(derive_seed(seed, 20000 + i * 1000 + s));
    const auto rep = uncertain_ewa_run(sc.hypotheses, sc.perturbations, seq, seeds);
    ++used;
    const auto st = summarize(rep.mistakes);
    const double exact = rep.expected_mistakes.front();
    const double bound = uncertain_ewa_bound(rep.max_dimension, sc.perturbations.size());
    ok = ok && rep.valid && st.mean <= bound + 3 * st.sem && exact <= bound;
    worst_mean = std::max(worst_mean, st.mean / bound);
    worst_exact = std::max(worst_exact, exact / bound);
  }
  return {10, "uncertain-ewa", ok && worst_exact <= 1,
          std::to_string(used) + " family scenarios x " + std::to_string(z.uncertain_seeds) +
              " seeds, c = sqrt(2): worst mean/bound " + fmt(worst_mean) + ", worst expected/bound " +
              fmt(worst_exact)};
}

// 11 ------------------------------------------------------------------------
inline CriterionResult lower_bound_scaling(const Corpora& c, const Sizes& z, std::uint64_t seed) {
  bool ok = true;
  std::size_t used = 0;
  std::string detail;
  for (std::size_t i = 0; i < c.binary.size() && used < z.coin_scenarios; ++i) {
    const Scenario& sc = c.binary[i].scenario;
    auto setting = std::make_shared<Setting>(sc.hypotheses, sc.perturbation());
    auto solver = std::make_shared<DimensionSolver>(*setting, LabelMode::kBinary);
    if (solver->ldim() < 1) continue;
    ++used;
    std::vector<double> ts, means;
    for (std::size_t t : {64, 256, 1024}) {
      std::vector<double> regret;
      for (std::size_t s = 0; s < z.coin_seeds; ++s)
        regret.push_back(coin_root_demo(solver, t, derive_seed(seed, 11000 + i * 10000 + t * 10 + s)).regret);
      ts.push_back(static_cast<double>(t));
      means.push_back(summarize(regret).mean);
    }
    bool positive = true;
    for (double m : means) positive = positive && m > 0;
    const double slope = positive ? loglog_slope(ts, means) : 0.0;
    ok = ok && positive && slope >= 0.4 && slope <= 0.6;
    detail += (detail.empty() ? "" : "; ") + std::string("#") + std::to_string(i) + " slope " + fmt(slope) +
              " (mean regret " + fmt(means[0], 2) + ", " + fmt(means[1], 2) + ", " + fmt(means[2], 2) + ")";
  }
  return {11, "lower-bound-scaling", ok && used == z.coin_scenarios, "T in {64,256,1024}: " + detail};
}

}  // namespace acceptance

/// Runs the suite, handing each result to `sink` as soon as it is known.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                                   const std::function<void(const CriterionResult&)>& sink = {}) {
  using namespace acceptance;
  const Sizes z;
  auto core = [&](const std::function<void(const CriterionResult&)>& emit) {
    std::vector<CriterionResult> out;
    auto add = [&](CriterionResult r) {
      if (emit) emit(r);
      out.push_back(std::move(r));
    };
    const Corpora c(opt.seed, z);
    add(dimension_minimax(c));
    add(classic_specialization(c));
    auto ub = upper_bounds(c, z, derive_seed(opt.seed, 3));
    add(ub.bounds);
    add(tightness(c, derive_seed(opt.seed, 4)));
    add(ub.monotone);
    add(decomposition(c, z, derive_seed(opt.seed, 6)));
    add(ewa_regret(z, derive_seed(opt.seed, 7)));
    add(agnostic_end_to_end(c, z, derive_seed(opt.seed, 8)));
    add(halving(c, z, derive_seed(opt.seed, 9)));
    add(uncertain_ewa(c, z, derive_seed(opt.seed, 10)));
    add(lower_bound_scaling(c, z, derive_seed(opt.seed, 11)));
    return out;
  };
  auto render = [](const std::vector<CriterionResult>& rs) {
    std::string s;
    for (const auto& r : rs) s += r.line() + "\n";
    return s;
  };
  auto results = core(sink);
  if (opt.reproducibility) {
    const auto again = core({});
    const bool same = render(results) == render(again);
    CriterionResult r{12, "reproducibility", same,
                      same ? "second run with seed " + std::to_string(opt.seed) + " matched byte for byte"
                           : "second run with seed " + std::to_string(opt.seed) + " differed"};
    if (sink) sink(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rol
