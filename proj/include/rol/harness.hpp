// Scenario runs: wiring learners and adversaries to a protocol, transcripts,
// summaries, and replay from a saved transcript.
#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rol/adversaries.hpp"
#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/game.hpp"
#include "rol/learners.hpp"
#include "rol/random.hpp"
#include "rol/scenario.hpp"

namespace rol {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// A Setting and its dimension solver with shared lifetime.
struct Workspace {
  std::shared_ptr<Setting> setting;
  std::shared_ptr<DimensionSolver> solver;

  Workspace(const HypothesisClass& hc, const PerturbationMap& u, LabelMode mode)
      : setting(std::make_shared<Setting>(hc, u)), solver(std::make_shared<DimensionSolver>(*setting, mode)) {}
};

inline LabelMode mode_of(Protocol p) { return is_multiclass(p) ? LabelMode::kMulticlass : LabelMode::kBinary; }

inline const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names{"tree", "tree-only", "random"};
  return names;
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<std::string> learner;
  std::optional<std::string> adversary;
  TieBreak tie = TieBreak::kLowLabel;
  std::optional<int> depth_cap;
};

struct Assertion {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunSummary {
  std::string protocol;
  std::string learner;
  std::string adversary;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::size_t rounds = 0;
  std::size_t mistakes = 0;
  int dimension = 0;
  bool dimension_capped = false;
  std::size_t tree_depth = 0;
  std::vector<Assertion> assertions;
  double wall_ms = 0;

  bool ok() const {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }
};

struct RunResult {
  RunSummary summary;
  Transcript transcript;
};

/// Assertions that follow from the header fields and the mistake count alone,
/// so that replay can recompute them.
inline std::vector<Assertion> run_assertions(const RunSummary& s) {
  std::vector<Assertion> out;
  const bool optimal = s.learner == "soa" || s.learner == "soa-lazy";
  if (optimal && !s.dimension_capped) {
    out.push_back({"mistakes<=ldim", s.mistakes <= static_cast<std::size_t>(std::max(0, s.dimension)),
                   std::to_string(s.mistakes) + " <= " + std::to_string(s.dimension)});
  }
  if ((s.adversary == "tree" || s.adversary == "tree-only") && s.horizon >= s.tree_depth) {
    out.push_back({"tree-forces-depth", s.mistakes >= s.tree_depth,
                   std::to_string(s.mistakes) + " >= " + std::to_string(s.tree_depth)});
  }
  return out;
}

inline RunResult run(const Scenario& sc, const RunOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const Protocol protocol = sc.game.protocol;
  Workspace ws(sc.hypotheses, sc.perturbation(), mode_of(protocol));
  const Setting& s = *ws.setting;

  RunSummary sum;
  sum.protocol = to_string(protocol);
  sum.learner = opt.learner.value_or(sc.game.learner);
  sum.adversary = opt.adversary.value_or(sc.game.adversary);
  sum.seed = opt.seed.value_or(sc.game.seed);
  sum.horizon = opt.horizon.value_or(sc.game.horizon);
  const auto dim = ldim_u(s, mode_of(protocol), opt.depth_cap.value_or(static_cast<int>(sc.hypotheses.size())));
  sum.dimension = dim.value;
  sum.dimension_capped = dim.at_least_cap;

  LearnerOptions lo;
  lo.tie = opt.tie;
  lo.seed = derive_seed(sum.seed, 1);
  const std::uint64_t adv_seed = derive_seed(sum.seed, 2);
  const GameOptions game{sum.horizon, true};

  AdversarialTree tree;
  const bool uses_tree = sum.adversary == "tree" || sum.adversary == "tree-only";
  if (uses_tree) {
    tree = ws.solver->witness(s.full(), static_cast<std::size_t>(std::max(0, dim.value)));
    sum.tree_depth = tree.depth;
  } else if (sum.adversary != "random") {
    throw DomainError("unknown adversary '" + sum.adversary + "'");
  }

  RunResult out;
  if (is_orientation(protocol)) {
    auto learner = make_orientation_learner(sum.learner, ws.solver, lo);
    std::unique_ptr<OrientationAdversary> adv;
    if (sum.adversary == "random") {
      adv = std::make_unique<RandomOrientationAdversary>(s, adv_seed);
    } else {
      adv = std::make_unique<TreeOrientationAdversary>(tree);
      if (sum.adversary == "tree")
        adv = std::make_unique<ChainedAdversary<OrientationAdversary>>(
            std::move(adv), std::make_unique<RandomOrientationAdversary>(s, adv_seed));
    }
    out.transcript = play_orientation(s, *learner, *adv, game, protocol);
  } else {
    auto learner = make_robust_learner(sum.learner, ws.solver, lo);
    std::unique_ptr<RobustAdversary> adv;
    if (sum.adversary == "random") {
      adv = std::make_unique<RandomRobustAdversary>(s, adv_seed);
    } else {
      adv = std::make_unique<TreeRobustAdversary>(s, tree);
      if (sum.adversary == "tree")
        adv = std::make_unique<ChainedAdversary<RobustAdversary>>(std::move(adv),
                                                                   std::make_unique<RandomRobustAdversary>(s, adv_seed));
    }
    out.transcript = play_robust(s, *learner, *adv, game, protocol);
  }
  sum.rounds = out.transcript.rounds.size();
  sum.mistakes = out.transcript.mistakes();
  sum.assertions = run_assertions(sum);
  sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.summary = std::move(sum);
  return out;
}

/// Adaptive realizable play under the true map: its shattered tree first,
/// then random reveals that contradict the learner whenever possible.
inline Transcript family_game(const Scenario& sc, RobustLearner& learner, std::size_t horizon, std::uint64_t seed) {
  const Setting truth(sc.hypotheses, sc.perturbation());
  DimensionSolver solver(truth, LabelMode::kBinary);
  const AdversarialTree tree = solver.witness();
  ChainedAdversary<RobustAdversary> adv(std::make_unique<TreeRobustAdversary>(truth, tree),
                                        std::make_unique<RandomRobustAdversary>(truth, seed, 1.0));
  return play_robust(truth, learner, adv, {horizon, true});
}

inline std::vector<RobustStep> steps_of(const Transcript& tr) {
  std::vector<RobustStep> out;
  for (const auto& r : tr.rounds) out.push_back({*r.z, r.x, r.y});
  return out;
}

// ---------------------------------------------------------------------------
// machine-readable output

/// Wall-clock is left out unless asked for, so that default output is
/// byte-reproducible.
inline Json summary_json(const RunSummary& s, bool include_timing = false) {
  Json j;
  j["version"] = kVersion;
  j["protocol"] = s.protocol;
  j["learner"] = s.learner;
  j["adversary"] = s.adversary;
  j["seed"] = s.seed;
  j["horizon"] = s.horizon;
  j["rounds"] = s.rounds;
  j["mistakes"] = s.mistakes;
  j["dimension"] = s.dimension;
  j["dimension_capped"] = s.dimension_capped;
  j["tree_depth"] = s.tree_depth;
  Json checks = Json::array();
  for (const auto& a : s.assertions) checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  j["assertions"] = checks;
  j["ok"] = s.ok();
  if (include_timing) j["wall_ms"] = s.wall_ms;
  return j;
}

inline Json transcript_json(const RunSummary& s, const Transcript& tr) {
  Json j;
  Json header;
  header["version"] = kVersion;
  header["protocol"] = s.protocol;
  header["learner"] = s.learner;
  header["adversary"] = s.adversary;
  header["seed"] = s.seed;
  header["horizon"] = s.horizon;
  header["dimension"] = s.dimension;
  header["dimension_capped"] = s.dimension_capped;
  header["tree_depth"] = s.tree_depth;
  j["header"] = header;
  Json rounds = Json::array();
  for (std::size_t t = 0; t < tr.rounds.size(); ++t) {
    const Round& r = tr.rounds[t];
    Json row;
    row["t"] = t + 1;
    if (r.z) row["z"] = *r.z;
    if (r.query) row["query"] = {r.query->x0, r.query->x1, r.query->y0, r.query->y1};
    row["prediction"] = r.prediction;
    if (r.query) row["side"] = r.side;
    row["x"] = r.x;
    row["y"] = r.y;
    row["loss"] = r.loss;
    rounds.push_back(row);
  }
  j["rounds"] = rounds;
  return j;
}

inline Transcript transcript_from_json(const Json& j) {
  Transcript tr;
  const auto p = parse_protocol(j.at("header").at("protocol").get<std::string>());
  if (!p) throw DomainError("transcript has an unknown protocol");
  tr.protocol = *p;
  for (const auto& row : j.at("rounds")) {
    Round r;
    if (row.contains("z")) r.z = row.at("z").get<Instance>();
    if (row.contains("query")) {
      const auto& q = row.at("query");
      r.query = TreeNode{q.at(0).get<Instance>(), q.at(1).get<Instance>(), q.at(2).get<Label>(), q.at(3).get<Label>()};
      r.side = row.at("side").get<int>();
    }
    r.prediction = row.at("prediction").get<Label>();
    r.x = row.at("x").get<Instance>();
    r.y = row.at("y").get<Label>();
    r.loss = row.at("loss").get<int>();
    tr.rounds.push_back(r);
  }
  return tr;
}

/// Recomputes the summary from a transcript alone; no learner is run.
/// Loss bits are re-derived from prediction and label and must agree.
inline RunSummary replay(const Json& transcript) {
  const Json& h = transcript.at("header");
  const Transcript tr = transcript_from_json(transcript);
  RunSummary s;
  s.protocol = h.at("protocol").get<std::string>();
  s.learner = h.at("learner").get<std::string>();
  s.adversary = h.at("adversary").get<std::string>();
  s.seed = h.at("seed").get<std::uint64_t>();
  s.horizon = h.at("horizon").get<std::size_t>();
  s.dimension = h.at("dimension").get<int>();
  s.dimension_capped = h.at("dimension_capped").get<bool>();
  s.tree_depth = h.at("tree_depth").get<std::size_t>();
  s.rounds = tr.rounds.size();
  for (std::size_t t = 0; t < tr.rounds.size(); ++t) {
    const Round& r = tr.rounds[t];
    const int loss = r.prediction != r.y ? 1 : 0;
    if (loss != r.loss) throw ProtocolViolation("transcript loss bit disagrees with prediction and label", t + 1);
    s.mistakes += static_cast<std::size_t>(loss);
  }
  s.assertions = run_assertions(s);
  return s;
}

}  // namespace rol
