// Command-line front end. Every subcommand prints machine-readable output on
// stdout and exits 0 only when all of its assertions hold.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rol/rol.hpp"

namespace {

using rol::Json;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("cannot write " + path);
  out << text;
}

void print_diagnostics(const std::string& path, const rol::ParseResult& r) {
  for (const auto& w : r.warnings) std::cerr << path << ":" << w.str() << ": warning\n";
  for (const auto& e : r.errors) std::cerr << path << ":" << e.str() << "\n";
}

rol::Scenario load(const std::string& path) {
  const auto r = rol::parse_scenario(slurp(path));
  print_diagnostics(path, r);
  if (!r.ok()) throw Failure(path + ": " + std::to_string(r.errors.size()) + " error(s)");
  return *r.scenario;
}

rol::TieBreak parse_tie(const std::string& s) {
  if (s == "low") return rol::TieBreak::kLowLabel;
  if (s == "high") return rol::TieBreak::kHighLabel;
  throw Failure("tie-break must be 'low' or 'high'");
}

int emit(const Json& j, bool ok) {
  std::cout << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

// --------------------------------------------------------------------------

struct DimArgs {
  std::string scenario;
  std::optional<int> cap;
  bool witness = false;
  bool multiclass = false;
  std::string map;
};

int cmd_dim(const DimArgs& a) {
  rol::Scenario sc = load(a.scenario);
  if (!a.map.empty()) sc.game.truth = a.map;
  const auto mode = a.multiclass || rol::is_multiclass(sc.game.protocol) ? rol::LabelMode::kMulticlass
                                                                          : rol::LabelMode::kBinary;
  rol::Workspace ws(sc.hypotheses, sc.perturbation(), mode);
  const int cap = a.cap.value_or(static_cast<int>(sc.hypotheses.size()));
  const auto d = ws.solver->ldim_capped(ws.setting->full(), cap);
  std::cout << "dimension " << std::max(0, d.value) << (d.at_least_cap ? " (at least; depth cap reached)" : "")
            << "\nmode " << (mode == rol::LabelMode::kBinary ? "binary" : "multiclass") << "\n";
  if (a.witness) {
    const auto tree = ws.solver->witness(ws.setting->full(), static_cast<std::size_t>(std::max(0, d.value)));
    if (!rol::is_shattered(tree, *ws.setting, mode)) throw rol::InvariantViolation("witness tree is not shattered");
    std::cout << rol::tree_to_text(tree, sc);
  }
  return 0;
}

struct PlayArgs {
  std::string scenario;
  rol::RunOptions run;
  std::string tie = "low";
  std::string transcript, summary;
  bool timing = false;
};

int cmd_play(PlayArgs a) {
  const rol::Scenario sc = load(a.scenario);
  a.run.tie = parse_tie(a.tie);
  const auto r = rol::run(sc, a.run);
  const Json j = rol::summary_json(r.summary, a.timing);
  if (!a.transcript.empty()) spit(a.transcript, rol::transcript_json(r.summary, r.transcript).dump(1) + "\n");
  if (!a.summary.empty()) spit(a.summary, j.dump(2) + "\n");
  return emit(j, r.summary.ok());
}

int cmd_replay(const std::string& path) {
  const auto s = rol::replay(Json::parse(slurp(path)));
  return emit(rol::summary_json(s), s.ok());
}

struct OracleArgs {
  std::string scenario;
  std::string game = "both";
  std::optional<std::size_t> horizon;
};

int cmd_oracle(const OracleArgs& a) {
  const rol::Scenario sc = load(a.scenario);
  const rol::Setting s(sc.hypotheses, sc.perturbation());
  const int l = std::max(0, rol::ldim_u(s, rol::LabelMode::kBinary).value);
  Json j;
  j["dimension"] = l;
  bool ok = true;
  auto one = [&](const char* name, rol::GameKind kind) {
    const int v = rol::minimax_optimal_mistakes(s, kind, a.horizon);
    j[name] = v;
    if (!a.horizon) ok = ok && v == l;
  };
  if (a.game == "robust" || a.game == "both") one("robust", rol::GameKind::kRobust);
  if (a.game == "orientation" || a.game == "both") one("orientation", rol::GameKind::kOrientation);
  if (a.game != "robust" && a.game != "orientation" && a.game != "both")
    throw Failure("game must be robust, orientation or both");
  j["ok"] = ok;
  return emit(j, ok);
}

struct AdversaryArgs {
  std::string scenario;
  std::string learner = "all";
  std::optional<std::uint64_t> seed;
  std::string tie = "low";
};

int cmd_adversary(const AdversaryArgs& a) {
  const rol::Scenario sc = load(a.scenario);
  std::vector<std::string> names;
  if (a.learner == "all") {
    names = rol::is_orientation(sc.game.protocol) ? rol::orientation_learner_names() : rol::robust_learner_names();
  } else {
    names = {a.learner};
  }
  Json rows = Json::array();
  bool ok = true;
  for (const auto& n : names) {
    rol::RunOptions o;
    o.learner = n;
    o.adversary = "tree-only";
    o.seed = a.seed;
    o.tie = parse_tie(a.tie);
    const auto r = rol::run(sc, o);
    const bool optimal = n == "soa" || n == "soa-lazy";
    const bool pass = optimal ? r.summary.mistakes == r.summary.tree_depth : r.summary.mistakes >= r.summary.tree_depth;
    ok = ok && pass;
    rows.push_back({{"learner", n}, {"mistakes", r.summary.mistakes}, {"forced", r.summary.tree_depth}, {"ok", pass}});
  }
  Json j;
  j["protocol"] = rol::to_string(sc.game.protocol);
  j["runs"] = rows;
  j["ok"] = ok;
  return emit(j, ok);
}

struct AgnosticArgs {
  std::string scenario;
  std::size_t horizon = 10;
  std::size_t seeds = 200;
  std::size_t corruptions = 1;
  std::optional<std::uint64_t> seed;
  std::string trace;
};

int cmd_agnostic(const AgnosticArgs& a) {
  const rol::Scenario sc = load(a.scenario);
  rol::Workspace ws(sc.hypotheses, sc.perturbation(), rol::LabelMode::kBinary);
  const std::uint64_t seed = a.seed.value_or(sc.game.seed);
  rol::Rng seq_rng(seed, 0);
  const auto seq = rol::sample_corrupted_sequence(*ws.setting, a.horizon, a.corruptions, seq_rng);
  const int l = std::max(0, ws.solver->ldim());
  std::vector<double> regret, loss;
  rol::RegretReport first;
  for (std::size_t s = 0; s < a.seeds; ++s) {
    auto r = rol::agnostic_run(ws.solver, seq, rol::derive_seed(seed, s + 1));
    regret.push_back(r.regret);
    loss.push_back(r.learner_loss);
    if (s == 0) first = std::move(r);
  }
  const auto st = rol::summarize(regret);
  const double experts = rol::subset_expert_count(a.horizon, static_cast<std::size_t>(l));
  const double bound = l + std::sqrt(static_cast<double>(a.horizon) / 2 * std::log(experts));
  const bool ok = st.mean <= bound + 3 * st.sem;
  Json j;
  j["dimension"] = l;
  j["horizon"] = a.horizon;
  j["experts"] = first.experts;
  j["seeds"] = a.seeds;
  j["corruptions"] = a.corruptions;
  j["comparator_loss"] = first.comparator_loss;
  j["mean_learner_loss"] = rol::summarize(loss).mean;
  j["mean_regret"] = st.mean;
  j["regret_sem"] = st.sem;
  j["expected_regret"] = first.expected_regret;
  j["bound"] = bound;
  j["ratio"] = bound > 0 ? st.mean / bound : 0.0;
  j["ok"] = ok;
  if (!a.trace.empty()) {
    std::ostringstream os;
    for (const auto& row : first.trace)
      os << Json{{"t", row.t + 1}, {"z", row.z},          {"x", row.x},      {"y", row.y},
                 {"prediction", row.prediction}, {"p_one", row.p_one}, {"loss", row.loss}}
                .dump()
         << "\n";
    spit(a.trace, os.str());
  }
  return emit(j, ok);
}

struct UncertainArgs {
  std::string scenario;
  std::string family;
  std::string method = "halving";
  std::optional<std::uint64_t> seed;
  std::size_t seeds = 100;
  std::optional<std::size_t> horizon;
  bool reset = false;
};

int cmd_uncertain(const UncertainArgs& a) {
  rol::Scenario sc = load(a.scenario);
  if (!a.family.empty()) {
    const auto r = rol::parse_family(slurp(a.family), sc);
    print_diagnostics(a.family, r);
    if (!r.ok()) throw Failure(a.family + ": " + std::to_string(r.errors.size()) + " error(s)");
    sc = *r.scenario;
  }
  const std::uint64_t seed = a.seed.value_or(sc.game.seed);
  const std::size_t horizon = a.horizon.value_or(sc.game.horizon);
  const rol::Setting truth(sc.hypotheses, sc.perturbation());
  const int l = std::max(0, rol::DimensionSolver(truth, rol::LabelMode::kBinary).ldim());
  const std::size_t g = sc.perturbations.size();
  Json j;
  j["method"] = a.method;
  j["family_size"] = g;
  j["truth_dimension"] = l;
  bool ok = true;
  if (a.method == "halving") {
    rol::PhasedHalvingLearner learner(sc.hypotheses, sc.perturbations, a.reset);
    const auto tr = rol::family_game(sc, learner, horizon, seed);
    const long bound = rol::halving_bound(l, g);
    j["mistakes"] = tr.mistakes();
    j["phase_mistakes"] = learner.phase_mistakes();
    j["bound"] = bound;
    const bool phases_ok = std::all_of(learner.phase_mistakes().begin(), learner.phase_mistakes().end(),
                                       [&](std::size_t m) { return static_cast<long>(m) <= rol::ceil_log2(g); });
    ok = static_cast<long>(tr.mistakes()) <= bound && (g == 1 || phases_ok);
  } else if (a.method == "ewa") {
    rol::PhasedHalvingLearner driver(sc.hypotheses, sc.perturbations);
    const auto seq = rol::steps_of(rol::family_game(sc, driver, horizon, seed));
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < a.seeds; ++s) seeds.push_back(rol::derive_seed(seed, s + 1));
    const auto rep = rol::uncertain_ewa_run(sc.hypotheses, sc.perturbations, seq, seeds);
    const auto st = rol::summarize(rep.mistakes);
    const double bound = rol::uncertain_ewa_bound(rep.max_dimension, g);
    j["valid"] = rep.valid;
    j["max_dimension"] = rep.max_dimension;
    j["rounds"] = seq.size();
    j["mean_mistakes"] = st.mean;
    j["mistakes_sem"] = st.sem;
    j["expected_mistakes"] = rep.expected_mistakes.empty() ? 0.0 : rep.expected_mistakes.front();
    j["constant"] = rol::kKnownLossConstant;
    j["bound"] = bound;
    j["ratio"] = bound > 0 ? st.mean / bound : 0.0;
    ok = rep.valid && st.mean <= bound + 3 * st.sem;
  } else {
    throw Failure("method must be 'ewa' or 'halving'");
  }
  j["ok"] = ok;
  return emit(j, ok);
}

struct CorpusArgs {
  std::size_t count = 200;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<double> weights{1, 1, 1, 1};
  std::size_t labels = 2;
  std::size_t family = 0;
};

int cmd_gen_corpus(const CorpusArgs& a) {
  rol::CorpusParams p;
  if (a.weights.size() != rol::kStratumCount) throw Failure("--strata takes four weights");
  std::copy(a.weights.begin(), a.weights.end(), p.proportions.begin());
  p.labels = a.labels;
  if (a.labels > 2) p.protocol = rol::Protocol::kMulticlassRobust;
  std::vector<std::pair<std::string, rol::Scenario>> items;
  if (a.family > 0) {
    for (auto& sc : rol::generate_family_corpus(p, a.count, a.family, a.seed)) items.emplace_back("family", sc);
  } else {
    for (auto& e : rol::generate_corpus(p, a.count, a.seed)) items.emplace_back(rol::to_string(e.stratum), e.scenario);
  }
  if (!a.out.empty()) std::filesystem::create_directories(a.out);
  for (std::size_t i = 0; i < items.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scenario-%04zu.txt", i);
    const std::string text = "# stratum " + items[i].first + "\n" + rol::serialize_scenario(items[i].second);
    if (a.out.empty()) std::cout << "# " << name << "\n" << text;
    else spit((std::filesystem::path(a.out) / name).string(), text);
  }
  return 0;
}

int cmd_check(std::uint64_t seed, bool repro) {
  rol::AcceptanceOptions o;
  o.seed = seed;
  o.reproducibility = repro;
  bool ok = true;
  rol::run_acceptance(o, [&](const rol::CriterionResult& r) {
    std::cout << r.line() << std::endl;
    ok = ok && r.passed;
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust online learning laboratory"};
  app.require_subcommand(1);
  int code = 0;

  DimArgs dim;
  auto* c_dim = app.add_subcommand("dim", "Adversarial Littlestone dimension of a scenario");
  c_dim->add_option("scenario", dim.scenario)->required();
  c_dim->add_option("--depth-cap", dim.cap, "Stop reporting beyond this depth");
  c_dim->add_flag("--witness", dim.witness, "Print a shattered tree of maximal depth");
  c_dim->add_flag("--multiclass", dim.multiclass, "Use the multiclass tree definition");
  c_dim->add_option("--map", dim.map, "Perturbation block to use");
  c_dim->callback([&] { code = cmd_dim(dim); });

  PlayArgs play;
  auto* c_play = app.add_subcommand("play", "Run one game and print its summary");
  c_play->add_option("scenario", play.scenario)->required();
  c_play->add_option("--learner", play.run.learner);
  c_play->add_option("--adversary", play.run.adversary, "tree | tree-only | random");
  c_play->add_option("--seed", play.run.seed);
  c_play->add_option("--horizon", play.run.horizon);
  c_play->add_option("--depth-cap", play.run.depth_cap);
  c_play->add_option("--tie-break", play.tie, "low | high");
  c_play->add_option("--transcript", play.transcript, "Write the transcript here");
  c_play->add_option("--summary", play.summary, "Also write the summary here");
  c_play->add_flag("--timing", play.timing, "Include wall-clock time in the summary");
  c_play->callback([&] { code = cmd_play(play); });

  std::string replay_path;
  auto* c_replay = app.add_subcommand("replay", "Recompute a summary from a saved transcript");
  c_replay->add_option("transcript", replay_path)->required();
  c_replay->callback([&] { code = cmd_replay(replay_path); });

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Exact minimax game value by search");
  c_oracle->add_option("scenario", oracle.scenario)->required();
  c_oracle->add_option("--game", oracle.game, "robust | orientation | both");
  c_oracle->add_option("--horizon", oracle.horizon);
  c_oracle->callback([&] { code = cmd_oracle(oracle); });

  AdversaryArgs adv;
  auto* c_adv = app.add_subcommand("adversary", "Play learners against the shattered-tree adversary");
  c_adv->add_option("scenario", adv.scenario)->required();
  c_adv->add_option("--learner", adv.learner, "A registered learner or 'all'");
  c_adv->add_option("--seed", adv.seed);
  c_adv->add_option("--tie-break", adv.tie, "low | high");
  c_adv->callback([&] { code = cmd_adversary(adv); });

  AgnosticArgs ag;
  auto* c_ag = app.add_subcommand("agnostic", "Regret of the subset-expert learner on a corrupted sequence");
  c_ag->add_option("scenario", ag.scenario)->required();
  c_ag->add_option("--horizon", ag.horizon);
  c_ag->add_option("--seeds", ag.seeds);
  c_ag->add_option("--corruptions", ag.corruptions);
  c_ag->add_option("--seed", ag.seed);
  c_ag->add_option("--trace", ag.trace, "Write the first run's per-round trace here (JSON lines)");
  c_ag->callback([&] { code = cmd_agnostic(ag); });

  UncertainArgs un;
  auto* c_un = app.add_subcommand("uncertain", "Learning with a perturbation map known only up to a family");
  c_un->add_option("scenario", un.scenario)->required();
  c_un->add_option("--family", un.family, "PERTURBATIONS blocks replacing the scenario's own");
  c_un->add_option("--method", un.method, "ewa | halving");
  c_un->add_option("--seed", un.seed);
  c_un->add_option("--seeds", un.seeds);
  c_un->add_option("--horizon", un.horizon);
  c_un->add_flag("--reset-experts", un.reset, "Halving: reset expert state at each new phase");
  c_un->callback([&] { code = cmd_uncertain(un); });

  CorpusArgs corpus;
  auto* c_corpus = app.add_subcommand("gen-corpus", "Write a deterministic scenario corpus");
  c_corpus->add_option("--count", corpus.count);
  c_corpus->add_option("--seed", corpus.seed);
  c_corpus->add_option("--out", corpus.out, "Directory (stdout when empty)");
  c_corpus->add_option("--strata", corpus.weights, "Weights: identity total disjoint random-overlap")->expected(4);
  c_corpus->add_option("--labels", corpus.labels);
  c_corpus->add_option("--family-size", corpus.family, "Generate family scenarios with this many maps");
  c_corpus->callback([&] { code = cmd_gen_corpus(corpus); });

  std::uint64_t check_seed = rol::AcceptanceOptions{}.seed;
  bool no_repro = false;
  auto* c_check = app.add_subcommand("check", "Run the acceptance suite");
  c_check->add_option("--seed", check_seed);
  c_check->add_flag("--no-repro", no_repro, "Skip the second pass that checks reproducibility");
  c_check->callback([&] { code = cmd_check(check_seed, !no_repro); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const rol::ProtocolViolation& e) {
    std::cerr << "protocol violation in round " << e.round() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
