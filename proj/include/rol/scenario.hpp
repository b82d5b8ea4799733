// Scenario files.
//
//   # comment
//   SPACES
//   instances a b c
//   labels 0 1
//   HYPOTHESES
//   h0: 0 1 1          one label name per instance, in `instances` order
//   PERTURBATIONS U    name optional when there is a single block
//   a: a b             one line per instance; an empty list means U(a) = {}
//   b: b
//   c:
//   GAME
//   protocol robust    robust | orientation | multiclass-robust | multiclass-orientation
//   horizon 20
//   learner soa
//   adversary tree
//   seed 7
//   truth U            which PERTURBATIONS block is the true map
//
// Several PERTURBATIONS blocks form a family. Parsing never throws: it
// returns either a validated Scenario or positioned diagnostics.
#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rol/core.hpp"
#include "rol/dimension.hpp"
#include "rol/game.hpp"
#include "rol/uncertain.hpp"

namespace rol {

struct GameConfig {
  Protocol protocol = Protocol::kRobust;
  std::size_t horizon = 20;
  std::string learner = "soa";
  std::string adversary = "tree";
  std::uint64_t seed = 0;
  std::string truth;  // empty: first perturbation block
  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct Scenario {
  std::vector<std::string> instance_names;
  std::vector<std::string> label_names;
  std::vector<std::string> hypothesis_names;
  HypothesisClass hypotheses;
  std::vector<std::string> perturbation_names;
  PerturbationFamily perturbations;
  GameConfig game;

  std::size_t truth_index() const {
    if (game.truth.empty()) return 0;
    for (std::size_t i = 0; i < perturbation_names.size(); ++i)
      if (perturbation_names[i] == game.truth) return i;
    throw DomainError("unknown truth map '" + game.truth + "'");
  }
  const PerturbationMap& perturbation() const { return perturbations.at(truth_index()); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  bool ok() const { return scenario.has_value() && errors.empty(); }
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column = 0;
};

struct Line {
  std::size_t number = 0;
  std::vector<Token> tokens;
  std::optional<std::size_t> colon;  // column of ':' if present
  std::vector<Token> head, tail;     // split at ':'
};

inline std::vector<Token> tokenize(std::string_view s, std::size_t col0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back({std::string(s.substr(i, j - i)), col0 + i});
    i = j;
  }
  return out;
}

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line l;
    l.number = number;
    l.tokens = tokenize(raw, 1);
    if (!l.tokens.empty()) {
      if (auto c = raw.find(':'); c != std::string_view::npos) {
        l.colon = c + 1;
        l.head = tokenize(raw.substr(0, c), 1);
        l.tail = tokenize(raw.substr(c + 1), c + 2);
      }
      lines.push_back(std::move(l));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

inline std::optional<std::uint64_t> parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline bool is_section(const Line& l) {
  if (l.colon) return false;
  const auto& t = l.tokens.front().text;
  return t == "SPACES" || t == "HYPOTHESES" || t == "PERTURBATIONS" || t == "GAME" ||
         (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= 'A' && c <= 'Z'; }));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lines_(split_lines(text)) {}

  ParseResult run() {
    ParseResult out;
    try {
      parse();
      if (errors_.empty()) out.scenario = build();
    } catch (const std::exception& e) {
      error(0, 0, std::string("internal: ") + e.what());
    }
    out.errors = std::move(errors_);
    out.warnings = std::move(warnings_);
    if (!out.errors.empty()) out.scenario.reset();
    return out;
  }

 private:
  struct RawMap {
    std::string name;
    std::size_t line = 0;
    std::vector<const Line*> rows;
  };

  void error(std::size_t line, std::size_t col, std::string msg) { errors_.push_back({line, col, std::move(msg)}); }
  void warn(std::size_t line, std::size_t col, std::string msg) { warnings_.push_back({line, col, std::move(msg)}); }

  void parse() {
    std::string section;
    for (const Line& l : lines_) {
      if (is_section(l)) {
        section = l.tokens[0].text;
        if (section == "SPACES" || section == "HYPOTHESES" || section == "GAME") {
          if (seen_.count(section)) error(l.number, 1, "duplicate section " + section);
          seen_[section] = l.number;
          if (l.tokens.size() > 1) error(l.number, l.tokens[1].column, "unexpected text after section header");
        } else if (section == "PERTURBATIONS") {
          if (l.tokens.size() > 2) error(l.number, l.tokens[2].column, "unexpected text after perturbation name");
          maps_.push_back({l.tokens.size() > 1 ? l.tokens[1].text : "", l.number, {}});
        } else {
          error(l.number, 1, "unknown section '" + section + "'");
        }
        continue;
      }
      if (section.empty()) {
        error(l.number, l.tokens[0].column, "content before the first section");
      } else if (section == "SPACES") {
        space_line(l);
      } else if (section == "HYPOTHESES") {
        hyp_rows_.push_back(&l);
      } else if (section == "PERTURBATIONS") {
        maps_.back().rows.push_back(&l);
      } else if (section == "GAME") {
        game_line(l);
      }
    }
    if (!seen_.count("SPACES")) error(0, 0, "missing SPACES section");
    if (!seen_.count("HYPOTHESES")) error(0, 0, "missing HYPOTHESES section");
    if (maps_.empty()) error(0, 0, "missing PERTURBATIONS section");
  }

  void names_into(const Line& l, std::vector<std::string>& dst, const char* what) {
    if (!dst.empty()) error(l.number, 1, std::string("duplicate '") + what + "' line");
    std::map<std::string, bool> seen;
    for (std::size_t i = 1; i < l.tokens.size(); ++i) {
      const auto& t = l.tokens[i];
      if (seen.count(t.text)) error(l.number, t.column, std::string("duplicate ") + what + " name '" + t.text + "'");
      seen[t.text] = true;
      dst.push_back(t.text);
    }
    if (l.tokens.size() == 1) error(l.number, 1, std::string("empty '") + what + "' list");
  }

  void space_line(const Line& l) {
    if (l.colon) {
      error(l.number, *l.colon, "unexpected ':' in SPACES");
      return;
    }
    const auto& key = l.tokens[0].text;
    if (key == "instances") names_into(l, instances_, "instances");
    else if (key == "labels") names_into(l, labels_, "labels");
    else error(l.number, l.tokens[0].column, "unknown SPACES key '" + key + "'");
  }

  void game_line(const Line& l) {
    const auto& key = l.tokens[0];
    if (l.tokens.size() != 2) {
      error(l.number, key.column, "GAME entries take exactly one value");
      return;
    }
    const auto& val = l.tokens[1];
    if (game_keys_.count(key.text)) error(l.number, key.column, "duplicate GAME key '" + key.text + "'");
    game_keys_[key.text] = true;
    if (key.text == "protocol") {
      if (auto p = parse_protocol(val.text)) game_.protocol = *p;
      else error(l.number, val.column, "unknown protocol '" + val.text + "'");
    } else if (key.text == "horizon" || key.text == "seed") {
      auto v = parse_uint(val.text);
      if (!v) error(l.number, val.column, "expected a non-negative integer");
      else if (key.text == "horizon") game_.horizon = *v;
      else game_.seed = *v;
    } else if (key.text == "learner") {
      game_.learner = val.text;
    } else if (key.text == "adversary") {
      game_.adversary = val.text;
    } else if (key.text == "truth") {
      game_.truth = val.text;
      truth_line_ = l.number;
      truth_col_ = val.column;
    } else {
      error(l.number, key.column, "unknown GAME key '" + key.text + "'");
    }
  }

  std::optional<std::size_t> index_of(const std::vector<std::string>& names, const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return i;
    return std::nullopt;
  }

  std::optional<Scenario> build() {
    if (instances_.empty()) error(seen_["SPACES"], 1, "SPACES needs an 'instances' line");
    if (labels_.empty()) error(seen_["SPACES"], 1, "SPACES needs a 'labels' line");
    if (instances_.size() > kMaxInstances) error(seen_["SPACES"], 1, "at most 64 instances");
    if (labels_.size() == 1) error(seen_["SPACES"], 1, "at least two labels are required");
    if (!errors_.empty()) return std::nullopt;

    Scenario sc;
    sc.instance_names = instances_;
    sc.label_names = labels_;
    sc.game = game_;

    std::vector<HypothesisClass::Table> tables;
    std::vector<std::string> names;
    std::map<std::string, bool> hyp_seen;
    for (const Line* l : hyp_rows_) {
      if (!l->colon || l->head.size() != 1) {
        error(l->number, l->tokens[0].column, "hypothesis rows look like 'name: label ...'");
        continue;
      }
      const auto& name = l->head[0].text;
      if (hyp_seen.count(name)) error(l->number, l->head[0].column, "duplicate hypothesis name '" + name + "'");
      hyp_seen[name] = true;
      if (l->tail.size() != instances_.size()) {
        error(l->number, l->tail.empty() ? *l->colon : l->tail.back().column,
              "hypothesis '" + name + "' has " + std::to_string(l->tail.size()) + " labels, expected " +
                  std::to_string(instances_.size()));
        continue;
      }
      HypothesisClass::Table t;
      for (const auto& tok : l->tail) {
        auto y = index_of(labels_, tok.text);
        if (!y) {
          error(l->number, tok.column, "unknown label '" + tok.text + "'");
          break;
        }
        t.push_back(static_cast<Label>(*y));
      }
      if (t.size() != instances_.size()) continue;
      tables.push_back(std::move(t));
      names.push_back(name);
      hyp_lines_.push_back(l->number);
    }
    if (tables.empty() && errors_.empty()) error(seen_["HYPOTHESES"], 1, "hypothesis class is empty");
    if (tables.size() > kMaxHypotheses * 4) error(seen_["HYPOTHESES"], 1, "too many hypotheses");

    std::map<std::string, bool> map_seen;
    for (auto& m : maps_) {
      if (m.name.empty()) {
        if (maps_.size() > 1) error(m.line, 1, "perturbation blocks need names when there are several");
        m.name = "U";
      }
      if (map_seen.count(m.name)) error(m.line, 1, "duplicate perturbation block '" + m.name + "'");
      map_seen[m.name] = true;
      std::vector<std::optional<Mask>> fwd(instances_.size());
      for (const Line* l : m.rows) {
        if (!l->colon || l->head.size() != 1) {
          error(l->number, l->tokens[0].column, "perturbation rows look like 'instance: instance ...'");
          continue;
        }
        auto x = index_of(instances_, l->head[0].text);
        if (!x) {
          error(l->number, l->head[0].column, "unknown instance '" + l->head[0].text + "'");
          continue;
        }
        if (fwd[*x]) {
          error(l->number, l->head[0].column, "perturbation set of '" + l->head[0].text + "' given twice");
          continue;
        }
        Mask set = 0;
        for (const auto& tok : l->tail) {
          auto z = index_of(instances_, tok.text);
          if (!z) error(l->number, tok.column, "perturbation target '" + tok.text + "' is not an instance");
          else set |= bit(*z);
        }
        fwd[*x] = set;
      }
      std::vector<Mask> full;
      for (std::size_t x = 0; x < fwd.size(); ++x) {
        if (!fwd[x]) error(m.line, 1, "block '" + m.name + "' has no row for instance '" + instances_[x] + "'");
        full.push_back(fwd[x].value_or(0));
      }
      sc.perturbation_names.push_back(m.name);
      if (errors_.empty()) sc.perturbations.emplace_back(std::move(full));
    }
    if (!game_.truth.empty() && !index_of(sc.perturbation_names, game_.truth))
      error(truth_line_, truth_col_, "truth names unknown perturbation block '" + game_.truth + "'");
    if (!errors_.empty()) return std::nullopt;

    std::vector<std::size_t> kept;
    sc.hypotheses = HypothesisClass(std::move(tables), instances_.size(), labels_.size(), &kept);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i] < sc.hypothesis_names.size()) {
        warn(hyp_lines_[i], 1,
             "hypothesis '" + names[i] + "' duplicates '" + sc.hypothesis_names[kept[i]] + "'; merged");
      } else {
        sc.hypothesis_names.push_back(names[i]);
      }
    }
    return sc;
  }

  std::vector<Line> lines_;
  std::map<std::string, std::size_t> seen_;
  std::vector<std::string> instances_, labels_;
  std::vector<const Line*> hyp_rows_;
  std::vector<std::size_t> hyp_lines_;
  std::vector<RawMap> maps_;
  GameConfig game_;
  std::map<std::string, bool> game_keys_;
  std::size_t truth_line_ = 0, truth_col_ = 0;
  std::vector<Diagnostic> errors_, warnings_;
};

}  // namespace detail

inline ParseResult parse_scenario(std::string_view text) { return detail::Parser(text).run(); }

inline std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream os;
  os << "SPACES\ninstances";
  for (const auto& n : sc.instance_names) os << ' ' << n;
  os << "\nlabels";
  for (const auto& n : sc.label_names) os << ' ' << n;
  os << "\nHYPOTHESES\n";
  for (std::size_t h = 0; h < sc.hypotheses.size(); ++h) {
    os << sc.hypothesis_names[h] << ':';
    for (Label y : sc.hypotheses.table(h)) os << ' ' << sc.label_names[y];
    os << '\n';
  }
  for (std::size_t m = 0; m < sc.perturbations.size(); ++m) {
    os << "PERTURBATIONS " << sc.perturbation_names[m] << '\n';
    for (Instance x = 0; x < sc.instance_names.size(); ++x) {
      os << sc.instance_names[x] << ':';
      for_each_bit(sc.perturbations[m].forward(x), [&](std::size_t z) { os << ' ' << sc.instance_names[z]; });
      os << '\n';
    }
  }
  os << "GAME\nprotocol " << to_string(sc.game.protocol) << "\nhorizon " << sc.game.horizon << "\nlearner "
     << sc.game.learner << "\nadversary " << sc.game.adversary << "\nseed " << sc.game.seed << '\n';
  if (!sc.game.truth.empty()) os << "truth " << sc.game.truth << '\n';
  return os.str();
}

/// Witness tree as text: a 'TREE depth d' header, then one line per node in
/// heap order: '<path> <x0> <x1> <y0> <y1>' where path is the edge string
/// from the root ('-' for the root).
inline std::string tree_to_text(const AdversarialTree& t, const Scenario& sc) {
  std::ostringstream os;
  os << "TREE depth " << t.depth << '\n';
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    std::string path;
    for (std::size_t j = i; j > 0; j = (j - 1) / 2) path.insert(path.begin(), (j - 1) % 2 == 0 ? '0' : '1');
    const auto& n = t.nodes[i];
    os << (path.empty() ? "-" : path) << ' ' << sc.instance_names[n.x0] << ' ' << sc.instance_names[n.x1] << ' '
       << sc.label_names[n.y0] << ' ' << sc.label_names[n.y1] << '\n';
  }
  return os.str();
}

/// Reads a family file (PERTURBATIONS blocks and an optional GAME block with
/// `truth`) against the spaces and class of `base`. Diagnostics carry the
/// family file's own line numbers.
inline ParseResult parse_family(std::string_view text, const Scenario& base) {
  Scenario head = base;
  head.perturbation_names = {"U"};
  head.perturbations = {PerturbationMap::identity(base.instance_names.size())};
  std::string prefix = serialize_scenario(head);
  prefix = prefix.substr(0, prefix.find("PERTURBATIONS"));
  const auto offset = static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '\n'));
  ParseResult r = parse_scenario(prefix + std::string(text));
  for (auto* list : {&r.errors, &r.warnings})
    for (auto& d : *list)
      if (d.line > offset) d.line -= offset;
  if (r.scenario) {
    const std::string truth = r.scenario->game.truth;
    r.scenario->game = base.game;
    r.scenario->game.truth = truth;
  }
  return r;
}

}  // namespace rol
