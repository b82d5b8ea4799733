// Protocol drivers for the robust online game and the (multiclass)
// orientation game, plus the learner/adversary interfaces they drive.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rol/core.hpp"
#include "rol/dimension.hpp"

namespace rol {

/// Two candidate clean instances with overlapping perturbation sets and two
/// distinct candidate labels (binary games always use labels (0, 1)).
using OrientationQuery = TreeNode;

enum class Protocol { kRobust, kOrientation, kMulticlassRobust, kMulticlassOrientation };

inline const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kRobust: return "robust";
    case Protocol::kOrientation: return "orientation";
    case Protocol::kMulticlassRobust: return "multiclass-robust";
    case Protocol::kMulticlassOrientation: return "multiclass-orientation";
  }
  return "?";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "robust") return Protocol::kRobust;
  if (s == "orientation") return Protocol::kOrientation;
  if (s == "multiclass-robust") return Protocol::kMulticlassRobust;
  if (s == "multiclass-orientation") return Protocol::kMulticlassOrientation;
  return std::nullopt;
}

inline bool is_orientation(Protocol p) {
  return p == Protocol::kOrientation || p == Protocol::kMulticlassOrientation;
}
inline bool is_multiclass(Protocol p) {
  return p == Protocol::kMulticlassRobust || p == Protocol::kMulticlassOrientation;
}

/// One robust-game round as seen after the fact: perturbed input, then clean pair.
struct RobustStep {
  Instance z = 0;
  Instance x = 0;
  Label y = 0;
  Example example() const { return {x, y}; }
  friend bool operator==(const RobustStep&, const RobustStep&) = default;
};

struct Round {
  std::optional<Instance> z;                // robust protocols
  std::optional<OrientationQuery> query;    // orientation protocols
  int side = -1;                            // orientation: revealed side
  Label prediction = 0;
  Instance x = 0;
  Label y = 0;
  int loss = 0;
  friend bool operator==(const Round&, const Round&) = default;
};

struct Transcript {
  Protocol protocol = Protocol::kRobust;
  std::vector<Round> rounds;

  std::size_t mistakes() const {
    std::size_t m = 0;
    for (const auto& r : rounds) m += static_cast<std::size_t>(r.loss);
    return m;
  }
  std::vector<Example> examples() const {
    std::vector<Example> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back({r.x, r.y});
    return out;
  }
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// ---------------------------------------------------------------------------

class RobustLearner {
 public:
  virtual ~RobustLearner() = default;
  /// Prediction for perturbed input z. Called once per round before update.
  virtual Label predict(Instance z) = 0;
  /// Clean reveal (x, y) for the round whose perturbed input was z.
  virtual void update(Instance z, Instance x, Label y) = 0;
  virtual std::string name() const = 0;
};

class OrientationLearner {
 public:
  virtual ~OrientationLearner() = default;
  virtual Label predict(const OrientationQuery& q) = 0;
  virtual void update(const OrientationQuery& q, int revealed_side) = 0;
  virtual std::string name() const = 0;
};

class RobustAdversary {
 public:
  virtual ~RobustAdversary() = default;
  /// Next perturbed input, or nullopt when the adversary stops.
  virtual std::optional<Instance> emit() = 0;
  virtual Example respond(Label prediction) = 0;
  /// Informs the adversary of a reveal it did not make itself (used when chaining).
  virtual void observe(const Example&) {}
};

class OrientationAdversary {
 public:
  virtual ~OrientationAdversary() = default;
  virtual std::optional<OrientationQuery> present() = 0;
  /// Which side of the presented query is revealed.
  virtual int respond(Label prediction) = 0;
  virtual void observe(const Example&) {}
};

struct GameOptions {
  std::size_t horizon = 0;
  /// Abort with ProtocolViolation when a reveal makes the sequence non-realizable.
  bool require_realizable = false;
};

/// Robust online game: Z_t, prediction, clean (X_t, Y_t) with Z_t in U(X_t), loss.
inline Transcript play_robust(const Setting& s, RobustLearner& learner, RobustAdversary& adversary,
                              const GameOptions& opt, Protocol tag = Protocol::kRobust) {
  Transcript tr;
  tr.protocol = tag;
  VersionSpace witness = s.full();
  for (std::size_t t = 1; t <= opt.horizon; ++t) {
    auto z = adversary.emit();
    if (!z) break;
    if (*z >= s.instance_count()) throw ProtocolViolation("perturbed input out of range", t);
    Round r;
    r.z = *z;
    r.prediction = learner.predict(*z);
    Example e = adversary.respond(r.prediction);
    if (e.x >= s.instance_count() || e.y >= s.label_count())
      throw ProtocolViolation("clean reveal out of range", t);
    if (!s.perturbations().allows(e.x, *z))
      throw ProtocolViolation("Z_t = " + std::to_string(*z) + " not in U(X_t) for X_t = " + std::to_string(e.x), t);
    if (opt.require_realizable) {
      witness = s.restrict(witness, e.x, e.y);
      if (witness.empty()) throw ProtocolViolation("adversary revealed a non-realizable example", t);
    }
    r.x = e.x;
    r.y = e.y;
    r.loss = r.prediction != e.y ? 1 : 0;
    learner.update(*z, e.x, e.y);
    tr.rounds.push_back(r);
  }
  return tr;
}

/// Orientation game: query ((X^0, X^1), (Y^0, Y^1)), prediction, revealed side, loss.
inline Transcript play_orientation(const Setting& s, OrientationLearner& learner,
                                   OrientationAdversary& adversary, const GameOptions& opt,
                                   Protocol tag = Protocol::kOrientation) {
  Transcript tr;
  tr.protocol = tag;
  VersionSpace witness = s.full();
  for (std::size_t t = 1; t <= opt.horizon; ++t) {
    auto q = adversary.present();
    if (!q) break;
    if (q->x0 >= s.instance_count() || q->x1 >= s.instance_count() ||
        !s.perturbations().overlaps(q->x0, q->x1))
      throw ProtocolViolation("orientation query outside X^2_U", t);
    if (q->y0 == q->y1 || q->y0 >= s.label_count() || q->y1 >= s.label_count())
      throw ProtocolViolation("orientation query labels must be distinct and in range", t);
    Round r;
    r.query = *q;
    r.prediction = learner.predict(*q);
    int side = adversary.respond(r.prediction);
    if (side != 0 && side != 1) throw ProtocolViolation("revealed side must be 0 or 1", t);
    r.side = side;
    r.x = q->instance(side);
    r.y = q->label(side);
    if (opt.require_realizable) {
      witness = s.restrict(witness, r.x, r.y);
      if (witness.empty()) throw ProtocolViolation("adversary revealed a non-realizable example", t);
    }
    r.loss = r.prediction != r.y ? 1 : 0;
    learner.update(*q, side);
    tr.rounds.push_back(r);
  }
  return tr;
}

}  // namespace rol
