// Finite model of robust online classification: instance/label spaces,
// explicit hypothesis tables, perturbation maps and the adversarial loss.
//
// Everything here is immutable after construction. Hypothesis subsets and
// instance subsets are encoded as 64-bit masks, which caps |X| and |H| at 64.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rol {

using Instance = std::uint32_t;
using Label = std::uint32_t;
using Mask = std::uint64_t;

inline constexpr std::size_t kMaxInstances = 64;
inline constexpr std::size_t kMaxHypotheses = 64;

/// Out-of-range ids or malformed model input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A game participant broke the protocol (non-realizable reveal, Z not in U(X), ...).
class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(const std::string& what, std::size_t round = 0)
      : std::runtime_error(what), round_(round) {}
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

/// An internal guarantee failed; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested computation exceeds documented size limits.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// mask helpers

inline constexpr Mask bit(std::size_t i) noexcept { return Mask{1} << i; }
inline constexpr bool has(Mask m, std::size_t i) noexcept { return (m >> i) & 1U; }
inline constexpr Mask low_bits(std::size_t n) noexcept {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}
inline int popcount(Mask m) noexcept { return std::popcount(m); }

/// Calls fn(i) for every set bit, ascending.
template <typename Fn>
inline void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    fn(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

inline std::vector<std::size_t> bits_of(Mask m) {
  std::vector<std::size_t> out;
  for_each_bit(m, [&](std::size_t i) { out.push_back(i); });
  return out;
}

// ---------------------------------------------------------------------------

/// Explicit, deduplicated table of hypotheses h : X -> Y.
class HypothesisClass {
 public:
  using Table = std::vector<Label>;

  HypothesisClass() = default;

  /// Builds a class; equal tables are merged keeping the first occurrence.
  /// `kept` (optional) receives, for each input row, the id it maps to.
  HypothesisClass(std::vector<Table> tables, std::size_t instance_count, std::size_t label_count,
                  std::vector<std::size_t>* kept = nullptr)
      : instance_count_(instance_count), label_count_(label_count) {
    if (instance_count == 0 || instance_count > kMaxInstances)
      throw DomainError("instance count must be in [1, 64]");
    if (label_count < 2) throw DomainError("label space needs at least two labels");
    if (tables.empty()) throw DomainError("hypothesis class must be nonempty");
    if (kept) kept->clear();
    for (auto& t : tables) {
      if (t.size() != instance_count)
        throw DomainError("hypothesis table length " + std::to_string(t.size()) +
                          " != |X| = " + std::to_string(instance_count));
      for (Label y : t)
        if (y >= label_count) throw DomainError("label id out of range in hypothesis table");
      auto it = std::find(tables_.begin(), tables_.end(), t);
      if (it == tables_.end()) {
        if (tables_.size() == kMaxHypotheses) throw DomainError("more than 64 distinct hypotheses");
        if (kept) kept->push_back(tables_.size());
        tables_.push_back(std::move(t));
      } else {
        ++merged_;
        if (kept) kept->push_back(static_cast<std::size_t>(it - tables_.begin()));
      }
    }
  }

  std::size_t size() const noexcept { return tables_.size(); }
  std::size_t instance_count() const noexcept { return instance_count_; }
  std::size_t label_count() const noexcept { return label_count_; }
  /// Number of duplicate tables dropped at construction.
  std::size_t merged_duplicates() const noexcept { return merged_; }

  const Table& table(std::size_t h) const { return tables_.at(h); }
  Label operator()(std::size_t h, Instance x) const { return tables_[h][x]; }
  const std::vector<Table>& tables() const noexcept { return tables_; }

  Mask all() const noexcept { return low_bits(tables_.size()); }

  /// Equal as classes; the merge count from construction is ignored.
  friend bool operator==(const HypothesisClass& a, const HypothesisClass& b) {
    return a.instance_count_ == b.instance_count_ && a.label_count_ == b.label_count_ && a.tables_ == b.tables_;
  }

 private:
  std::vector<Table> tables_;
  std::size_t instance_count_ = 0;
  std::size_t label_count_ = 0;
  std::size_t merged_ = 0;
};

/// U : X -> 2^X together with its transpose. U(x) may be empty and need not contain x.
class PerturbationMap {
 public:
  PerturbationMap() = default;

  explicit PerturbationMap(std::vector<Mask> forward) : forward_(std::move(forward)) {
    const std::size_t n = forward_.size();
    if (n == 0 || n > kMaxInstances) throw DomainError("perturbation map size must be in [1, 64]");
    preimage_.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if ((forward_[x] & ~low_bits(n)) != 0) throw DomainError("perturbation target out of range");
      for_each_bit(forward_[x], [&](std::size_t z) { preimage_[z] |= bit(x); });
    }
  }

  static PerturbationMap from_sets(const std::vector<std::vector<Instance>>& sets) {
    std::vector<Mask> fwd;
    fwd.reserve(sets.size());
    for (const auto& s : sets) {
      Mask m = 0;
      for (Instance z : s) {
        if (z >= sets.size()) throw DomainError("perturbation target out of range");
        m |= bit(z);
      }
      fwd.push_back(m);
    }
    return PerturbationMap(std::move(fwd));
  }

  static PerturbationMap identity(std::size_t n) {
    std::vector<Mask> fwd(n);
    for (std::size_t x = 0; x < n; ++x) fwd[x] = bit(x);
    return PerturbationMap(std::move(fwd));
  }

  static PerturbationMap total(std::size_t n) {
    return PerturbationMap(std::vector<Mask>(n, low_bits(n)));
  }

  std::size_t size() const noexcept { return forward_.size(); }
  Mask forward(Instance x) const { return forward_.at(x); }
  Mask preimage(Instance z) const { return preimage_.at(z); }
  bool allows(Instance x, Instance z) const { return has(forward_.at(x), z); }
  bool overlaps(Instance a, Instance b) const { return (forward_.at(a) & forward_.at(b)) != 0; }
  const std::vector<Mask>& forward_sets() const noexcept { return forward_; }

  /// O(|X|^2) check that preimage is the transpose of forward.
  bool transpose_consistent() const {
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t z = 0; z < size(); ++z)
        if (has(forward_[x], z) != has(preimage_[z], x)) return false;
    return true;
  }

  friend bool operator==(const PerturbationMap& a, const PerturbationMap& b) {
    return a.forward_ == b.forward_;
  }

 private:
  std::vector<Mask> forward_;
  std::vector<Mask> preimage_;
};

/// Subset of a hypothesis class as a bit vector over the parent's ordering.
class VersionSpace {
 public:
  constexpr VersionSpace() = default;
  constexpr explicit VersionSpace(Mask members) : members_(members) {}
  static VersionSpace full(const HypothesisClass& hc) { return VersionSpace(hc.all()); }

  constexpr Mask bits() const noexcept { return members_; }
  constexpr bool empty() const noexcept { return members_ == 0; }
  int size() const noexcept { return popcount(members_); }
  constexpr bool contains(std::size_t h) const noexcept { return has(members_, h); }
  constexpr bool subset_of(VersionSpace other) const noexcept {
    return (members_ & ~other.members_) == 0;
  }
  constexpr VersionSpace operator&(VersionSpace o) const noexcept {
    return VersionSpace(members_ & o.members_);
  }
  friend constexpr bool operator==(VersionSpace, VersionSpace) = default;

 private:
  Mask members_ = 0;
};

/// One clean example (x, y).
struct Example {
  Instance x = 0;
  Label y = 0;
  friend bool operator==(const Example&, const Example&) = default;
};

// ---------------------------------------------------------------------------
// free operations

inline void check_domain(const HypothesisClass& hc, const PerturbationMap& u, Instance x, Label y) {
  if (u.size() != hc.instance_count()) throw DomainError("perturbation map and class disagree on |X|");
  if (x >= hc.instance_count()) throw DomainError("instance id " + std::to_string(x) + " out of range");
  if (y >= hc.label_count()) throw DomainError("label id " + std::to_string(y) + " out of range");
}

/// l_U(h, (x, y)) = sup_{z in U(x)} 1[h(z) != y]; 0 when U(x) is empty.
inline int adversarial_loss(const HypothesisClass& hc, std::size_t h, Instance x, Label y,
                            const PerturbationMap& u) {
  check_domain(hc, u, x, y);
  if (h >= hc.size()) throw DomainError("hypothesis id out of range");
  int loss = 0;
  for_each_bit(u.forward(x), [&](std::size_t z) {
    if (hc(h, static_cast<Instance>(z)) != y) loss = 1;
  });
  return loss;
}

/// Ordered pairs (a, b) with U(a) and U(b) intersecting. Symmetric; includes (x, x) iff U(x) != {}.
inline std::vector<std::pair<Instance, Instance>> compatible_pairs(const PerturbationMap& u) {
  std::vector<std::pair<Instance, Instance>> out;
  for (Instance a = 0; a < u.size(); ++a)
    for (Instance b = 0; b < u.size(); ++b)
      if (u.overlaps(a, b)) out.emplace_back(a, b);
  return out;
}

/// A class paired with a perturbation map, with per-(x, y) consistency masks precomputed.
/// consistent(x, y) is the set of hypotheses with zero adversarial loss on (x, y).
class Setting {
 public:
  Setting(HypothesisClass hc, PerturbationMap u) : hc_(std::move(hc)), u_(std::move(u)) {
    if (u_.size() != hc_.instance_count())
      throw DomainError("perturbation map and class disagree on |X|");
    const std::size_t nx = hc_.instance_count();
    const std::size_t ny = hc_.label_count();
    consistent_.assign(nx * ny, 0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        Mask m = 0;
        for (std::size_t h = 0; h < hc_.size(); ++h) {
          bool ok = true;
          for_each_bit(u_.forward(static_cast<Instance>(x)), [&](std::size_t z) {
            if (hc_(h, static_cast<Instance>(z)) != y) ok = false;
          });
          if (ok) m |= bit(h);
        }
        consistent_[x * ny + y] = m;
      }
    pairs_ = rol::compatible_pairs(u_);
  }

  const HypothesisClass& hypotheses() const noexcept { return hc_; }
  const PerturbationMap& perturbations() const noexcept { return u_; }
  std::size_t instance_count() const noexcept { return hc_.instance_count(); }
  std::size_t label_count() const noexcept { return hc_.label_count(); }
  VersionSpace full() const noexcept { return VersionSpace::full(hc_); }

  VersionSpace consistent(Instance x, Label y) const {
    if (x >= instance_count() || y >= label_count()) throw DomainError("example out of range");
    return VersionSpace(consistent_[x * label_count() + y]);
  }

  /// V^U_{x,y}: members of v with zero adversarial loss on (x, y).
  VersionSpace restrict(VersionSpace v, Instance x, Label y) const { return v & consistent(x, y); }

  int loss(std::size_t h, Instance x, Label y) const { return consistent(x, y).contains(h) ? 0 : 1; }

  const std::vector<std::pair<Instance, Instance>>& compatible_pairs() const noexcept { return pairs_; }

  /// Instances x with z in U(x).
  Mask candidates(Instance z) const { return u_.preimage(z); }

  /// Instances with a nonempty perturbation set (the only valid clean inputs in the robust game).
  Mask perturbable() const {
    Mask m = 0;
    for (Instance x = 0; x < instance_count(); ++x)
      if (u_.forward(x) != 0) m |= bit(x);
    return m;
  }

 private:
  HypothesisClass hc_;
  PerturbationMap u_;
  std::vector<Mask> consistent_;
  std::vector<std::pair<Instance, Instance>> pairs_;
};

inline VersionSpace restrict(VersionSpace v, Instance x, Label y, const Setting& s) {
  return s.restrict(v, x, y);
}

/// True iff some hypothesis has zero adversarial loss on every example.
inline bool is_realizable_sequence(std::span<const Example> seq, const Setting& s) {
  VersionSpace v = s.full();
  for (const auto& e : seq) {
    v = s.restrict(v, e.x, e.y);
    if (v.empty()) return false;
  }
  return !v.empty();
}

/// Summed adversarial loss of hypothesis h over the sequence.
inline int total_loss(std::span<const Example> seq, std::size_t h, const Setting& s) {
  int sum = 0;
  for (const auto& e : seq) sum += s.loss(h, e.x, e.y);
  return sum;
}

/// min_h sum_t l_U(h, (x_t, y_t)) by enumeration; also returns the first minimiser.
inline std::pair<int, std::size_t> best_in_class_loss(std::span<const Example> seq, const Setting& s) {
  int best = -1;
  std::size_t arg = 0;
  for (std::size_t h = 0; h < s.hypotheses().size(); ++h) {
    int l = total_loss(seq, h, s);
    if (best < 0 || l < best) {
      best = l;
      arg = h;
    }
  }
  return {best, arg};
}

}  // namespace rol
