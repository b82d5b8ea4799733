// U-adversarial Littlestone dimension (binary and multiclass) by memoised
// exhaustive search over version spaces, witness-tree extraction and the
// shattering check. classic_ldim is a separate implementation of the
// unperturbed Littlestone dimension used as a cross-check.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rol/core.hpp"

namespace rol {

enum class LabelMode { kBinary, kMulticlass };

/// Malformed adversarial tree.
class StructuralError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Payload of one tree node: an instance pair from X^2_U and two distinct labels.
/// Edge b of the node is followed when (x[b], y[b]) is revealed.
struct TreeNode {
  Instance x0 = 0, x1 = 0;
  Label y0 = 0, y1 = 1;

  Instance instance(int side) const { return side == 0 ? x0 : x1; }
  Label label(int side) const { return side == 0 ? y0 : y1; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
  friend auto operator<=>(const TreeNode& a, const TreeNode& b) {
    return std::tie(a.x0, a.x1, a.y0, a.y1) <=> std::tie(b.x0, b.x1, b.y0, b.y1);
  }
};

/// Full binary tree in heap order: root at 0, child along edge b of node i at 2i+1+b.
struct AdversarialTree {
  std::size_t depth = 0;
  std::vector<TreeNode> nodes;

  static std::size_t child(std::size_t i, int edge) { return 2 * i + 1 + static_cast<std::size_t>(edge); }
  static std::size_t node_count(std::size_t depth) { return (std::size_t{1} << depth) - 1; }
  bool full() const { return depth < 63 && nodes.size() == node_count(depth); }
  friend bool operator==(const AdversarialTree&, const AdversarialTree&) = default;
};

/// ldim_u with an explicit cap; `at_least_cap` marks that the true value exceeds `value`.
struct CappedDimension {
  int value = 0;
  bool at_least_cap = false;
};

/// Folds restrict over the path; true iff the result is nonempty.
inline bool path_realizable(std::span<const Example> path, VersionSpace v, const Setting& s) {
  for (const auto& e : path) {
    v = s.restrict(v, e.x, e.y);
    if (v.empty()) return false;
  }
  return !v.empty();
}

namespace detail {

inline void validate_tree(const AdversarialTree& t, const Setting& s, LabelMode mode) {
  if (!t.full())
    throw StructuralError("tree of depth " + std::to_string(t.depth) + " has " +
                          std::to_string(t.nodes.size()) + " nodes, expected " +
                          std::to_string(AdversarialTree::node_count(t.depth)));
  for (const auto& n : t.nodes) {
    if (n.x0 >= s.instance_count() || n.x1 >= s.instance_count())
      throw StructuralError("tree node instance out of range");
    if (!s.perturbations().overlaps(n.x0, n.x1))
      throw StructuralError("tree node pair has disjoint perturbation sets");
    if (n.y0 >= s.label_count() || n.y1 >= s.label_count() || n.y0 == n.y1)
      throw StructuralError("tree node labels must be distinct and in range");
    if (mode == LabelMode::kBinary && (n.y0 != 0 || n.y1 != 1))
      throw StructuralError("binary tree nodes carry labels (0, 1)");
  }
}

inline bool shattered_below(const AdversarialTree& t, std::size_t i, VersionSpace v, const Setting& s) {
  const TreeNode& n = t.nodes[i];
  for (int b = 0; b < 2; ++b) {
    VersionSpace w = s.restrict(v, n.instance(b), n.label(b));
    if (w.empty()) return false;
    std::size_t c = AdversarialTree::child(i, b);
    if (c < t.nodes.size() && !shattered_below(t, c, w, s)) return false;
  }
  return true;
}

inline int floor_log2(int n) { return n <= 1 ? 0 : std::bit_width(static_cast<unsigned>(n)) - 1; }

}  // namespace detail

/// True iff every edge of t leaves a nonempty version space when restrict is
/// folded from the root. Throws StructuralError for non-full or invalid trees.
inline bool is_shattered(const AdversarialTree& t, VersionSpace v, const Setting& s,
                         LabelMode mode = LabelMode::kBinary) {
  detail::validate_tree(t, s, mode);
  if (v.empty()) return false;
  if (t.depth == 0) return true;
  return detail::shattered_below(t, 0, v, s);
}

inline bool is_shattered(const AdversarialTree& t, const Setting& s, LabelMode mode = LabelMode::kBinary) {
  return is_shattered(t, s.full(), s, mode);
}

/// Memoised search for ldim_u over subsets of one Setting's class.
///
/// ldim(V) = max over viable nodes of 1 + min(ldim(V^0), ldim(V^1)), where a
/// node is viable when both edge restrictions are nonempty; ldim(V) = 0 for a
/// nonempty V with no viable node and -1 for the empty set. The two edge
/// restrictions are disjoint (they disagree on a shared perturbation), so
/// ldim(V) <= floor(log2 |V|); the search uses this bound to cut branches.
///
/// Not thread-safe: one solver per thread.
class DimensionSolver {
 public:
  static constexpr int kEmpty = -1;

  DimensionSolver(const Setting& s, LabelMode mode) : setting_(&s), mode_(mode) {
    if (mode == LabelMode::kBinary && s.label_count() != 2)
      throw DomainError("binary dimension needs exactly two labels");
    for (const auto& [a, b] : s.compatible_pairs()) {
      if (mode == LabelMode::kBinary) {
        add_candidate({a, b, 0, 1});
      } else {
        for (Label y0 = 0; y0 < s.label_count(); ++y0)
          for (Label y1 = 0; y1 < s.label_count(); ++y1)
            if (y0 != y1) add_candidate({a, b, y0, y1});
      }
    }
  }

  const Setting& setting() const noexcept { return *setting_; }
  LabelMode mode() const noexcept { return mode_; }
  std::size_t memo_size() const noexcept { return memo_.size(); }
  std::span<const TreeNode> candidate_nodes() const noexcept { return nodes_; }

  int ldim(VersionSpace v) {
    if (v.empty()) return kEmpty;
    if (auto it = memo_.find(v.bits()); it != memo_.end()) return it->second;
    const int ceiling = detail::floor_log2(v.size());
    int best = 0;
    for (const auto& c : cands_) {
      if (best >= ceiling) break;
      const VersionSpace a = v & c.m0;
      const VersionSpace b = v & c.m1;
      if (a.empty() || b.empty()) continue;
      if (1 + detail::floor_log2(std::min(a.size(), b.size())) <= best) continue;
      const int da = ldim(a);
      if (da + 1 <= best) continue;
      const int value = 1 + std::min(da, ldim(b));
      best = std::max(best, value);
    }
    memo_.emplace(v.bits(), best);
    return best;
  }

  int ldim() { return ldim(setting_->full()); }

  /// Reports min(ldim, cap), flagging when the true value is larger.
  CappedDimension ldim_capped(VersionSpace v, int cap) {
    if (cap < 0) throw DomainError("depth cap must be non-negative");
    const int d = ldim(v);
    if (d > cap) return {cap, true};
    return {d, false};
  }

  /// A shattered tree of depth exactly `depth` (<= ldim(v)). Each node is the
  /// first candidate in (pair, labels) order whose two subtrees both reach depth-1.
  AdversarialTree witness(VersionSpace v, std::size_t depth) {
    if (static_cast<int>(depth) > ldim(v)) throw DomainError("requested witness deeper than ldim");
    AdversarialTree t;
    t.depth = depth;
    t.nodes.resize(AdversarialTree::node_count(depth));
    if (depth > 0) build(t, 0, v, static_cast<int>(depth));
    return t;
  }

  AdversarialTree witness(VersionSpace v) {
    const int d = ldim(v);
    return witness(v, d < 0 ? 0 : static_cast<std::size_t>(d));
  }
  AdversarialTree witness() { return witness(setting_->full()); }

 private:
  struct Candidate {
    TreeNode node;
    VersionSpace m0, m1;
  };

  void add_candidate(TreeNode n) {
    nodes_.push_back(n);
    cands_.push_back({n, setting_->consistent(n.x0, n.y0), setting_->consistent(n.x1, n.y1)});
  }

  void build(AdversarialTree& t, std::size_t i, VersionSpace v, int depth) {
    for (const auto& c : cands_) {
      const VersionSpace a = v & c.m0;
      const VersionSpace b = v & c.m1;
      if (a.empty() || b.empty()) continue;
      if (ldim(a) < depth - 1 || ldim(b) < depth - 1) continue;
      t.nodes[i] = c.node;
      if (depth > 1) {
        build(t, AdversarialTree::child(i, 0), a, depth - 1);
        build(t, AdversarialTree::child(i, 1), b, depth - 1);
      }
      return;
    }
    throw InvariantViolation("no witness node found for a class of sufficient dimension");
  }

  const Setting* setting_;
  LabelMode mode_;
  std::vector<TreeNode> nodes_;
  std::vector<Candidate> cands_;
  std::unordered_map<Mask, int> memo_;
};

/// ldim_u(hc, u) with the default cap |H|.
inline CappedDimension ldim_u(const Setting& s, LabelMode mode, std::optional<int> depth_cap = std::nullopt) {
  DimensionSolver solver(s, mode);
  return solver.ldim_capped(s.full(), depth_cap.value_or(static_cast<int>(s.hypotheses().size())));
}

/// Classic Littlestone dimension from the hypothesis tables alone: nodes are
/// single instances and edges split on h(x). Written independently of
/// Setting/DimensionSolver so it can serve as an oracle for the identity map.
inline int classic_ldim(const HypothesisClass& hc) {
  if (hc.label_count() != 2) throw DomainError("classic_ldim needs binary labels");
  std::map<std::vector<std::size_t>, int> memo;
  auto rec = [&](auto&& self, const std::vector<std::size_t>& members) -> int {
    if (members.size() <= 1) return 0;
    if (auto it = memo.find(members); it != memo.end()) return it->second;
    int best = 0;
    for (Instance x = 0; x < hc.instance_count(); ++x) {
      std::vector<std::size_t> zero, one;
      for (auto h : members) (hc(h, x) == 0 ? zero : one).push_back(h);
      if (zero.empty() || one.empty()) continue;
      best = std::max(best, 1 + std::min(self(self, zero), self(self, one)));
    }
    memo.emplace(members, best);
    return best;
  };
  std::vector<std::size_t> all(hc.size());
  for (std::size_t h = 0; h < hc.size(); ++h) all[h] = h;
  return rec(rec, all);
}

}  // namespace rol
