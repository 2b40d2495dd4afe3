#pragma once

// Good truncations and a bounded back-and-forth matcher.
//
// A truncation is a finite core of the generated tree whose complement splits
// into continuation subtrees, one per boundary leaf. It is good when every
// continuation holds, for each colour, either no vertex of that colour or
// infinitely many. The matcher pairs the boundary leaves of truncations of
// two presentations by colour flags, stage by stage, and lets a flagged pair
// absorb interior surpluses of the flagged colour.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "m3s/analysis.hpp"
#include "m3s/decide.hpp"
#include "m3s/endspace.hpp"
#include "m3s/error.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

struct BoundaryLeaf {
  std::size_t node;   // core node standing for the continuation subtree
  std::size_t state;  // automaton state generating that subtree
  ColourSet flags;    // colours occurring infinitely often in it

  friend bool operator==(const BoundaryLeaf&, const BoundaryLeaf&) = default;
};

struct Truncation {
  FiniteTree core;
  std::vector<BoundaryLeaf> boundary;
  std::size_t requested_depth = 0;
  std::size_t depth = 0;  // deepest boundary leaf (or deepest node when closed)
  bool closed = false;    // the generated tree is finite; core is all of it

  bool is_boundary(std::size_t node) const {
    return std::any_of(boundary.begin(), boundary.end(), [&](const BoundaryLeaf& b) { return b.node == node; });
  }

  /// Colour counts over core nodes that are not boundary leaves.
  std::map<Colour, std::uint64_t> interior_counts(std::size_t palette_size) const {
    std::map<Colour, std::uint64_t> out;
    for (Colour k = 1; k < palette_size; ++k) out[k] = 0;
    std::vector<bool> leaf(core.size(), false);
    for (const auto& b : boundary) leaf[b.node] = true;
    for (std::size_t i = 0; i < core.size(); ++i)
      if (!leaf[i] && core.nodes[i].colour != kSphereColour) ++out[core.nodes[i].colour];
    return out;
  }

  std::multiset<ColourSet> boundary_flags() const {
    std::multiset<ColourSet> out;
    for (const auto& b : boundary) out.insert(b.flags);
    return out;
  }
};

namespace detail {

/// Per-automaton data used while growing truncations.
class Exhauster {
 public:
  explicit Exhauster(const TreeAutomaton& p) : p_(&p), analysis_(p) {
    const std::size_t n = p.size();
    std::vector<std::vector<bool>> inf;
    for (Colour k = 1; k < p.palette().size(); ++k) inf.push_back(analysis_.inf_flags(k));
    flags_.resize(n);
    good_.assign(n, true);
    for (std::size_t s = 0; s < n; ++s) {
      for (Colour k = 1; k < p.palette().size(); ++k)
        if (inf[k - 1][s]) flags_[s].insert(k);
      const auto occ = analysis_.occurrences_from(s);
      for (Colour k = 1; k < p.palette().size(); ++k) {
        Count c;
        for (std::size_t t = 0; t < n; ++t)
          if (p.state(t).colour == k) c += occ[t];
        if (c.is_finite() && !c.is_zero()) good_[s] = false;
      }
    }

    // Live-child structure: a ray state has a single end below it.
    live_children_.resize(n);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t c : p.state(s).children)
        if (analysis_.is_live(c)) live_children_[s].push_back(c);
    ray_.assign(n, false);
    reach_flags_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (!analysis_.is_live(s)) continue;
      const auto below = reachable(live_children_, {s});
      bool ray = true;
      for (std::size_t t = 0; t < n; ++t) {
        if (!below[t]) continue;
        if (live_children_[t].size() != 1) ray = false;
        reach_flags_[s].insert(flags_[t]);
      }
      ray_[s] = ray;
    }
  }

  const TreeAutomaton& automaton() const noexcept { return *p_; }
  const Analysis& analysis() const noexcept { return analysis_; }
  const ColourSet& flags(std::size_t s) const { return flags_.at(s); }
  bool is_good(std::size_t s) const { return good_.at(s); }
  bool is_ray(std::size_t s) const { return ray_.at(s); }
  bool can_reach_flags(std::size_t s, const ColourSet& f) const { return reach_flags_.at(s).count(f) > 0; }
  bool splittable(std::size_t s) const { return analysis_.is_live(s) && !live_children_[s].empty(); }

  /// Grows the core below `node`: finite subtrees are taken whole, live
  /// nodes at depth >= min_depth that are good become boundary leaves.
  void grow(Truncation& t, std::size_t node, std::size_t min_depth) const {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      const std::size_t s = *t.core.nodes[v].state;
      if (analysis_.is_live(s) && t.core.nodes[v].depth >= min_depth && good_[s]) {
        t.boundary.push_back({v, s, flags_[s]});
        t.depth = std::max(t.depth, t.core.nodes[v].depth);
        continue;
      }
      const auto& children = p_->state(s).children;
      std::vector<std::size_t> added;
      for (std::size_t c : children) added.push_back(t.core.add_node(p_->state(c).colour, c, v));
      for (auto it = added.rbegin(); it != added.rend(); ++it) stack.push_back(*it);
      if (t.closed) t.depth = std::max(t.depth, t.core.nodes[v].depth);
    }
  }

  Truncation truncate(std::size_t depth) const {
    Truncation t;
    t.requested_depth = depth;
    t.closed = !analysis_.is_live(p_->root());
    t.core.add_node(p_->state(p_->root()).colour, p_->root(), std::nullopt);
    grow(t, 0, depth);
    std::sort(t.boundary.begin(), t.boundary.end(),
              [](const BoundaryLeaf& a, const BoundaryLeaf& b) { return a.node < b.node; });
    return t;
  }

  /// Replaces boundary leaf `index` by the good leaves below it.
  void split(Truncation& t, std::size_t index) const {
    const BoundaryLeaf leaf = t.boundary.at(index);
    t.boundary.erase(t.boundary.begin() + std::ptrdiff_t(index));
    for (std::size_t c : p_->state(leaf.state).children) {
      const std::size_t child = t.core.add_node(p_->state(c).colour, c, leaf.node);
      grow(t, child, 0);
    }
    std::sort(t.boundary.begin(), t.boundary.end(),
              [](const BoundaryLeaf& a, const BoundaryLeaf& b) { return a.node < b.node; });
  }

 private:
  const TreeAutomaton* p_;
  Analysis analysis_;
  std::vector<ColourSet> flags_;
  std::vector<bool> good_;
  Adjacency live_children_;
  std::vector<bool> ray_;
  std::vector<std::set<ColourSet>> reach_flags_;
};

}  // namespace detail

/// The least good truncation at depth >= `depth`. Boundary leaves that are
/// not yet good are deepened individually; on any root path a cyclic state
/// (always good) appears within |states| steps, which bounds the overshoot.
/// For a finite generated tree the whole tree is returned with `closed` set.
inline Truncation truncate(const TreeAutomaton& p, std::size_t depth) {
  return detail::Exhauster(p).truncate(depth);
}

/// Machine check of the goodness condition for every boundary leaf.
inline bool is_good_truncation(const TreeAutomaton& p, const Truncation& t) {
  const Analysis a(p);
  for (const auto& leaf : t.boundary) {
    if (!a.is_live(leaf.state)) return false;
    for (Colour k = 1; k < p.palette().size(); ++k) {
      const Count c = a.subtree_colour_count(leaf.state, k);
      if (c.is_finite() && !c.is_zero()) return false;
    }
  }
  return true;
}

struct LeafPair {
  std::size_t left;   // index into the left truncation's boundary
  std::size_t right;  // index into the right truncation's boundary
  ColourSet flags;

  friend bool operator==(const LeafPair&, const LeafPair&) = default;
};

/// An interior surplus of `amount` vertices of `colour` on `surplus_side`
/// (1 or 2), charged to the continuation pair `pair`, which carries the flag.
struct Absorption {
  Colour colour;
  std::uint64_t amount;
  int surplus_side;
  std::size_t pair;
};

struct MatchingStage {
  std::size_t stage = 0;
  int leading_side = 1;
  Truncation left;
  Truncation right;
  std::vector<LeafPair> pairs;
  std::vector<Absorption> absorptions;
};

struct PartialMatching {
  std::vector<MatchingStage> stages;
};

enum class ObstructionKind { InvariantMismatch, DepthExhausted };

inline const char* to_string(ObstructionKind k) {
  return k == ObstructionKind::InvariantMismatch ? "InvariantMismatch" : "DepthExhausted";
}

struct Obstruction {
  ObstructionKind kind;
  std::size_t stage;
  std::string detail;
  std::optional<Witness> witness;  // set for InvariantMismatch
};

using MatchResult = std::variant<PartialMatching, Obstruction>;

namespace detail {

inline constexpr std::size_t kMaxBoundary = 512;

inline std::map<ColourSet, std::size_t> tally(const Truncation& t) {
  std::map<ColourSet, std::size_t> out;
  for (const auto& b : t.boundary) ++out[b.flags];
  return out;
}

/// Splits boundary leaves until both sides carry the same multiset of flag
/// vectors. Returns false if no split can make progress.
inline bool balance(Truncation& left, Truncation& right, const Exhauster& lx, const Exhauster& rx, int leading) {
  struct Side {
    Truncation* t;
    const Exhauster* x;
  };
  Side sides[2] = {{&left, &lx}, {&right, &rx}};
  const int follower = leading == 1 ? 1 : 0;  // index into sides
  const int leader = 1 - follower;

  while (left.boundary_flags() != right.boundary_flags()) {
    // a split never empties a boundary
    if (left.boundary.empty() || right.boundary.empty()) return false;
    if (left.boundary.size() > kMaxBoundary || right.boundary.size() > kMaxBoundary) return false;
    const auto tl = tally(left);
    const auto tr = tally(right);
    std::set<ColourSet> keys;
    for (const auto& [f, c] : tl) keys.insert(f);
    for (const auto& [f, c] : tr) keys.insert(f);

    std::optional<std::pair<int, std::size_t>> pick;
    auto find_on = [&](int side, const ColourSet& f, bool deficient) -> std::optional<std::size_t> {
      const auto& t = *sides[side].t;
      const auto& x = *sides[side].x;
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < t.boundary.size(); ++i) {
        const auto& leaf = t.boundary[i];
        if (!x.splittable(leaf.state)) continue;
        const bool ok = !x.is_ray(leaf.state) &&
                        (deficient ? x.can_reach_flags(leaf.state, f) : leaf.flags == f);
        if (!ok) continue;
        if (!best || t.core.nodes[leaf.node].depth < t.core.nodes[t.boundary[*best].node].depth) best = i;
      }
      return best;
    };

    for (int pass = 0; pass < 2 && !pick; ++pass) {
      const bool deficient = pass == 0;
      for (int side : {follower, leader}) {
        for (const auto& f : keys) {
          const std::size_t mine = (side == 0 ? tl : tr).count(f) ? (side == 0 ? tl : tr).at(f) : 0;
          const std::size_t theirs = (side == 0 ? tr : tl).count(f) ? (side == 0 ? tr : tl).at(f) : 0;
          if (deficient ? mine >= theirs : mine <= theirs) continue;
          if (auto i = find_on(side, f, deficient)) {
            pick = {side, *i};
            break;
          }
        }
        if (pick) break;
      }
    }
    if (!pick) return false;
    sides[pick->first].x->split(*sides[pick->first].t, pick->second);
  }
  return true;
}

}  // namespace detail

/// Alternately grows truncations of p1 and p2 (stage 0 led by p1, then the
/// lead swaps) up to stage `depth`, pairing boundary leaves by flags at
/// every stage. A failure becomes InvariantMismatch only when the
/// presentations are provably non-isomorphic; otherwise DepthExhausted.
inline MatchResult back_and_forth(const TreeAutomaton& p1, const TreeAutomaton& p2, std::size_t depth) {
  if (p1.palette() != p2.palette()) throw Error(Errc::PaletteMismatch, "presentations use different palettes");
  const detail::Exhauster x1(p1), x2(p2);
  const std::size_t palette_size = p1.palette().size();
  PartialMatching matching;

  auto fail = [&](std::size_t stage, const Truncation& l, const Truncation& r, const std::string& why) -> MatchResult {
    std::string detail = "stage " + std::to_string(stage) + ": " + why + "; boundary flag-vector multisets " +
                         format_signatures(l.boundary_flags()) + " vs " + format_signatures(r.boundary_flags());
    const auto verdict = isomorphic(p1, p2);
    if (verdict.verdict == Verdict::No)
      return Obstruction{ObstructionKind::InvariantMismatch, stage, detail + "; " + verdict.witness->to_string(),
                         verdict.witness};
    return Obstruction{ObstructionKind::DepthExhausted, stage, detail, std::nullopt};
  };

  for (std::size_t stage = 0; stage <= depth; ++stage) {
    MatchingStage st;
    st.stage = stage;
    st.leading_side = stage % 2 == 0 ? 1 : 2;
    st.left = x1.truncate(stage);
    st.right = x2.truncate(stage);
    if (!detail::balance(st.left, st.right, x1, x2, st.leading_side))
      return fail(stage, st.left, st.right, "boundary leaves cannot be matched by flags");

    std::map<ColourSet, std::vector<std::size_t>> right_by_flags;
    for (std::size_t j = 0; j < st.right.boundary.size(); ++j)
      right_by_flags[st.right.boundary[j].flags].push_back(j);
    std::map<ColourSet, std::size_t> used;
    for (std::size_t i = 0; i < st.left.boundary.size(); ++i) {
      const auto& f = st.left.boundary[i].flags;
      st.pairs.push_back({i, right_by_flags[f][used[f]++], f});
    }

    const auto c1 = st.left.interior_counts(palette_size);
    const auto c2 = st.right.interior_counts(palette_size);
    for (Colour k = 1; k < palette_size; ++k) {
      if (c1.at(k) == c2.at(k)) continue;
      const int side = c1.at(k) > c2.at(k) ? 1 : 2;
      const std::uint64_t amount = side == 1 ? c1.at(k) - c2.at(k) : c2.at(k) - c1.at(k);
      auto it = std::find_if(st.pairs.begin(), st.pairs.end(), [&](const LeafPair& lp) { return lp.flags.count(k); });
      if (it == st.pairs.end())
        return fail(stage, st.left, st.right,
                    "interior surplus of colour " + std::to_string(k) + " has no flagged continuation to absorb it");
      st.absorptions.push_back({k, amount, side, std::size_t(it - st.pairs.begin())});
    }
    matching.stages.push_back(std::move(st));
  }
  return matching;
}

}  // namespace m3s
