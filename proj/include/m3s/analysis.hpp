#pragma once

// Occurrence and prime-count analysis on presentations.
//
// The reachability graph of an automaton has an edge s -> t whenever t occurs
// in the child multiset of s. A state lying on a cycle of that graph occurs
// infinitely often in the generated tree, and so does everything it reaches.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "m3s/count.hpp"
#include "m3s/error.hpp"
#include "m3s/graph_util.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

/// Finite(c) is Count::nat(c), Infinite is Count::infinity().
using OccurrenceClass = Count;

/// Per-automaton analysis context: SCCs, cyclic states, liveness and the
/// Inf_k flags. Immutable after construction.
class Analysis {
 public:
  explicit Analysis(const TreeAutomaton& p) : p_(&p) {
    const std::size_t n = p.size();
    successors_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c : p.state(s).children) {
        auto& succ = successors_[s];
        auto it = std::find_if(succ.begin(), succ.end(), [&](const Edge& e) { return e.target == c; });
        if (it == succ.end())
          succ.push_back({c, 1});
        else
          ++it->multiplicity;
      }
    }
    detail::Adjacency adj(n);
    for (std::size_t s = 0; s < n; ++s)
      for (const auto& e : successors_[s]) adj[s].push_back(e.target);
    scc_ = detail::strongly_connected_components(adj).component;
    cyclic_ = detail::cyclic_mask(adj);
    live_.assign(n, false);
    for (std::size_t s = 0; s < n; ++s) live_[s] = !p.is_finite_state(s);
  }

  struct Edge {
    std::size_t target;
    std::uint64_t multiplicity;
  };

  const TreeAutomaton& automaton() const noexcept { return *p_; }
  const std::vector<Edge>& successors(std::size_t s) const { return successors_.at(s); }
  bool is_cyclic(std::size_t s) const { return cyclic_.at(s); }
  bool is_live(std::size_t s) const { return live_.at(s); }
  std::size_t scc(std::size_t s) const { return scc_.at(s); }

  /// States reachable from `origin`, including itself.
  std::vector<bool> reachable_from(std::size_t origin) const {
    std::vector<bool> seen(p_->size(), false);
    std::vector<std::size_t> stack{origin};
    seen[origin] = true;
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (const auto& e : successors_[s])
        if (!seen[e.target]) {
          seen[e.target] = true;
          stack.push_back(e.target);
        }
    }
    return seen;
  }

  /// For every state t, the number of nodes carrying t in the subtree
  /// generated from `origin`.
  std::vector<Count> occurrences_from(std::size_t origin) const {
    const std::size_t n = p_->size();
    const auto reach = reachable_from(origin);
    std::vector<bool> infinite(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s)
      if (reach[s] && cyclic_[s]) {
        infinite[s] = true;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (const auto& e : successors_[s])
        if (!infinite[e.target]) {
          infinite[e.target] = true;
          stack.push_back(e.target);
        }
    }

    // The finitely occurring states form a DAG closed under predecessors
    // (within the reachable part), so a memoized sum over parents terminates.
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> parents(n);
    for (std::size_t s = 0; s < n; ++s)
      if (reach[s])
        for (const auto& e : successors_[s]) parents[e.target].push_back({s, e.multiplicity});

    std::vector<Count> result(n, Count::nat(0));
    std::vector<bool> done(n, false);
    std::function<Count(std::size_t)> visit = [&](std::size_t t) -> Count {
      if (done[t]) return result[t];
      Count total = Count::nat(t == origin ? 1 : 0);
      for (auto [parent, mult] : parents[t]) total += visit(parent) * mult;
      done[t] = true;
      return result[t] = total;
    };
    for (std::size_t t = 0; t < n; ++t) {
      if (!reach[t]) continue;
      result[t] = infinite[t] ? Count::infinity() : visit(t);
      done[t] = true;
    }
    return result;
  }

  /// Number of colour-k nodes in the subtree generated from `origin`.
  Count subtree_colour_count(std::size_t origin, Colour k) const {
    const auto occ = occurrences_from(origin);
    Count total;
    for (std::size_t t = 0; t < p_->size(); ++t)
      if (p_->state(t).colour == k) total += occ[t];
    return total;
  }

  /// Inf_k: the subtree at s holds infinitely many colour-k nodes, i.e. s
  /// reaches a cyclic state that reaches a colour-k state.
  std::vector<bool> inf_flags(Colour k) const {
    const std::size_t n = p_->size();
    std::vector<bool> coloured_below(n, false);  // reaches a colour-k state
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (coloured_below[s]) continue;
        bool hit = p_->state(s).colour == k;
        for (const auto& e : successors_[s]) hit = hit || coloured_below[e.target];
        if (hit) {
          coloured_below[s] = true;
          changed = true;
        }
      }
    }
    std::vector<bool> flags(n, false);
    for (std::size_t s = 0; s < n; ++s) flags[s] = cyclic_[s] && coloured_below[s];
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (flags[s]) continue;
        for (const auto& e : successors_[s])
          if (flags[e.target]) {
            flags[s] = true;
            changed = true;
            break;
          }
      }
    }
    return flags;
  }

 private:
  const TreeAutomaton* p_;
  std::vector<std::vector<Edge>> successors_;
  std::vector<std::size_t> scc_;
  std::vector<bool> cyclic_;
  std::vector<bool> live_;
};

inline OccurrenceClass occurrence_class(const TreeAutomaton& p, const std::string& state) {
  const std::size_t s = p.index_of(state);
  return Analysis(p).occurrences_from(p.root())[s];
}

inline std::size_t betti(const FiniteGraph& g) { return g.edge_count() + 1 - g.vertex_count(); }

namespace detail {
inline void check_counted_colour(const Palette& palette, Colour k) {
  if (k == kSphereColour) throw Error(Errc::ReservedColour, "colour 0 (S3) carries no count", {"0"});
  if (!palette.contains(k))
    throw Error(Errc::BadColourIndex, "colour " + std::to_string(k) + " is outside the palette",
                {std::to_string(k)});
}
}  // namespace detail

/// n_k of a closed presentation. For k = 1 the cycle rank of the graph is
/// added: every independent cycle contributes one S2xS1 summand.
inline Count colour_count(const FiniteGraph& g, Colour k) {
  detail::check_counted_colour(g.palette(), k);
  std::uint64_t n = 0;
  for (const auto& v : g.vertices()) n += v.colour == k;
  if (k == kHandleColour) n += betti(g);
  return Count::nat(n);
}

inline Count colour_count(const TreeAutomaton& p, Colour k) {
  detail::check_counted_colour(p.palette(), k);
  return Analysis(p).subtree_colour_count(p.root(), k);
}

inline std::set<std::string> inf_states(const TreeAutomaton& p, Colour k) {
  detail::check_counted_colour(p.palette(), k);
  const auto flags = Analysis(p).inf_flags(k);
  std::set<std::string> out;
  for (std::size_t s = 0; s < p.size(); ++s)
    if (flags[s]) out.insert(p.state(s).id);
  return out;
}

}  // namespace m3s
