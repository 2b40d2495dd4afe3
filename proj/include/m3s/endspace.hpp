#pragma once

// The coloured end space of a regular presentation.
//
// Ends of the manifold are ends of the presenting tree, and ends of a tree
// generated by an automaton are the infinite root paths of the automaton
// once states generating finite subtrees are pruned. Each surviving state
// carries the set of colours k whose subtree holds infinitely many colour-k
// vertices; an end has colour k iff every state along it carries k.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "m3s/analysis.hpp"
#include "m3s/count.hpp"
#include "m3s/error.hpp"
#include "m3s/graph_util.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

/// Set of palette indices k >= 1.
using ColourSet = std::set<Colour>;
/// The colours carried by one end.
using EndSignature = ColourSet;

inline std::string format_colour_set(const ColourSet& s) {
  if (s.empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (Colour c : s) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(c);
  }
  return out + "}";
}

inline std::string format_signatures(const std::multiset<EndSignature>& sigs) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : sigs) {
    if (!first) out += ", ";
    first = false;
    out += format_colour_set(s);
  }
  return out + "}";
}

struct EndState {
  std::string id;
  ColourSet flags;
  std::vector<std::size_t> children;  // pruned child multiset

  friend bool operator==(const EndState&, const EndState&) = default;
};

/// Pruned automaton whose infinite root paths are the ends. Empty iff the
/// presented manifold is closed.
struct EndSpaceAutomaton {
  std::vector<EndState> states;
  std::optional<std::size_t> root;

  bool empty() const noexcept { return !root.has_value(); }
  std::size_t size() const noexcept { return states.size(); }

  detail::Adjacency adjacency() const {
    detail::Adjacency adj(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) adj[s] = states[s].children;
    return adj;
  }

  friend bool operator==(const EndSpaceAutomaton&, const EndSpaceAutomaton&) = default;
};

inline EndSpaceAutomaton end_space(const TreeAutomaton& p) {
  const Analysis analysis(p);
  EndSpaceAutomaton e;
  if (!analysis.is_live(p.root())) return e;

  std::vector<std::vector<bool>> flags;
  for (Colour k = 1; k < p.palette().size(); ++k) flags.push_back(analysis.inf_flags(k));

  std::vector<std::size_t> renumber(p.size(), std::size_t(-1));
  for (std::size_t s = 0; s < p.size(); ++s)
    if (analysis.is_live(s)) {
      renumber[s] = e.states.size();
      EndState state{p.state(s).id, {}, {}};
      for (Colour k = 1; k < p.palette().size(); ++k)
        if (flags[k - 1][s]) state.flags.insert(k);
      e.states.push_back(std::move(state));
    }
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (!analysis.is_live(s)) continue;
    for (std::size_t c : p.state(s).children)
      if (analysis.is_live(c)) e.states[renumber[s]].children.push_back(renumber[c]);
  }
  e.root = renumber[p.root()];
  return e;
}

namespace detail {

/// States of `e` occurring infinitely often along root paths.
inline std::vector<bool> infinitely_occurring(const EndSpaceAutomaton& e) {
  const auto adj = e.adjacency();
  const auto cyclic = cyclic_mask(adj);
  const auto from_root = reachable(adj, {*e.root});
  std::vector<std::size_t> seeds;
  for (std::size_t s = 0; s < e.size(); ++s)
    if (cyclic[s] && from_root[s]) seeds.push_back(s);
  return reachable(adj, seeds);
}

}  // namespace detail

/// Number of ends. Infinite iff a branching state recurs infinitely often.
inline Count end_count(const EndSpaceAutomaton& e) {
  if (e.empty()) return Count::nat(0);
  const auto recurring = detail::infinitely_occurring(e);
  for (std::size_t s = 0; s < e.size(); ++s)
    if (recurring[s] && e.states[s].children.size() >= 2) return Count::infinity();

  // Every cyclic state now has a single child, so entering a cycle commits
  // to exactly one end.
  const auto cyclic = detail::cyclic_mask(e.adjacency());
  std::vector<std::optional<Count>> memo(e.size());
  auto ends = [&](auto&& self, std::size_t s) -> Count {
    if (cyclic[s]) return Count::nat(1);
    if (memo[s]) return *memo[s];
    Count total;
    for (std::size_t c : e.states[s].children) total += self(self, c);
    return *(memo[s] = total);
  };
  return ends(ends, *e.root);
}

/// An eventually periodic root path: prefix, then cycle repeated forever.
struct Branch {
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;

  friend bool operator==(const Branch&, const Branch&) = default;
};

inline std::string format_branch(const Branch& b, const EndSpaceAutomaton& e) {
  std::string out;
  for (std::size_t s : b.prefix) out += e.states[s].id + "·";
  if (b.cycle.size() == 1) return out + e.states[b.cycle[0]].id + "^ω";
  out += "(";
  for (std::size_t i = 0; i < b.cycle.size(); ++i) out += (i ? "·" : "") + e.states[b.cycle[i]].id;
  return out + ")^ω";
}

/// Intersection of the flags along the cycle of `b`.
inline EndSignature branch_signature(const Branch& b, const EndSpaceAutomaton& e) {
  EndSignature sig = e.states.at(b.cycle.front()).flags;
  for (std::size_t s : b.cycle) {
    EndSignature next;
    std::set_intersection(sig.begin(), sig.end(), e.states[s].flags.begin(), e.states[s].flags.end(),
                          std::inserter(next, next.end()));
    sig = std::move(next);
  }
  return sig;
}

/// One branch per end (child multiplicities give repeated entries).
inline std::vector<std::pair<Branch, EndSignature>> enumerate_ends(const EndSpaceAutomaton& e) {
  const Count n = end_count(e);
  if (n.is_infinite()) throw Error(Errc::InfinitelyManyEnds, "end space is infinite");
  std::vector<std::pair<Branch, EndSignature>> out;
  if (e.empty()) return out;

  const auto cyclic = detail::cyclic_mask(e.adjacency());
  std::vector<std::size_t> path;
  auto walk = [&](auto&& self, std::size_t s) -> void {
    if (cyclic[s]) {
      Branch b{path, {}};
      std::size_t t = s;
      do {
        b.cycle.push_back(t);
        t = e.states[t].children.front();
      } while (t != s);
      EndSignature sig = branch_signature(b, e);
      out.emplace_back(std::move(b), std::move(sig));
      return;
    }
    path.push_back(s);
    for (std::size_t c : e.states[s].children) self(self, c);
    path.pop_back();
  };
  walk(walk, *e.root);
  return out;
}

/// Topological data of one signature stratum X_σ = {ends with signature σ}.
/// Only occupied strata appear in an InvariantTable.
struct StratumInfo {
  bool isolated = false;  // some end of signature σ is an isolated point
  bool perfect = false;   // the perfect kernel meets X_σ
  std::size_t cb_rank = 0;  // least r with X^(r) ∩ X_σ inside the perfect kernel

  friend bool operator==(const StratumInfo&, const StratumInfo&) = default;
};

using InvariantTable = std::map<EndSignature, StratumInfo>;

inline std::string format_table(const InvariantTable& table) {
  std::string out = "{";
  bool first = true;
  for (const auto& [sig, info] : table) {
    if (!first) out += "; ";
    first = false;
    out += format_colour_set(sig) + ":";
    if (info.perfect) out += " perfect";
    if (info.isolated) out += " isolated";
    if (info.cb_rank > 0) out += " rank " + std::to_string(info.cb_rank);
  }
  return out + "}";
}

/// Cantor–Bendixson analysis of the coloured branch space. Round r removes
/// the states through which exactly one end of X^(r) passes (the isolated
/// points of X^(r)); each round deletes at least one state, so the process
/// reaches the perfect kernel (possibly empty) after at most |states| rounds.
inline InvariantTable topo_invariants(const EndSpaceAutomaton& e) {
  InvariantTable table;
  if (e.empty()) return table;
  const std::size_t n = e.size();
  std::vector<bool> active(n, true);

  for (std::size_t round = 0;; ++round) {
    detail::Adjacency adj(n);
    for (std::size_t s = 0; s < n; ++s)
      if (active[s])
        for (std::size_t c : e.states[s].children)
          if (active[c]) adj[s].push_back(c);
    const auto live = detail::reaches_cycle(adj);
    for (std::size_t s = 0; s < n; ++s)
      if (!live[s]) adj[s].clear();
    for (std::size_t s = 0; s < n; ++s)
      std::erase_if(adj[s], [&](std::size_t c) { return !live[c]; });
    if (!active[*e.root] || !live[*e.root]) break;
    const auto reach = detail::reachable(adj, {*e.root});
    for (std::size_t s = 0; s < n; ++s) active[s] = active[s] && live[s] && reach[s];

    // Ray states: every state below has exactly one child slot.
    std::vector<bool> ray(n, false);
    bool any_ray = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!active[s]) continue;
      const auto below = detail::reachable(adj, {s});
      bool is_ray = true;
      for (std::size_t t = 0; t < n && is_ray; ++t)
        if (below[t] && adj[t].size() != 1) is_ray = false;
      ray[s] = is_ray;
      any_ray = any_ray || is_ray;
    }

    if (!any_ray) {
      const auto cyclic = detail::cyclic_mask(adj);
      for (std::size_t s = 0; s < n; ++s)
        if (active[s] && cyclic[s]) table[e.states[s].flags].perfect = true;
      break;
    }

    for (std::size_t s = 0; s < n; ++s) {
      if (!ray[s]) continue;
      Branch b;
      std::vector<std::size_t> seen_at(n, std::size_t(-1));
      std::vector<std::size_t> walk;
      std::size_t t = s;
      while (seen_at[t] == std::size_t(-1)) {
        seen_at[t] = walk.size();
        walk.push_back(t);
        t = adj[t].front();
      }
      b.cycle.assign(walk.begin() + std::ptrdiff_t(seen_at[t]), walk.end());
      auto& info = table[branch_signature(b, e)];
      info.cb_rank = std::max(info.cb_rank, round + 1);
      if (round == 0) info.isolated = true;
    }
    for (std::size_t s = 0; s < n; ++s)
      if (ray[s]) active[s] = false;
  }
  return table;
}

/// Bisimulation-minimal form of an end-space automaton. States are numbered
/// canonically, so structurally equal forms compare equal.
struct MinimizedAutomaton {
  struct State {
    ColourSet flags;
    std::vector<std::size_t> children;  // sorted

    friend bool operator==(const State&, const State&) = default;
  };

  std::vector<State> states;
  std::optional<std::size_t> root;

  friend bool operator==(const MinimizedAutomaton&, const MinimizedAutomaton&) = default;
};

struct CanonicalEndForm {
  MinimizedAutomaton automaton;
  InvariantTable table;

  friend bool operator==(const CanonicalEndForm&, const CanonicalEndForm&) = default;
};

inline EndSpaceAutomaton to_end_automaton(const MinimizedAutomaton& m) {
  EndSpaceAutomaton e;
  for (std::size_t s = 0; s < m.states.size(); ++s)
    e.states.push_back({"q" + std::to_string(s), m.states[s].flags, m.states[s].children});
  e.root = m.root;
  return e;
}

namespace detail {

/// Rank of each key among the sorted distinct keys.
template <typename Key>
std::vector<std::size_t> rank_keys(const std::vector<Key>& keys) {
  std::vector<Key> sorted(keys);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> out;
  out.reserve(keys.size());
  for (const auto& k : keys)
    out.push_back(std::size_t(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin()));
  return out;
}

/// Coarsest partition respecting flags and child-class multisets. Class ids
/// are ranks of structural keys, hence independent of state numbering.
inline std::vector<std::size_t> bisimulation_classes(const std::vector<ColourSet>& flags,
                                                     const Adjacency& children) {
  const std::size_t n = flags.size();
  std::vector<std::size_t> cls = rank_keys(flags);
  std::size_t count = n == 0 ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  for (;;) {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keys(n);
    for (std::size_t s = 0; s < n; ++s) {
      keys[s].first = cls[s];
      for (std::size_t c : children[s]) keys[s].second.push_back(cls[c]);
      std::sort(keys[s].second.begin(), keys[s].second.end());
    }
    auto next = rank_keys(keys);
    const std::size_t next_count = n == 0 ? 0 : *std::max_element(next.begin(), next.end()) + 1;
    cls = std::move(next);
    if (next_count == count) break;
    count = next_count;
  }
  return cls;
}

}  // namespace detail

/// Prunes, contracts unary steps that keep the colour flags, quotients by
/// the coarsest flag-respecting bisimulation, and attaches the invariant table.
inline CanonicalEndForm canonical_form(const EndSpaceAutomaton& e) {
  CanonicalEndForm form;
  if (e.empty()) return form;

  std::vector<ColourSet> flags;
  detail::Adjacency children = e.adjacency();
  for (const auto& s : e.states) flags.push_back(s.flags);
  std::size_t root = *e.root;
  std::vector<bool> removed(e.size(), false);

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (removed[s] || children[s].size() != 1) continue;
      const std::size_t t = children[s][0];
      if (t == s || flags[s] != flags[t]) continue;
      for (auto& ch : children)
        for (auto& c : ch)
          if (c == s) c = t;
      if (root == s) root = t;
      removed[s] = true;
      children[s].clear();
      changed = true;
    }
  }

  const auto keep = detail::reachable(children, {root});
  std::vector<std::size_t> compact(e.size(), std::size_t(-1));
  std::vector<ColourSet> kept_flags;
  for (std::size_t s = 0; s < e.size(); ++s)
    if (keep[s]) {
      compact[s] = kept_flags.size();
      kept_flags.push_back(flags[s]);
    }
  detail::Adjacency kept_children(kept_flags.size());
  for (std::size_t s = 0; s < e.size(); ++s)
    if (keep[s])
      for (std::size_t c : children[s]) kept_children[compact[s]].push_back(compact[c]);

  const auto cls = detail::bisimulation_classes(kept_flags, kept_children);
  const std::size_t blocks = *std::max_element(cls.begin(), cls.end()) + 1;
  form.automaton.states.resize(blocks);
  std::vector<bool> filled(blocks, false);
  for (std::size_t s = 0; s < kept_flags.size(); ++s) {
    if (filled[cls[s]]) continue;
    filled[cls[s]] = true;
    auto& block = form.automaton.states[cls[s]];
    block.flags = kept_flags[s];
    for (std::size_t c : kept_children[s]) block.children.push_back(cls[c]);
    std::sort(block.children.begin(), block.children.end());
  }
  form.automaton.root = cls[compact[root]];
  form.table = topo_invariants(to_end_automaton(form.automaton));
  return form;
}

}  // namespace m3s
