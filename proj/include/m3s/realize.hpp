#pragma once

// Realization of a prescribed coloured end space.
//
// The end space E is given as the branch set of a deterministic binary
// prefix automaton, each coloured subset E_i as a restriction of its
// transitions. The output tree is the prefix tree of E with every prefix
// vertex coloured S3 and, at prefix v, one leaf of colour i for each i such
// that v extends to a branch of E_i. Finite counts hang from the root as
// chains. Whether v extends into E_i depends only on the E-state reached and
// on which E_i are still alive along v, so the product automaton is finite.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "m3s/error.hpp"
#include "m3s/graph_util.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

/// Deterministic automaton over {0, 1}; its infinite runs from the root form E.
struct PrefixAutomaton {
  std::vector<std::string> ids;
  std::vector<std::array<std::optional<std::size_t>, 2>> next;
  std::optional<std::size_t> root;

  std::size_t size() const noexcept { return ids.size(); }
  bool empty() const noexcept { return ids.empty(); }

  std::optional<std::size_t> find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    return std::nullopt;
  }

  std::size_t add_state(const std::string& id) {
    if (auto s = find(id)) return *s;
    ids.push_back(id);
    next.push_back({});
    return ids.size() - 1;
  }
};

/// Allowed transitions of one E_i, per E-state and symbol.
using TransitionMask = std::vector<std::array<bool, 2>>;

struct EndSpaceSpec {
  Palette palette;
  PrefixAutomaton ends;
  std::map<Colour, TransitionMask> subsets;       // indices >= 2
  std::map<Colour, std::uint64_t> finite_counts;  // indices >= 1

  /// Structural equality up to the order in which states were declared.
  friend bool operator==(const EndSpaceSpec& a, const EndSpaceSpec& b) {
    if (a.palette != b.palette || a.finite_counts != b.finite_counts) return false;
    if (a.ends.size() != b.ends.size() || a.subsets.size() != b.subsets.size()) return false;
    auto name = [](const PrefixAutomaton& e, std::optional<std::size_t> s) {
      return s ? e.ids[*s] : std::string("<none>");
    };
    if (name(a.ends, a.ends.root) != name(b.ends, b.ends.root)) return false;
    for (std::size_t s = 0; s < a.ends.size(); ++s) {
      auto t = b.ends.find(a.ends.ids[s]);
      if (!t) return false;
      for (int sym = 0; sym < 2; ++sym)
        if (name(a.ends, a.ends.next[s][sym]) != name(b.ends, b.ends.next[*t][sym])) return false;
      for (const auto& [i, mask] : a.subsets) {
        auto it = b.subsets.find(i);
        if (it == b.subsets.end() || mask.at(s) != it->second.at(*t)) return false;
      }
    }
    return true;
  }
};

namespace detail {

inline Adjacency prefix_adjacency(const PrefixAutomaton& e, const TransitionMask* mask) {
  Adjacency adj(e.size());
  for (std::size_t s = 0; s < e.size(); ++s)
    for (int sym = 0; sym < 2; ++sym)
      if (e.next[s][sym] && (!mask || (*mask)[s][sym])) adj[s].push_back(*e.next[s][sym]);
  return adj;
}

inline Error invalid_spec(const std::string& why, std::vector<std::string> subjects = {}) {
  return Error(Errc::InvalidSpec, "invalid end-space spec: " + why, std::move(subjects));
}

}  // namespace detail

inline void validate_spec(const EndSpaceSpec& spec) {
  spec.palette.validate();
  const auto& e = spec.ends;
  if (e.next.size() != e.ids.size()) throw detail::invalid_spec("transition table size mismatch");
  if (!e.empty() && !e.root) throw detail::invalid_spec("E has states but no root");
  if (e.empty() && e.root) throw detail::invalid_spec("E has a root but no states");

  const auto live = detail::reaches_cycle(detail::prefix_adjacency(e, nullptr));
  for (std::size_t s = 0; s < e.size(); ++s)
    if (!live[s]) throw detail::invalid_spec("dead state " + e.ids[s] + " begins no infinite path", {e.ids[s]});

  for (const auto& [i, mask] : spec.subsets) {
    if (i < 2 || i >= spec.palette.size())
      throw detail::invalid_spec("subset index " + std::to_string(i) + " is not a prime palette entry",
                                 {std::to_string(i)});
    if (spec.finite_counts.count(i))
      throw detail::invalid_spec("index " + std::to_string(i) + " has both a subset and a count",
                                 {std::to_string(i)});
    if (mask.size() != e.size()) throw detail::invalid_spec("subset mask size mismatch");
    for (std::size_t s = 0; s < e.size(); ++s)
      for (int sym = 0; sym < 2; ++sym)
        if (mask[s][sym] && !e.next[s][sym])
          throw detail::invalid_spec("subset " + std::to_string(i) + " allows a transition " + e.ids[s] + " " +
                                         std::to_string(sym) + " that E lacks",
                                     {e.ids[s]});
  }
  for (const auto& [j, n] : spec.finite_counts)
    if (j < 1 || j >= spec.palette.size())
      throw detail::invalid_spec("count index " + std::to_string(j) + " is not a counted palette entry",
                                 {std::to_string(j)});
}

/// States of E live within E_i: each begins an infinite run using only
/// E_i's transitions.
inline std::vector<bool> subset_live_states(const EndSpaceSpec& spec, Colour i) {
  return detail::reaches_cycle(detail::prefix_adjacency(spec.ends, &spec.subsets.at(i)));
}

inline TreeAutomaton realize(const EndSpaceSpec& spec) {
  validate_spec(spec);
  const auto& e = spec.ends;

  std::map<Colour, std::vector<bool>> live;
  for (const auto& [i, mask] : spec.subsets) live[i] = subset_live_states(spec, i);

  RawAutomaton out{spec.palette, {}, {}};
  std::vector<std::string> chain_heads;
  for (const auto& [j, n] : spec.finite_counts) {
    for (std::uint64_t m = 1; m <= n; ++m) {
      const std::string id = "C" + std::to_string(j) + "_" + std::to_string(m);
      RawState link{id, j, {}};
      if (m < n) link.children.push_back("C" + std::to_string(j) + "_" + std::to_string(m + 1));
      out.states.push_back(std::move(link));
    }
    if (n > 0) chain_heads.push_back("C" + std::to_string(j) + "_1");
  }

  if (e.empty()) {
    out.root = "R";
    out.states.push_back({"R", kSphereColour, chain_heads});
    return validate_regular(out);
  }

  using Product = std::pair<std::size_t, std::set<Colour>>;
  auto product_id = [](const Product& p) {
    std::string id = "P" + std::to_string(p.first);
    for (Colour i : p.second) id += "_" + std::to_string(i);
    return id;
  };

  std::set<Colour> start;
  for (const auto& [i, flags] : live)
    if (flags[*e.root]) start.insert(i);

  std::set<Colour> leaf_colours;
  std::set<Product> seen{{*e.root, start}};
  std::queue<Product> queue;
  queue.push({*e.root, start});
  std::vector<RawState> products;
  while (!queue.empty()) {
    const Product cur = queue.front();
    queue.pop();
    RawState state{product_id(cur), kSphereColour, {}};
    for (int sym = 0; sym < 2; ++sym) {
      const auto target = e.next[cur.first][sym];
      if (!target) continue;
      Product child{*target, {}};
      for (Colour i : cur.second)
        if (spec.subsets.at(i)[cur.first][sym] && live.at(i)[*target]) child.second.insert(i);
      state.children.push_back(product_id(child));
      if (seen.insert(child).second) queue.push(child);
    }
    for (Colour i : cur.second) {
      state.children.push_back("L" + std::to_string(i));
      leaf_colours.insert(i);
    }
    products.push_back(std::move(state));
  }
  const std::size_t root_product = out.states.size();
  for (auto& s : products) out.states.push_back(std::move(s));
  for (Colour i : leaf_colours) out.states.push_back({"L" + std::to_string(i), i, {}});

  if (chain_heads.empty()) {
    out.root = product_id({*e.root, start});
  } else {
    // A fresh copy of the root prefix vertex, so the chains hang from the
    // root only even when the root product state recurs. The original is
    // dropped if nothing else refers to it.
    RawState root = out.states[root_product];
    root.id = "R";
    for (const auto& head : chain_heads) root.children.push_back(head);
    const std::string replaced = out.states[root_product].id;
    out.states.push_back(std::move(root));
    out.root = "R";
    const bool recurs = std::any_of(out.states.begin(), out.states.end(), [&](const RawState& s) {
      return std::find(s.children.begin(), s.children.end(), replaced) != s.children.end();
    });
    if (!recurs) out.states.erase(out.states.begin() + std::ptrdiff_t(root_product));
  }
  return validate_regular(out);
}

}  // namespace m3s
