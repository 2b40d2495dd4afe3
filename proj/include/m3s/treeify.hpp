#pragma once

// Graph-to-tree normalization for closed presentations. A spanning tree is
// kept; every surplus edge (including loops) is cut and replaced by an
// S2xS1 leaf, which is the self connected sum the cut edge was encoding.

#include <algorithm>
#include <cstddef>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "m3s/presentation.hpp"

namespace m3s {

/// The spanning tree is grown breadth-first from the least vertex id, with
/// neighbours visited in id order; a surplus edge's S2xS1 leaf hangs from its
/// lexicographically least endpoint.
inline TreeAutomaton treeify(const FiniteGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.id(a) < g.id(b); });

  struct Incidence {
    std::size_t edge;
    std::size_t other;
  };
  std::vector<std::vector<Incidence>> incident(n);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    auto [a, b] = g.edges()[i];
    incident[a].push_back({i, b});
    if (a != b) incident[b].push_back({i, a});
  }
  for (auto& inc : incident)
    std::sort(inc.begin(), inc.end(), [&](const Incidence& x, const Incidence& y) {
      if (g.id(x.other) != g.id(y.other)) return g.id(x.other) < g.id(y.other);
      return x.edge < y.edge;
    });

  const std::size_t root = order.front();
  std::vector<bool> visited(n, false), tree_edge(g.edge_count(), false);
  std::vector<std::vector<std::size_t>> tree_children(n);
  std::queue<std::size_t> queue;
  visited[root] = true;
  queue.push(root);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    for (const auto& inc : incident[v])
      if (!visited[inc.other]) {
        visited[inc.other] = true;
        tree_edge[inc.edge] = true;
        tree_children[v].push_back(inc.other);
        queue.push(inc.other);
      }
  }

  std::set<std::string> taken;
  for (const auto& v : g.vertices()) taken.insert(v.id);
  std::size_t fresh = 0;
  auto fresh_id = [&] {
    std::string id;
    do id = "h" + std::to_string(fresh++);
    while (taken.count(id));
    taken.insert(id);
    return id;
  };

  RawAutomaton raw{g.palette(), {}, g.id(root)};
  for (std::size_t v = 0; v < n; ++v) {
    RawState s{g.id(v), g.colour(v), {}};
    for (std::size_t c : tree_children[v]) s.children.push_back(g.id(c));
    raw.states.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (tree_edge[i]) continue;
    auto [a, b] = g.edges()[i];
    const std::size_t anchor = g.id(a) <= g.id(b) ? a : b;
    const std::string leaf = fresh_id();
    raw.states[anchor].children.push_back(leaf);
    raw.states.push_back({leaf, kHandleColour, {}});
  }
  return validate_regular(raw);
}

/// Automata already generate trees.
inline TreeAutomaton treeify(const TreeAutomaton& p) { return p; }

}  // namespace m3s
