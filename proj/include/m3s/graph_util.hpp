#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace m3s::detail {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccResult {
  std::vector<std::size_t> component;  // component id per vertex
  std::vector<std::size_t> size;       // vertices per component
};

/// Tarjan's algorithm, iterative. Parallel arcs are harmless.
inline SccResult strongly_connected_components(const Adjacency& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = std::size_t(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  SccResult out{std::vector<std::size_t>(n, unset), {}};
  std::size_t counter = 0;
  struct Frame {
    std::size_t vertex;
    std::size_t next;
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (index[start] != unset) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adj[f.vertex].size()) {
        const std::size_t t = adj[f.vertex][f.next++];
        if (index[t] == unset) {
          index[t] = low[t] = counter++;
          stack.push_back(t);
          on_stack[t] = true;
          frames.push_back({t, 0});
        } else if (on_stack[t]) {
          low[f.vertex] = std::min(low[f.vertex], index[t]);
        }
        continue;
      }
      const std::size_t v = f.vertex;
      if (low[v] == index[v]) {
        const std::size_t id = out.size.size();
        std::size_t size = 0;
        for (std::size_t t = unset; t != v;) {
          t = stack.back();
          stack.pop_back();
          on_stack[t] = false;
          out.component[t] = id;
          ++size;
        }
        out.size.push_back(size);
      }
      frames.pop_back();
      if (!frames.empty()) low[frames.back().vertex] = std::min(low[frames.back().vertex], low[v]);
    }
  }
  return out;
}

/// Vertices lying on a directed cycle (including self-loops).
inline std::vector<bool> cyclic_mask(const Adjacency& adj) {
  const auto scc = strongly_connected_components(adj);
  std::vector<bool> cyclic(adj.size(), false);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (scc.size[scc.component[v]] > 1) cyclic[v] = true;
    for (std::size_t t : adj[v])
      if (t == v) cyclic[v] = true;
  }
  return cyclic;
}

inline std::vector<bool> reachable(const Adjacency& adj, const std::vector<std::size_t>& sources) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t s : sources)
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t t : adj[v])
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
  }
  return seen;
}

/// Vertices from which an infinite walk starts, i.e. that reach a cycle.
inline std::vector<bool> reaches_cycle(const Adjacency& adj) {
  const auto cyclic = cyclic_mask(adj);
  std::vector<bool> live(cyclic);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (live[v]) continue;
      for (std::size_t t : adj[v])
        if (live[t]) {
          live[v] = true;
          changed = true;
          break;
        }
    }
  }
  return live;
}

}  // namespace m3s::detail
