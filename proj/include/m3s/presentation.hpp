#pragma once

// Coloured-graph and regular-tree presentations of connected sums.
//
// A FiniteGraph (G, f) stands for the closed manifold obtained by removing
// d(v) balls from the summand coloured f(v) at each vertex v and gluing along
// the edges. A TreeAutomaton is a finite generator of a locally finite rooted
// coloured tree; it stands for the (generally open) connected sum along that
// tree. Neither manifold is ever built: the presentations are the data.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "m3s/error.hpp"

namespace m3s {

using Colour = std::size_t;

inline constexpr Colour kSphereColour = 0;  // S3
inline constexpr Colour kHandleColour = 1;  // S2xS1

/// Ordered list of summand labels. Index 0 is S3, index 1 is S2xS1; the rest
/// are user-declared primes, compared by label only.
class Palette {
 public:
  Palette() = default;
  explicit Palette(std::vector<std::string> labels) : labels_(std::move(labels)) {}

  static Palette with_primes(const std::vector<std::string>& primes) {
    std::vector<std::string> labels{"S3", "S2xS1"};
    labels.insert(labels.end(), primes.begin(), primes.end());
    return Palette(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(Colour c) const { return labels_.at(c); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool contains(Colour c) const noexcept { return c < labels_.size(); }

  void validate() const {
    if (labels_.size() < 2 || labels_[0] != "S3" || labels_[1] != "S2xS1")
      throw Error(Errc::BadPalette, "palette must begin with S3, S2xS1");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw Error(Errc::BadPalette, "duplicate palette label " + labels_[i], {labels_[i]});
  }

  friend bool operator==(const Palette&, const Palette&) = default;

 private:
  std::vector<std::string> labels_;
};

struct RawVertex {
  std::string id;
  Colour colour = 0;

  friend bool operator==(const RawVertex&, const RawVertex&) = default;
};

/// Unvalidated graph presentation, as written by a user or a parser.
struct RawGraph {
  Palette palette;
  std::vector<RawVertex> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
};

struct RawState {
  std::string id;
  Colour colour = 0;
  std::vector<std::string> children;  // multiset
};

/// Unvalidated regular tree automaton.
struct RawAutomaton {
  Palette palette;
  std::vector<RawState> states;
  std::string root;
};

class FiniteGraph;
class TreeAutomaton;
FiniteGraph validate_finite(const RawGraph& raw);
TreeAutomaton validate_regular(const RawAutomaton& raw);

namespace detail {

inline std::map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!index.emplace(ids[i], i).second)
      throw Error(Errc::DuplicateId, "duplicate identifier " + ids[i], {ids[i]});
  return index;
}

inline void check_colour(const Palette& palette, Colour colour, const std::string& owner) {
  if (!palette.contains(colour))
    throw Error(Errc::BadColourIndex,
                "colour " + std::to_string(colour) + " of " + owner + " is outside the palette",
                {owner});
}

}  // namespace detail

/// A validated, connected finite coloured multigraph. Edge endpoints are
/// vertex indices; a loop is an edge (v, v).
class FiniteGraph {
 public:
  const Palette& palette() const noexcept { return palette_; }
  const std::vector<RawVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  Colour colour(std::size_t v) const { return vertices_.at(v).colour; }
  const std::string& id(std::size_t v) const { return vertices_.at(v).id; }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of edge endpoints at v; a loop contributes 2.
  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (auto [a, b] : edges_) d += (a == v) + (b == v);
    return d;
  }

  RawGraph raw() const {
    RawGraph out{palette_, vertices_, {}};
    for (auto [a, b] : edges_) out.edges.emplace_back(vertices_[a].id, vertices_[b].id);
    return out;
  }

  friend bool operator==(const FiniteGraph& a, const FiniteGraph& b) {
    return a.palette_ == b.palette_ && a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  friend FiniteGraph validate_finite(const RawGraph& raw);
  FiniteGraph() = default;

  Palette palette_;
  std::vector<RawVertex> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::map<std::string, std::size_t> index_;
};

/// Checks a raw graph: nonempty, unique ids, known endpoints, colours within
/// the palette, well-formed palette, connected.
inline FiniteGraph validate_finite(const RawGraph& raw) {
  if (raw.vertices.empty()) throw Error(Errc::EmptyGraph, "graph has no vertices");

  FiniteGraph g;
  std::vector<std::string> ids;
  for (const auto& v : raw.vertices) ids.push_back(v.id);
  g.index_ = detail::index_ids(ids);
  for (const auto& v : raw.vertices) detail::check_colour(raw.palette, v.colour, v.id);
  raw.palette.validate();

  for (const auto& [a, b] : raw.edges) {
    auto ia = g.index_.find(a);
    auto ib = g.index_.find(b);
    if (ia == g.index_.end() || ib == g.index_.end()) {
      const std::string& missing = ia == g.index_.end() ? a : b;
      throw Error(Errc::UnknownId, "edge names undeclared vertex " + missing, {missing});
    }
    g.edges_.emplace_back(ia->second, ib->second);
  }

  const std::size_t n = raw.vertices.size();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (auto [a, b] : g.edges_) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  std::vector<std::size_t> component(n, n);
  std::size_t count = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (component[start] != n) continue;
    std::queue<std::size_t> queue;
    queue.push(start);
    component[start] = count;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop();
      for (std::size_t w : adjacency[v])
        if (component[w] == n) {
          component[w] = count;
          queue.push(w);
        }
    }
    ++count;
  }
  if (count > 1) {
    std::vector<std::vector<std::string>> components(count);
    for (std::size_t v = 0; v < n; ++v) components[component[v]].push_back(raw.vertices[v].id);
    throw DisconnectedError(std::move(components));
  }

  g.palette_ = raw.palette;
  g.vertices_ = raw.vertices;
  return g;
}

struct AutomatonState {
  std::string id;
  Colour colour = 0;
  std::vector<std::size_t> children;  // multiset, sorted by child id

  friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

/// A validated regular tree automaton: every state reachable from the root,
/// colours within the palette. Child multisets are kept sorted by state id so
/// that equal multisets compare equal.
class TreeAutomaton {
 public:
  const Palette& palette() const noexcept { return palette_; }
  const std::vector<AutomatonState>& states() const noexcept { return states_; }
  const AutomatonState& state(std::size_t s) const { return states_.at(s); }
  std::size_t size() const noexcept { return states_.size(); }
  std::size_t root() const noexcept { return root_; }

  std::optional<std::size_t> find(const std::string& id) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i].id == id) return i;
    return std::nullopt;
  }

  std::size_t index_of(const std::string& id) const {
    if (auto s = find(id)) return *s;
    throw Error(Errc::UnknownState, "unknown state " + id, {id});
  }

  /// States whose generated subtree is finite.
  const std::vector<bool>& finite_mask() const noexcept { return finite_; }
  bool is_finite_state(std::size_t s) const { return finite_.at(s); }

  std::vector<std::string> finite_states() const {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < states_.size(); ++s)
      if (finite_[s]) out.push_back(states_[s].id);
    return out;
  }

  /// True iff the generated tree is finite, i.e. it presents a closed manifold.
  bool generates_finite_tree() const { return finite_.at(root_); }

  RawAutomaton raw() const {
    RawAutomaton out{palette_, {}, states_[root_].id};
    for (const auto& s : states_) {
      RawState r{s.id, s.colour, {}};
      for (std::size_t c : s.children) r.children.push_back(states_[c].id);
      out.states.push_back(std::move(r));
    }
    return out;
  }

  friend bool operator==(const TreeAutomaton& a, const TreeAutomaton& b) {
    return a.palette_ == b.palette_ && a.states_ == b.states_ && a.root_ == b.root_;
  }

 private:
  friend TreeAutomaton validate_regular(const RawAutomaton& raw);
  TreeAutomaton() = default;

  Palette palette_;
  std::vector<AutomatonState> states_;
  std::size_t root_ = 0;
  std::vector<bool> finite_;
};

inline TreeAutomaton validate_regular(const RawAutomaton& raw) {
  std::vector<std::string> ids;
  for (const auto& s : raw.states) ids.push_back(s.id);
  const auto index = detail::index_ids(ids);
  for (const auto& s : raw.states) detail::check_colour(raw.palette, s.colour, s.id);
  raw.palette.validate();

  auto resolve = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(Errc::UnknownState, "unknown state " + id, {id});
    return it->second;
  };

  TreeAutomaton p;
  p.palette_ = raw.palette;
  p.root_ = resolve(raw.root);
  for (const auto& s : raw.states) {
    AutomatonState state{s.id, s.colour, {}};
    for (const auto& c : s.children) state.children.push_back(resolve(c));
    std::sort(state.children.begin(), state.children.end(),
              [&](std::size_t a, std::size_t b) { return raw.states[a].id < raw.states[b].id; });
    p.states_.push_back(std::move(state));
  }

  const std::size_t n = p.states_.size();
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> stack{p.root_};
  reached[p.root_] = true;
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t c : p.states_[s].children)
      if (!reached[c]) {
        reached[c] = true;
        stack.push_back(c);
      }
  }
  for (std::size_t s = 0; s < n; ++s)
    if (!reached[s])
      throw Error(Errc::UnreachableState, "state " + p.states_[s].id + " is unreachable from the root",
                  {p.states_[s].id});

  // Least fixpoint of "all children finite".
  p.finite_.assign(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (p.finite_[s]) continue;
      const auto& ch = p.states_[s].children;
      if (std::all_of(ch.begin(), ch.end(), [&](std::size_t c) { return bool(p.finite_[c]); })) {
        p.finite_[s] = true;
        changed = true;
      }
    }
  }
  return p;
}

/// Rooted finite coloured tree. Node 0 is the root.
struct FiniteTree {
  struct Node {
    Colour colour = 0;
    std::optional<std::size_t> state;  // generating automaton state, if any
    std::size_t parent = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> children;
  };

  std::vector<Node> nodes;

  std::size_t size() const noexcept { return nodes.size(); }

  std::size_t add_node(Colour colour, std::optional<std::size_t> state, std::optional<std::size_t> parent) {
    Node node{colour, state, parent.value_or(0), 0, {}};
    if (parent) node.depth = nodes.at(*parent).depth + 1;
    nodes.push_back(std::move(node));
    const std::size_t id = nodes.size() - 1;
    if (parent) nodes[*parent].children.push_back(id);
    return id;
  }

  /// Child-slot indices from the root down to `node`.
  std::vector<std::size_t> path(std::size_t node) const {
    std::vector<std::size_t> out;
    while (node != 0) {
      const auto& siblings = nodes[nodes[node].parent].children;
      out.push_back(std::size_t(std::find(siblings.begin(), siblings.end(), node) - siblings.begin()));
      node = nodes[node].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::size_t count_colour(Colour c) const {
    return std::size_t(std::count_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.colour == c; }));
  }
};

/// The depth-`depth` truncation of the tree generated by `p`.
inline FiniteTree unfold(const TreeAutomaton& p, std::size_t depth) {
  FiniteTree tree;
  tree.add_node(p.state(p.root()).colour, p.root(), std::nullopt);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].depth == depth) continue;
    const std::size_t s = *tree.nodes[i].state;
    for (std::size_t c : p.state(s).children) tree.add_node(p.state(c).colour, c, i);
  }
  return tree;
}

}  // namespace m3s
