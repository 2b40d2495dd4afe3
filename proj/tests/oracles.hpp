#pragma once

// Brute-force reference computations. None of these touch the SCC or
// fixpoint code of the library; they work by counting paths of exact length.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "m3s/presentation.hpp"
#include "m3s/realize.hpp"

namespace oracle {

inline constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 4;

inline std::uint64_t add_cap(std::uint64_t a, std::uint64_t b) { return std::min(kCap, a + b); }
inline std::uint64_t mul_cap(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kCap / b ? kCap : a * b;
}

/// paths[d][t] = number of length-d child paths from `from` to t (capped).
inline std::vector<std::vector<std::uint64_t>> path_counts(const m3s::TreeAutomaton& p, std::size_t from,
                                                           std::size_t max_len) {
  const std::size_t n = p.size();
  std::vector<std::vector<std::uint64_t>> out(max_len + 1, std::vector<std::uint64_t>(n, 0));
  out[0][from] = 1;
  for (std::size_t d = 0; d < max_len; ++d)
    for (std::size_t s = 0; s < n; ++s)
      if (out[d][s])
        for (std::size_t c : p.state(s).children) out[d + 1][c] = add_cap(out[d + 1][c], out[d][s]);
  return out;
}

/// Number of nodes of the depth-d unfolding.
inline std::uint64_t unfold_size(const m3s::TreeAutomaton& p, std::size_t depth) {
  const auto paths = path_counts(p, p.root(), depth);
  std::uint64_t total = 0;
  for (const auto& row : paths)
    for (std::uint64_t x : row) total = add_cap(total, x);
  return total;
}

/// Infinitely many tree nodes carry state t below `from`. With n states, that
/// happens iff some path of length in [n, 2n] reaches t.
inline bool occurs_infinitely(const m3s::TreeAutomaton& p, std::size_t from, std::size_t t) {
  const std::size_t n = p.size();
  const auto paths = path_counts(p, from, 2 * n);
  for (std::size_t d = n; d <= 2 * n; ++d)
    if (paths[d][t]) return true;
  return false;
}

/// Exact occurrence count of t below `from`, or nullopt when infinite.
inline std::optional<std::uint64_t> occurrences(const m3s::TreeAutomaton& p, std::size_t from, std::size_t t) {
  if (occurs_infinitely(p, from, t)) return std::nullopt;
  const auto paths = path_counts(p, from, p.size());
  std::uint64_t total = 0;
  for (const auto& row : paths) total = add_cap(total, row[t]);
  return total;
}

/// Colour-k count of the subtree generated at `from`; nullopt means infinite.
inline std::optional<std::uint64_t> subtree_colour_count(const m3s::TreeAutomaton& p, std::size_t from,
                                                         m3s::Colour k) {
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p.state(t).colour != k) continue;
    auto c = occurrences(p, from, t);
    if (!c) return std::nullopt;
    total = add_cap(total, *c);
  }
  return total;
}

/// The subtree at s is infinite iff a path of length n leaves s.
inline bool live(const m3s::TreeAutomaton& p, std::size_t s) {
  const auto paths = path_counts(p, s, p.size());
  return std::any_of(paths.back().begin(), paths.back().end(), [](std::uint64_t x) { return x != 0; });
}

/// Nodes at depth d that generate an infinite subtree.
inline std::uint64_t live_nodes_at(const m3s::TreeAutomaton& p, std::size_t depth) {
  const auto paths = path_counts(p, p.root(), depth);
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < p.size(); ++t)
    if (live(p, t)) total = add_cap(total, paths[depth][t]);
  return total;
}

/// Number of ends, or nullopt if infinite. The live-node count at depth d is
/// nondecreasing and stops growing after depth n exactly when it is finite.
inline std::optional<std::uint64_t> end_count(const m3s::TreeAutomaton& p) {
  const std::size_t n = p.size();
  const std::uint64_t a = live_nodes_at(p, n * n);
  const std::uint64_t b = live_nodes_at(p, n * n + n);
  if (b != a) return std::nullopt;
  return a;
}

// ---- finite graphs ----

/// Kneser-Milnor data: colour multiset for k >= 2 and colour-1 count plus b1.
inline std::map<m3s::Colour, std::uint64_t> graph_counts(const m3s::RawGraph& g) {
  std::map<m3s::Colour, std::uint64_t> out;
  for (m3s::Colour k = 1; k < g.palette.size(); ++k) out[k] = 0;
  for (const auto& v : g.vertices)
    if (v.colour != 0) ++out[v.colour];
  out[1] += g.edges.size() + 1 - g.vertices.size();
  return out;
}

// ---- end-space specs ----

/// Follows word `w` in E from the root; nullopt if a transition is missing
/// or disallowed by `mask`.
inline std::optional<std::size_t> run(const m3s::EndSpaceSpec& s, const std::vector<int>& w,
                                      const m3s::TransitionMask* mask) {
  if (!s.ends.root) return std::nullopt;
  std::size_t q = *s.ends.root;
  for (int b : w) {
    if (!s.ends.next[q][b] || (mask && !(*mask)[q][b])) return std::nullopt;
    q = *s.ends.next[q][b];
  }
  return q;
}

/// All words of length d that E admits.
inline std::vector<std::vector<int>> prefixes(const m3s::EndSpaceSpec& s, std::size_t d,
                                              const m3s::TransitionMask* mask = nullptr) {
  std::vector<std::vector<int>> level{{}};
  if (!s.ends.root) return {};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& w : level)
      for (int b = 0; b < 2; ++b) {
        auto x = w;
        x.push_back(b);
        if (run(s, x, mask)) next.push_back(std::move(x));
      }
    level = std::move(next);
  }
  return level;
}

inline bool subset_nonempty(const m3s::EndSpaceSpec& s, m3s::Colour i) {
  return !prefixes(s, s.ends.size(), &s.subsets.at(i)).empty();
}

/// Branches of E as (long enough prefix, extension) when there are finitely
/// many; each live prefix at depth n has a unique continuation.
inline std::optional<std::vector<std::vector<int>>> finite_branches(const m3s::EndSpaceSpec& s) {
  const std::size_t n = s.ends.size();
  if (n == 0) return std::vector<std::vector<int>>{};
  const auto a = prefixes(s, n);
  const auto b = prefixes(s, 2 * n);
  if (a.size() != b.size()) return std::nullopt;
  std::vector<std::vector<int>> out;
  for (auto w : a) {
    // extend through another 3n steps; the run is periodic by then
    for (std::size_t i = 0; i < 3 * n; ++i) {
      auto q = *run(s, w, nullptr);
      w.push_back(s.ends.next[q][0] ? 0 : 1);
    }
    out.push_back(std::move(w));
  }
  return out;
}

/// Signature expected for a branch sampled by finite_branches.
inline std::set<m3s::Colour> expected_signature(const m3s::EndSpaceSpec& s, const std::vector<int>& w) {
  std::set<m3s::Colour> out;
  for (const auto& [i, mask] : s.subsets)
    if (run(s, w, &mask)) out.insert(i);
  return out;
}

}  // namespace oracle
