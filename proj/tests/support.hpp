#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "generators.hpp"
#include "m3s/presentation.hpp"
#include "oracles.hpp"

namespace support {

/// Palette [S3, S2xS1, P2, P3] unless told otherwise.
inline m3s::RawAutomaton raw_tree(std::vector<m3s::RawState> states, std::string root, std::size_t colours = 4) {
  return {gen::palette(colours), std::move(states), std::move(root)};
}

inline m3s::TreeAutomaton tree(std::vector<m3s::RawState> states, std::string root, std::size_t colours = 4) {
  return m3s::validate_regular(raw_tree(std::move(states), std::move(root), colours));
}

/// Root is the first state listed.
inline m3s::TreeAutomaton tree(std::vector<m3s::RawState> states) {
  std::string root = states.front().id;
  return tree(std::move(states), std::move(root));
}

inline m3s::FiniteGraph graph(std::vector<m3s::RawVertex> vertices,
                              std::vector<std::pair<std::string, std::string>> edges, std::size_t colours = 4) {
  return m3s::validate_finite({gen::palette(colours), std::move(vertices), std::move(edges)});
}

/// The sub-automaton generating the subtree at state s.
inline m3s::TreeAutomaton rooted_at(const m3s::TreeAutomaton& p, std::size_t s) {
  const auto paths = oracle::path_counts(p, s, p.size());
  const auto raw = p.raw();
  m3s::RawAutomaton sub{raw.palette, {}, p.state(s).id};
  for (std::size_t t = 0; t < p.size(); ++t) {
    bool seen = false;
    for (const auto& row : paths) seen = seen || row[t];
    if (seen) sub.states.push_back(raw.states[t]);
  }
  return m3s::validate_regular(sub);
}

}  // namespace support
