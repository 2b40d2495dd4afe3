#pragma once

// GraphViz export. Nodes are labelled `state/colourflags`.

#include <cstddef>
#include <string>

#include "m3s/endspace.hpp"
#include "m3s/exhaust.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

inline std::string to_dot(const EndSpaceAutomaton& e, const std::string& name = "ends") {
  std::string out = "digraph " + name + " {\n";
  for (std::size_t s = 0; s < e.size(); ++s) {
    out += "  n" + std::to_string(s) + " [label=\"" + e.states[s].id + "/" + format_colour_set(e.states[s].flags) + "\"";
    if (e.root == s) out += ", shape=doublecircle";
    out += "];\n";
  }
  for (std::size_t s = 0; s < e.size(); ++s)
    for (std::size_t c : e.states[s].children) out += "  n" + std::to_string(s) + " -> n" + std::to_string(c) + ";\n";
  return out + "}\n";
}

inline std::string to_dot(const CanonicalEndForm& form, const std::string& name = "canonical") {
  return to_dot(to_end_automaton(form.automaton), name);
}

inline std::string to_dot(const Truncation& t, const TreeAutomaton& p, const std::string& name = "truncation") {
  std::string out = "digraph " + name + " {\n";
  for (std::size_t i = 0; i < t.core.size(); ++i) {
    const auto& node = t.core.nodes[i];
    std::string label = (node.state ? p.state(*node.state).id : std::string("?")) + "/" + std::to_string(node.colour);
    std::string attrs;
    for (const auto& b : t.boundary)
      if (b.node == i) {
        label = p.state(b.state).id + "/" + format_colour_set(b.flags);
        attrs = ", shape=box";
      }
    out += "  n" + std::to_string(i) + " [label=\"" + label + "\"" + attrs + "];\n";
  }
  for (std::size_t i = 0; i < t.core.size(); ++i)
    for (std::size_t c : t.core.nodes[i].children) out += "  n" + std::to_string(i) + " -> n" + std::to_string(c) + ";\n";
  return out + "}\n";
}

}  // namespace m3s
