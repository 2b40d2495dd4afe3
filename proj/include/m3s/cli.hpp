#pragma once

// Command-line front end. Exit codes: 0 success / yes, 1 no, 2 unknown or
// inconclusive, 64 usage, 65 parse or validation failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "m3s/decide.hpp"
#include "m3s/dot.hpp"
#include "m3s/endspace.hpp"
#include "m3s/exhaust.hpp"
#include "m3s/realize.hpp"
#include "m3s/textio.hpp"
#include "m3s/treeify.hpp"

namespace m3s::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

using nlohmann::json;

inline json to_json(Count c) { return c.is_infinite() ? json("infinity") : json(c.value()); }

inline json to_json(const ColourSet& s) {
  json out = json::array();
  for (Colour c : s) out.push_back(c);
  return out;
}

inline json to_json(const InvariantTable& table) {
  json out = json::array();
  for (const auto& [sig, info] : table)
    out.push_back({{"signature", to_json(sig)},
                   {"isolated", info.isolated},
                   {"perfect", info.perfect},
                   {"cb_rank", info.cb_rank}});
  return out;
}

inline json to_json(const InvariantReport& r) {
  json n = json::object();
  for (const auto& [k, c] : r.n) n[std::to_string(k)] = to_json(c);
  json sigs = nullptr;
  if (r.signatures) {
    sigs = json::array();
    for (const auto& s : *r.signatures) sigs.push_back(to_json(s));
  }
  return {{"n", n}, {"end_count", to_json(r.end_count)}, {"signatures", sigs}, {"table", to_json(r.table)}};
}

inline json to_json(const IsoVerdict& v) {
  json w = nullptr;
  if (v.witness) w = {{"invariant", v.witness->invariant}, {"left", v.witness->left}, {"right", v.witness->right}};
  return {{"verdict", to_string(v.verdict)}, {"tier", v.tier}, {"witness", w}, {"explanation", v.explanation}};
}

inline std::string format_counts(const std::map<Colour, Count>& n) {
  if (std::all_of(n.begin(), n.end(), [](const auto& kv) { return kv.second.is_zero(); })) return "all 0";
  std::string out = "{";
  bool first = true;
  for (const auto& [k, c] : n) {
    out += (first ? "" : ", ") + std::to_string(k) + ": " + c.to_string();
    first = false;
  }
  return out + "}";
}

inline std::string format_report(const InvariantReport& r) {
  std::string out = "n: " + format_counts(r.n) + "\n";
  out += "end_count: " + r.end_count.to_string() + "\n";
  if (r.signatures) out += "signatures: " + format_signatures(*r.signatures) + "\n";
  out += "table: " + format_table(r.table) + "\n";
  return out;
}

namespace detail {

struct Failure {
  int code;
};

class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  Document load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      err_ << "error: cannot read " << path << "\n";
      throw Failure{kExitUsage};
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      return parse(buffer.str());
    } catch (const Error& e) {
      err_ << path << ": " << to_string(e.code());
      if (const auto* v = dynamic_cast<const ValidationError*>(&e)) err_ << " (" << to_string(v->cause().code()) << ")";
      err_ << ": " << e.what() << "\n";
      throw Failure{kExitData};
    }
  }

  Presentation load_presentation(const std::string& path) {
    Document d = load(path);
    if (auto* g = std::get_if<FiniteGraph>(&d)) return *g;
    if (auto* t = std::get_if<TreeAutomaton>(&d)) return *t;
    err_ << path << ": expected a graph or tree document\n";
    throw Failure{kExitUsage};
  }

  TreeAutomaton load_tree(const std::string& path) {
    Document d = load(path);
    if (auto* t = std::get_if<TreeAutomaton>(&d)) return *t;
    if (auto* g = std::get_if<FiniteGraph>(&d)) return treeify(*g);
    err_ << path << ": expected a graph or tree document\n";
    throw Failure{kExitUsage};
  }

  void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err_ << "error: cannot write " << path << "\n";
      throw Failure{kExitUsage};
    }
    file << text;
  }

  void print(const json& j) { out_ << j.dump(2) << "\n"; }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

inline const char* kind_name(const Document& d) {
  switch (d.index()) {
    case 0: return "graph";
    case 1: return "tree";
    default: return "endspace";
  }
}

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Connected sums along coloured graphs and trees: invariants, normalization, isomorphism", "m3s"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  std::string file, file2, output;
  std::size_t depth = 0;
  bool dot = false;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a document");
  validate_cmd->add_option("FILE", file)->required();
  auto* invariants_cmd = app.add_subcommand("invariants", "Prime counts and coloured end-space invariants");
  invariants_cmd->add_option("FILE", file)->required();
  auto* treeify_cmd = app.add_subcommand("treeify", "Normalize a graph presentation to a tree");
  treeify_cmd->add_option("FILE", file)->required();
  treeify_cmd->add_option("-o", output, "Output file");
  auto* iso_cmd = app.add_subcommand("iso", "Decide isomorphism of two presentations");
  iso_cmd->add_option("FILE1", file)->required();
  iso_cmd->add_option("FILE2", file2)->required();
  auto* realize_cmd = app.add_subcommand("realize", "Build a tree realizing an end-space spec");
  realize_cmd->add_option("FILE", file)->required();
  realize_cmd->add_option("-o", output, "Output file");
  auto* truncate_cmd = app.add_subcommand("truncate", "Good truncation of a tree presentation");
  truncate_cmd->add_option("FILE", file)->required();
  truncate_cmd->add_option("--depth", depth)->required();
  truncate_cmd->add_flag("--dot", dot, "Emit GraphViz");
  auto* ends_cmd = app.add_subcommand("ends", "End space: count, enumeration, canonical form");
  ends_cmd->add_option("FILE", file)->required();
  ends_cmd->add_flag("--dot", dot, "Emit GraphViz");
  auto* matching_cmd = app.add_subcommand("matching", "Bounded back-and-forth matching");
  matching_cmd->add_option("FILE1", file)->required();
  matching_cmd->add_option("FILE2", file2)->required();
  matching_cmd->add_option("--depth", depth)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  detail::Session session(out, err);
  try {
    if (validate_cmd->parsed()) {
      const Document d = session.load(file);
      if (as_json) {
        json j = {{"valid", true}, {"kind", detail::kind_name(d)}};
        if (auto* t = std::get_if<TreeAutomaton>(&d)) j["finite_states"] = t->finite_states();
        session.print(j);
      } else {
        out << "valid " << detail::kind_name(d) << "\n";
        if (auto* t = std::get_if<TreeAutomaton>(&d)) {
          out << "finite states: {";
          const auto fs = t->finite_states();
          for (std::size_t i = 0; i < fs.size(); ++i) out << (i ? ", " : "") << fs[i];
          out << "}\n";
        }
      }
      return kExitYes;
    }

    if (invariants_cmd->parsed()) {
      const auto report = invariant_report(session.load_presentation(file));
      if (as_json)
        session.print(to_json(report));
      else
        out << format_report(report);
      return kExitYes;
    }

    if (treeify_cmd->parsed()) {
      const Presentation p = session.load_presentation(file);
      const TreeAutomaton t = std::visit([](const auto& x) { return treeify(x); }, p);
      session.emit(serialize(t), output);
      return kExitYes;
    }

    if (iso_cmd->parsed()) {
      const Presentation a = session.load_presentation(file);
      const Presentation b = session.load_presentation(file2);
      IsoVerdict v;
      try {
        v = isomorphic(a, b);
      } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitData;
      }
      if (as_json) {
        session.print(to_json(v));
      } else {
        out << "verdict: " << to_string(v.verdict) << ", tier: " << v.tier << "\n";
        if (v.witness) out << "witness: " << v.witness->to_string() << "\n";
        out << "explanation: " << v.explanation << "\n";
      }
      return v.verdict == Verdict::Yes ? kExitYes : v.verdict == Verdict::No ? kExitNo : kExitUnknown;
    }

    if (realize_cmd->parsed()) {
      const Document d = session.load(file);
      const auto* spec = std::get_if<EndSpaceSpec>(&d);
      if (!spec) {
        err << file << ": expected an endspace document\n";
        return kExitUsage;
      }
      session.emit(serialize(realize(*spec)), output);
      return kExitYes;
    }

    if (truncate_cmd->parsed()) {
      const TreeAutomaton p = session.load_tree(file);
      const Truncation t = truncate(p, depth);
      if (dot) {
        out << to_dot(t, p);
      } else if (as_json) {
        json boundary = json::array();
        for (const auto& b : t.boundary)
          boundary.push_back({{"node", b.node}, {"state", p.state(b.state).id}, {"flags", to_json(b.flags)}});
        session.print({{"requested_depth", t.requested_depth},
                       {"depth", t.depth},
                       {"closed", t.closed},
                       {"core_size", t.core.size()},
                       {"boundary", boundary}});
      } else {
        out << "depth: " << t.depth << " (requested " << t.requested_depth << ")\n";
        out << "core: " << t.core.size() << " nodes\n";
        if (t.closed) out << "closed: the generated tree is finite\n";
        out << "boundary:";
        for (const auto& b : t.boundary) out << " " << p.state(b.state).id << "/" << format_colour_set(b.flags);
        out << "\n";
      }
      return kExitYes;
    }

    if (ends_cmd->parsed()) {
      const TreeAutomaton p = session.load_tree(file);
      const auto e = end_space(p);
      const auto form = canonical_form(e);
      if (dot) {
        out << to_dot(e) << to_dot(form);
        return kExitYes;
      }
      const Count n = end_count(e);
      json ends = nullptr;
      std::vector<std::string> lines;
      if (n.is_finite()) {
        ends = json::array();
        for (const auto& [branch, sig] : enumerate_ends(e)) {
          ends.push_back({{"branch", format_branch(branch, e)}, {"signature", to_json(sig)}});
          lines.push_back(format_branch(branch, e) + " " + format_colour_set(sig));
        }
      }
      if (as_json) {
        session.print({{"end_count", to_json(n)},
                       {"ends", ends},
                       {"table", to_json(form.table)},
                       {"minimized_states", form.automaton.states.size()}});
      } else {
        out << "end_count: " << n << "\n";
        for (const auto& l : lines) out << "end: " << l << "\n";
        out << "table: " << format_table(form.table) << "\n";
        out << "minimized states: " << form.automaton.states.size() << "\n";
      }
      return kExitYes;
    }

    if (matching_cmd->parsed()) {
      const TreeAutomaton a = session.load_tree(file);
      const TreeAutomaton b = session.load_tree(file2);
      MatchResult r;
      try {
        r = back_and_forth(a, b, depth);
      } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitData;
      }
      if (const auto* m = std::get_if<PartialMatching>(&r)) {
        if (as_json) {
          json stages = json::array();
          for (const auto& st : m->stages)
            stages.push_back({{"stage", st.stage}, {"leading", st.leading_side}, {"pairs", st.pairs.size()},
                              {"absorptions", st.absorptions.size()}});
          session.print({{"result", "matching"}, {"stages", stages}});
        } else {
          out << "result: matching\n";
          for (const auto& st : m->stages)
            out << "stage " << st.stage << " (led by " << st.leading_side << "): " << st.pairs.size()
                << " boundary pairs, " << st.absorptions.size() << " absorptions\n";
        }
        return kExitYes;
      }
      const auto& o = std::get<Obstruction>(r);
      if (as_json) {
        json w = nullptr;
        if (o.witness) w = {{"invariant", o.witness->invariant}, {"left", o.witness->left}, {"right", o.witness->right}};
        session.print({{"result", to_string(o.kind)}, {"stage", o.stage}, {"detail", o.detail}, {"witness", w}});
      } else {
        out << "result: " << to_string(o.kind) << "\n" << "detail: " << o.detail << "\n";
      }
      return o.kind == ObstructionKind::InvariantMismatch ? kExitNo : kExitUnknown;
    }
  } catch (const detail::Failure& f) {
    return f.code;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace m3s::cli
