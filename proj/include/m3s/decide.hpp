#pragma once

// Invariant reports and the tiered isomorphism decision.
//
// Two presentations over the same palette describe isomorphic manifolds iff
// their prime counts agree and their end spaces are homeomorphic by a map
// preserving every colour. Tiers:
//   1. both closed: compare counts (complete);
//   2. both with finitely many ends: counts plus the multiset of end
//      signatures (complete, a finite end space is discrete);
//   3. otherwise: differing counts, end counts or CB tables give a sound
//      No, equal minimized end automata give a sound Yes, anything else is
//      Unknown.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "m3s/analysis.hpp"
#include "m3s/count.hpp"
#include "m3s/endspace.hpp"
#include "m3s/error.hpp"
#include "m3s/presentation.hpp"

namespace m3s {

using Presentation = std::variant<FiniteGraph, TreeAutomaton>;

inline const Palette& palette_of(const Presentation& p) {
  return std::visit([](const auto& x) -> const Palette& { return x.palette(); }, p);
}

struct InvariantReport {
  std::map<Colour, Count> n;  // k >= 1
  Count end_count;
  std::optional<std::multiset<EndSignature>> signatures;  // present iff end_count finite
  InvariantTable table;

  bool closed() const { return end_count.is_zero(); }

  friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

inline InvariantReport invariant_report(const FiniteGraph& g) {
  InvariantReport r;
  for (Colour k = 1; k < g.palette().size(); ++k) r.n[k] = colour_count(g, k);
  r.end_count = Count::nat(0);
  r.signatures.emplace();
  return r;
}

inline InvariantReport invariant_report(const TreeAutomaton& p) {
  InvariantReport r;
  for (Colour k = 1; k < p.palette().size(); ++k) r.n[k] = colour_count(p, k);
  const auto e = end_space(p);
  r.end_count = end_count(e);
  if (r.end_count.is_finite()) {
    r.signatures.emplace();
    for (auto& [branch, sig] : enumerate_ends(e)) r.signatures->insert(sig);
  }
  r.table = topo_invariants(e);
  return r;
}

inline InvariantReport invariant_report(const Presentation& p) {
  return std::visit([](const auto& x) { return invariant_report(x); }, p);
}

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

/// A differing invariant together with both values.
struct Witness {
  std::string invariant;
  std::string left;
  std::string right;

  std::string to_string() const { return invariant + ": " + left + " vs " + right; }

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct IsoVerdict {
  Verdict verdict = Verdict::Unknown;
  int tier = 0;
  std::optional<Witness> witness;  // set iff verdict == No
  std::string explanation;

  static IsoVerdict yes(int tier, std::string why) { return {Verdict::Yes, tier, std::nullopt, std::move(why)}; }
  static IsoVerdict no(int tier, Witness w) {
    std::string why = w.to_string();
    return {Verdict::No, tier, std::move(w), std::move(why)};
  }
  static IsoVerdict unknown(std::string why) { return {Verdict::Unknown, 3, std::nullopt, std::move(why)}; }
};

namespace detail {

inline std::optional<Witness> compare_counts(const InvariantReport& a, const InvariantReport& b) {
  for (const auto& [k, count] : a.n) {
    const Count other = b.n.at(k);
    if (count != other) return Witness{"n(" + std::to_string(k) + ")", count.to_string(), other.to_string()};
  }
  return std::nullopt;
}

inline CanonicalEndForm canonical_of(const Presentation& p) {
  if (const auto* t = std::get_if<TreeAutomaton>(&p)) return canonical_form(end_space(*t));
  return {};
}

}  // namespace detail

inline IsoVerdict isomorphic(const Presentation& p1, const Presentation& p2) {
  if (palette_of(p1) != palette_of(p2))
    throw Error(Errc::PaletteMismatch, "presentations use different palettes");

  const auto r1 = invariant_report(p1);
  const auto r2 = invariant_report(p2);

  if (r1.closed() && r2.closed()) {
    if (auto w = detail::compare_counts(r1, r2)) return IsoVerdict::no(1, *w);
    return IsoVerdict::yes(1, "closed manifolds with equal prime counts");
  }

  if (r1.end_count.is_finite() && r2.end_count.is_finite()) {
    if (auto w = detail::compare_counts(r1, r2)) return IsoVerdict::no(2, *w);
    if (*r1.signatures != *r2.signatures)
      return IsoVerdict::no(2, {"end signatures", format_signatures(*r1.signatures),
                                format_signatures(*r2.signatures)});
    return IsoVerdict::yes(2, "equal prime counts and equal end signature multisets");
  }

  if (auto w = detail::compare_counts(r1, r2)) return IsoVerdict::no(3, *w);
  if (r1.end_count != r2.end_count)
    return IsoVerdict::no(3, {"end_count", r1.end_count.to_string(), r2.end_count.to_string()});
  if (r1.table != r2.table)
    return IsoVerdict::no(3, {"end table", format_table(r1.table), format_table(r2.table)});
  if (detail::canonical_of(p1).automaton == detail::canonical_of(p2).automaton)
    return IsoVerdict::yes(3, "equal prime counts and equal minimized end automata");
  return IsoVerdict::unknown(
      "prime counts and end tables agree but the minimized end automata differ; "
      "colour-preserving homeomorphism of the end spaces is unresolved");
}

}  // namespace m3s
