#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "m3s/decide.hpp"
#include "m3s/realize.hpp"
#include "m3s/textio.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace m3s;

namespace {

EndSpaceSpec spec_of(const char* text) { return std::get<EndSpaceSpec>(parse(text)); }

Errc invalid(const EndSpaceSpec& s) {
  try {
    realize(s);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Syntax;
}

// Ends of the sub-automaton of flag-k states.
Count ends_within(const EndSpaceAutomaton& e, Colour k) {
  EndSpaceAutomaton sub;
  std::vector<std::size_t> index(e.size(), std::size_t(-1));
  for (std::size_t s = 0; s < e.size(); ++s)
    if (e.states[s].flags.count(k)) index[s] = sub.states.size(), sub.states.push_back({e.states[s].id, {}, {}});
  for (std::size_t s = 0; s < e.size(); ++s)
    if (index[s] != std::size_t(-1))
      for (std::size_t c : e.states[s].children)
        if (index[c] != std::size_t(-1)) sub.states[index[s]].children.push_back(index[c]);
  if (index[*e.root] == std::size_t(-1)) return Count::nat(0);
  sub.root = index[*e.root];
  // drop states without an infinite continuation
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& st : sub.states) {
      auto before = st.children.size();
      std::erase_if(st.children, [&](std::size_t c) { return sub.states[c].children.empty(); });
      changed = changed || before != st.children.size();
    }
  }
  if (sub.states[*sub.root].children.empty()) return Count::nat(0);
  return end_count(sub);
}

}  // namespace

TEST_CASE("full binary end space, nothing marked") {
  auto t = realize(spec_of("endspace { palette [S3, S2xS1, P2]; E { root S; S: 0 -> S; S: 1 -> S; } }"));
  auto r = invariant_report(t);
  for (const auto& [k, c] : r.n) CHECK(c.is_zero());
  CHECK(r.end_count.is_infinite());
  auto cantor = invariant_report(support::tree({{"A", 0, {"A", "A"}}}, "A", 3));
  CHECK(r.table == cantor.table);
  CHECK(isomorphic(t, support::tree({{"A", 0, {"A", "A"}}}, "A", 3)).verdict == Verdict::Yes);
}

TEST_CASE("full binary end space, colour 2 along 0^w") {
  auto t = realize(spec_of(
      "endspace { palette [S3, S2xS1, P2]; E { root S; S: 0 -> S; S: 1 -> S; } subset 2 { allow 0; } }"));
  CHECK(serialize(t) ==
        "tree { palette [S3, S2xS1, P2]; root P0_2; P0_2: 0 -> [L2, P0, P0_2]; P0: 0 -> [P0, P0]; L2: 2 -> []; }\n");
  auto r = invariant_report(t);
  CHECK(r.n.at(2).is_infinite());
  CHECK(r.n.at(1).is_zero());
  auto e = end_space(t);
  CHECK(ends_within(e, 2) == Count::nat(1));
  // and that end is the all-zeros branch, which stays in the root state
  CHECK(e.states[*e.root].flags == ColourSet{2});
}

TEST_CASE("single branch with a finite count") {
  auto t = realize(spec_of("endspace { palette [S3, S2xS1, P2, P3]; E { root S; S: 0 -> S; } count 3 = 2; }"));
  CHECK(serialize(t) ==
        "tree { palette [S3, S2xS1, P2, P3]; root R; C3_1: 3 -> [C3_2]; C3_2: 3 -> []; P0: 0 -> [P0]; "
        "R: 0 -> [C3_1, P0]; }\n");
  auto r = invariant_report(t);
  CHECK(r.n.at(3) == Count::nat(2));
  CHECK(r.n.at(2).is_zero());
  CHECK(r.end_count == Count::nat(1));
  CHECK(*r.signatures == std::multiset<EndSignature>{{}});
}

TEST_CASE("empty end space gives a closed manifold") {
  auto t = realize(spec_of("endspace { palette [S3, S2xS1, P2]; E { } count 2 = 3; count 1 = 1; }"));
  CHECK(t.generates_finite_tree());
  auto r = invariant_report(t);
  CHECK(r.closed());
  CHECK(r.n.at(2) == Count::nat(3));
  CHECK(r.n.at(1) == Count::nat(1));

  auto bare = realize(spec_of("endspace { palette [S3, S2xS1]; E { } }"));
  CHECK(bare.size() == 1);
}

TEST_CASE("invalid specs") {
  auto base = spec_of("endspace { palette [S3, S2xS1, P2, P3]; E { root S; S: 0 -> S; S: 1 -> T; T: 1 -> T; } }");
  CHECK_NOTHROW(realize(base));

  auto dead = base;
  dead.ends.add_state("D");
  dead.ends.next[*base.ends.find("T")][0] = dead.ends.size() - 1;
  CHECK(invalid(dead) == Errc::InvalidSpec);

  auto low = base;
  low.subsets[1] = TransitionMask(base.ends.size(), {true, false});
  CHECK(invalid(low) == Errc::InvalidSpec);

  auto clash = base;
  clash.subsets[2] = TransitionMask(base.ends.size(), {false, true});
  clash.finite_counts[2] = 1;
  CHECK(invalid(clash) == Errc::InvalidSpec);

  auto missing = base;
  missing.subsets[2] = TransitionMask(base.ends.size(), {true, true});  // T has no 0-transition
  CHECK(invalid(missing) == Errc::InvalidSpec);

  auto off_palette = base;
  off_palette.finite_counts[4] = 1;
  CHECK(invalid(off_palette) == Errc::InvalidSpec);

  auto reserved = base;
  reserved.finite_counts[0] = 1;
  CHECK(invalid(reserved) == Errc::InvalidSpec);
}

TEST_CASE("subset liveness") {
  auto s = spec_of(
      "endspace { palette [S3, S2xS1, P2]; E { root S; S: 0 -> T; S: 1 -> S; T: 0 -> T; } subset 2 { allow S 0; } }");
  // E_2 may leave S by 0 but never continue from T, so it is empty
  const auto live = subset_live_states(s, 2);
  CHECK(live == std::vector<bool>{false, false});
  CHECK(invariant_report(realize(s)).n.at(2).is_zero());
}

TEST_CASE("roundtrip against branch sampling") {
  gen::Rng rng(701);
  std::size_t finite = 0, infinite = 0;
  for (int i = 0; i < 300; ++i) {
    const auto spec = gen::spec(rng);
    const auto t = realize(spec);
    const auto r = invariant_report(t);
    INFO(serialize(spec));

    for (Colour k = 1; k < spec.palette.size(); ++k) {
      if (spec.subsets.count(k))
        REQUIRE(r.n.at(k).is_infinite() == oracle::subset_nonempty(spec, k));
      else if (spec.finite_counts.count(k))
        REQUIRE(r.n.at(k) == Count::nat(spec.finite_counts.at(k)));
      else
        REQUIRE(r.n.at(k).is_zero());
      if (spec.subsets.count(k) && !r.n.at(k).is_infinite()) REQUIRE(r.n.at(k).is_zero());
    }

    const auto branches = oracle::finite_branches(spec);
    if (branches) {
      ++finite;
      REQUIRE(r.end_count == Count::nat(branches->size()));
      std::multiset<EndSignature> expected;
      for (const auto& w : *branches) expected.insert(oracle::expected_signature(spec, w));
      REQUIRE(*r.signatures == expected);
    } else {
      ++infinite;
      REQUIRE(r.end_count.is_infinite());
    }
  }
  CHECK(finite > 50);
  CHECK(infinite > 50);
}

TEST_CASE("state count stays within the product bound") {
  gen::Rng rng(702);
  for (int i = 0; i < 300; ++i) {
    const auto spec = gen::spec(rng);
    std::size_t counted = 0;
    for (const auto& [j, n] : spec.finite_counts) counted += n;
    const std::size_t s = spec.subsets.size();
    REQUIRE(realize(spec).size() <= spec.ends.size() * (std::size_t(1) << s) + s + counted + 1);
  }
}

TEST_CASE("the leaf states can exceed the bound without them") {
  auto spec = spec_of(
      "endspace { palette [S3, S2xS1, P2, P3]; E { root S; S: 0 -> S; S: 1 -> S; } "
      "subset 2 { allow 0; } subset 3 { allow 1; } }");
  CHECK(realize(spec).size() == 6);
}

TEST_CASE("equal specs give equal automata") {
  gen::Rng rng(703);
  for (int i = 0; i < 200; ++i) {
    const auto spec = gen::spec(rng);
    const auto again = std::get<EndSpaceSpec>(parse(serialize(spec)));
    REQUIRE(realize(spec) == realize(again));
    REQUIRE(serialize(realize(spec)) == serialize(realize(again)));
  }
}
