#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace m3s;
using support::graph;
using support::tree;

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Syntax;
}

TEST_CASE("validate_finite accepts the smallest presentations") {
  auto g = graph({{"v0", 0}}, {});
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 0);

  auto h = graph({{"v0", 2}, {"v1", 3}}, {{"v0", "v1"}});
  CHECK(h.degree(*h.find("v0")) == 1);
}

TEST_CASE("a loop adds two to the degree") {
  auto g = graph({{"v0", 2}}, {{"v0", "v0"}, {"v0", "v0"}});
  CHECK(g.degree(0) == 4);
}

TEST_CASE("validate_finite reports components") {
  try {
    graph({{"v0", 2}, {"v1", 3}}, {});
    FAIL("expected Disconnected");
  } catch (const DisconnectedError& e) {
    CHECK(e.code() == Errc::Disconnected);
    REQUIRE(e.components().size() == 2);
    CHECK(e.components()[0] == std::vector<std::string>{"v0"});
    CHECK(e.components()[1] == std::vector<std::string>{"v1"});
  }
}

TEST_CASE("validate_finite errors") {
  CHECK(code_of([] { graph({}, {}); }) == Errc::EmptyGraph);
  CHECK(code_of([] { graph({{"v0", 9}}, {}); }) == Errc::BadColourIndex);
  CHECK(code_of([] { graph({{"v0", 2}, {"v0", 3}}, {}); }) == Errc::DuplicateId);
  CHECK(code_of([] { graph({{"v0", 2}}, {{"v0", "v7"}}); }) == Errc::UnknownId);
  CHECK(code_of([] { validate_finite({Palette({"S3", "P2"}), {{"v0", 0}}, {}}); }) == Errc::BadPalette);
  CHECK(code_of([] { validate_finite({Palette({"S3", "S2xS1", "P", "P"}), {{"v0", 0}}, {}}); }) ==
        Errc::BadPalette);
}

TEST_CASE("bad colour names the vertex") {
  try {
    graph({{"v0", 2}, {"v1", 7}}, {{"v0", "v1"}});
    FAIL("expected BadColourIndex");
  } catch (const Error& e) {
    REQUIRE(e.subjects().size() == 1);
    CHECK(e.subjects()[0] == "v1");
  }
}

TEST_CASE("validate_regular: a single self-loop state") {
  auto p = tree({{"A", 2, {"A"}}});
  CHECK(p.finite_states().empty());
  CHECK_FALSE(p.generates_finite_tree());
}

TEST_CASE("validate_regular: finite states") {
  auto p = tree({{"A", 0, {"A", "B"}}, {"B", 2, {}}});
  CHECK(p.finite_states() == std::vector<std::string>{"B"});
}

TEST_CASE("validate_regular errors") {
  try {
    tree({{"A", 0, {"A"}}, {"C", 2, {}}});
    FAIL("expected UnreachableState");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnreachableState);
    CHECK(e.subjects() == std::vector<std::string>{"C"});
  }
  CHECK(code_of([] { tree({{"A", 0, {"Z"}}}); }) == Errc::UnknownState);
  CHECK(code_of([] { tree({{"A", 4, {}}}); }) == Errc::BadColourIndex);
  CHECK(code_of([] { tree({{"A", 0, {}}}, "Q"); }) == Errc::UnknownState);
  CHECK(code_of([] { tree({{"A", 0, {}}, {"A", 0, {}}}); }) == Errc::DuplicateId);
}

TEST_CASE("children are a multiset") {
  auto p = tree({{"A", 0, {"C", "B", "C"}}, {"B", 2, {}}, {"C", 3, {}}});
  auto q = tree({{"A", 0, {"C", "C", "B"}}, {"B", 2, {}}, {"C", 3, {}}});
  CHECK(p == q);
}

TEST_CASE("unfold examples") {
  auto ray = tree({{"A", 2, {"A"}}});
  auto root_only = unfold(ray, 0);
  CHECK(root_only.size() == 1);
  CHECK(root_only.nodes[0].colour == 2);

  auto chain = unfold(ray, 3);
  CHECK(chain.size() == 4);
  CHECK(chain.count_colour(2) == 4);

  auto binary = unfold(tree({{"A", 0, {"A", "A"}}}), 2);
  CHECK(binary.size() == 7);
  CHECK(binary.count_colour(0) == 7);
}

TEST_CASE("FiniteTree paths") {
  auto t = unfold(tree({{"A", 0, {"A", "A"}}}), 2);
  CHECK(t.path(0).empty());
  CHECK(t.path(t.nodes[t.nodes[0].children[1]].children[0]) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("unfold(d) is unfold(d+1) minus its deepest level") {
  gen::Rng rng(101);
  for (int round = 0; round < 200; ++round) {
    auto p = gen::automaton(rng);
    for (std::size_t d = 0; d < 4; ++d) {
      auto small = unfold(p, d);
      auto big = unfold(p, d + 1);
      std::size_t kept = 0;
      for (const auto& node : big.nodes) kept += node.depth <= d;
      REQUIRE(kept == small.size());
      // breadth-first numbering makes the shallow part a prefix
      for (std::size_t i = 0; i < small.size(); ++i) {
        CHECK(small.nodes[i].colour == big.nodes[i].colour);
        CHECK(small.nodes[i].state == big.nodes[i].state);
        CHECK(small.nodes[i].parent == big.nodes[i].parent);
      }
    }
  }
}

TEST_CASE("unfold size matches the path-count oracle") {
  gen::Rng rng(102);
  for (int round = 0; round < 300; ++round) {
    auto p = gen::automaton(rng);
    for (std::size_t d = 0; d <= 5; ++d) REQUIRE(unfold(p, d).size() == oracle::unfold_size(p, d));
  }
}

TEST_CASE("finite states are exactly those whose unfolding stabilizes") {
  gen::Rng rng(103);
  for (int round = 0; round < 300; ++round) {
    auto p = gen::automaton(rng);
    for (std::size_t s = 0; s < p.size(); ++s) {
      auto q = support::rooted_at(p, s);
      bool stabilizes = false;
      for (std::size_t d = 0; d <= q.size() && !stabilizes; ++d)
        stabilizes = oracle::unfold_size(q, d) == oracle::unfold_size(q, d + 1);
      REQUIRE(p.is_finite_state(s) == stabilizes);
    }
  }
}
