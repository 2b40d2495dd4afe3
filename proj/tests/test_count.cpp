#include <catch_amalgamated.hpp>

#include <random>

#include "m3s/count.hpp"

using m3s::Count;

TEST_CASE("finite counts add like integers") {
  CHECK(Count::nat(2) + Count::nat(3) == Count::nat(5));
  CHECK((Count::nat(4) * 3) == Count::nat(12));
  CHECK(Count::nat(0).is_zero());
  CHECK_FALSE(Count::infinity().is_zero());
}

TEST_CASE("infinity absorbs addition") {
  CHECK(Count::nat(7) + Count::infinity() == Count::infinity());
  CHECK(Count::infinity() + Count::nat(0) == Count::infinity());
  CHECK((Count::infinity() * 2).is_infinite());
  CHECK((Count::infinity() * 0) == Count::nat(0));
}

TEST_CASE("order puts infinity on top") {
  CHECK(Count::nat(0) < Count::nat(1));
  CHECK(Count::nat(1'000'000) < Count::infinity());
  CHECK_FALSE(Count::infinity() < Count::infinity());
}

TEST_CASE("overflow is an error, not a wrap") {
  const auto big = Count::nat(std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(big + Count::nat(1), std::overflow_error);
  CHECK_THROWS_AS(big * 2, std::overflow_error);
  CHECK_THROWS_AS(Count::infinity().value(), std::logic_error);
}

TEST_CASE("text form") {
  CHECK(Count::nat(3).to_string() == "3");
  CHECK(Count::infinity().to_string() == "infinity");
}

TEST_CASE("addition is commutative, associative and monotone") {
  std::mt19937_64 rng(11);
  auto draw = [&] {
    std::uniform_int_distribution<int> d(0, 9);
    const int x = d(rng);
    return x == 9 ? Count::infinity() : Count::nat(std::uint64_t(x) * 1000);
  };
  for (int i = 0; i < 500; ++i) {
    const Count a = draw(), b = draw(), c = draw();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a <= a + b);
  }
}
