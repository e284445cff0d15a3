#include "mermin/random_stream.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace mermin;

TEST_SUITE("random_stream") {

TEST_CASE("splitmix reference values") {
  RandomStream rng(1234567);
  CHECK(rng.next_u64() == 6457827717110365317ULL);
  CHECK(rng.next_u64() == 3203168211198807973ULL);
}

TEST_CASE("streams are reproducible and distinct per component") {
  RandomStream x(7, 3, StreamComponent::source);
  RandomStream y(7, 3, StreamComponent::source);
  for (int i = 0; i < 100; ++i) CHECK(x.next_u64() == y.next_u64());
  CHECK(RandomStream(7, 3, StreamComponent::source).next_u64() !=
        RandomStream(7, 3, StreamComponent::time_s1).next_u64());
  CHECK(RandomStream(7, 3, StreamComponent::source).next_u64() !=
        RandomStream(7, 4, StreamComponent::source).next_u64());
  CHECK(RandomStream(7, 3, StreamComponent::source).next_u64() !=
        RandomStream(8, 3, StreamComponent::source).next_u64());
}

TEST_CASE("below stays in range and is roughly uniform") {
  RandomStream rng(5);
  std::array<int, 9> counts{};
  int const n = 90000;
  for (int i = 0; i < n; ++i) {
    auto const k = rng.below(9);
    REQUIRE(k < 9);
    ++counts[k];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 9.0) * (c - n / 9.0) / (n / 9.0);
  CHECK(chi2 < 30.0);  // 8 degrees of freedom
  CHECK(rng.below(1) == 0);
}

TEST_CASE("bernoulli extremes are exact") {
  RandomStream rng(6);
  BernoulliThreshold never(Rational(0));
  BernoulliThreshold always(Rational(1));
  for (int i = 0; i < 10000; ++i) {
    REQUIRE_FALSE(never(rng));
    REQUIRE(always(rng));
  }
}

TEST_CASE("bernoulli frequency") {
  RandomStream rng(7);
  BernoulliThreshold coin(Rational(7, 10));
  int heads = 0;
  int const n = 100000;
  for (int i = 0; i < n; ++i) heads += coin(rng) ? 1 : 0;
  double const se = std::sqrt(0.21 / n);
  CHECK(std::abs(heads / double(n) - 0.7) < 5 * se);
}

TEST_CASE("categorical never picks zero-weight categories") {
  RandomStream rng(8);
  CategoricalThresholds pick(std::vector<Rational>{0, Rational(1, 3), 0, Rational(2, 3), 0});
  CHECK(pick.size() == 5);
  std::array<int, 5> counts{};
  for (int i = 0; i < 30000; ++i) ++counts[static_cast<std::size_t>(pick(rng))];
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  CHECK(counts[4] == 0);
  CHECK(std::abs(counts[1] / 30000.0 - 1.0 / 3.0) < 0.02);
}

TEST_CASE("categorical point mass") {
  RandomStream rng(9);
  CategoricalThresholds pick(ProbabilityVector8::point_mass(InstructionSet::parse("GGG")));
  for (int i = 0; i < 1000; ++i) REQUIRE(pick(rng) == 7);
  CategoricalThresholds first(ProbabilityVector8::point_mass(InstructionSet::parse("RRR")));
  for (int i = 0; i < 1000; ++i) REQUIRE(first(rng) == 0);
}

}
