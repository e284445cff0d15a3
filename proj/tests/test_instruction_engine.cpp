#include "mermin/errors.hpp"
#include "mermin/instruction_engine.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mermin;

namespace {

ProbabilityVector8 from_array(std::array<Rational, 8> const& w) { return ProbabilityVector8::validate(w); }

ProbabilityVector8 mix(ProbabilityVector8 const& x, ProbabilityVector8 const& y, Rational const& t) {
  std::array<Rational, 8> w;
  for (int i = 0; i < 8; ++i) w[static_cast<std::size_t>(i)] = t * x[i] + (1 - t) * y[i];
  return from_array(w);
}

}  // namespace

TEST_SUITE("instruction_engine") {

TEST_CASE("row averages") {
  CHECK(row_average(InstructionSet::parse("RRR")) == 1);
  CHECK(row_average(InstructionSet::parse("GGG")) == 1);
  for (auto lambda : all_instruction_sets()) {
    if (lambda.mixed()) CHECK(row_average(lambda) == Rational(1, 9));
  }
}

TEST_CASE("uniform weights give 1/3") {
  auto const report = average_eq1(ProbabilityVector8::uniform());
  CHECK(report.average == Rational(1, 3));
  CHECK(report.satisfied);
  CHECK(report.margin == Rational(2, 9));
  CHECK_FALSE(report.equality());
}

TEST_CASE("point masses") {
  auto const mixed = average_eq1(ProbabilityVector8::point_mass(InstructionSet::parse("RRG")));
  CHECK(mixed.average == Rational(1, 9));
  CHECK(mixed.equality());
  REQUIRE(mixed.equality_rows.size() == 1);
  CHECK(mixed.equality_rows[0].name() == "RRG");

  auto const pure = average_eq1(ProbabilityVector8::point_mass(InstructionSet::parse("GGG")));
  CHECK(pure.average == 1);
  CHECK(pure.equality_rows.empty());
}

TEST_CASE("square sums and the second route") {
  CHECK(square_sum(InstructionSet::parse("RRR")) == 9);
  CHECK(square_sum(InstructionSet::parse("GRG")) == 1);
  for (auto lambda : all_instruction_sets()) CHECK(condition_i_holds(lambda));
  CHECK(average_eq2(ProbabilityVector8::uniform()) == Rational(1, 3));
}

TEST_CASE("floating evaluation agrees") {
  Eigen::Matrix<double, 8, 1> p = Eigen::Matrix<double, 8, 1>::Constant(0.125);
  CHECK(table_average(p) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("target comparison") {
  auto const near = compare_to_target(Rational(1, 100), 0.05);
  CHECK(near.within);
  auto const far = compare_to_target(Rational(1, 3), 0.05);
  CHECK_FALSE(far.within);
  CHECK(compare_to_target(Rational(1, 2), 0.01, 0.5).within);
}

TEST_CASE("property: both routes agree with the brute-force sum") {
  RandomStream rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto const w = oracle::random_weights(rng);
    auto const p = from_array(w);
    Rational const expected = oracle::brute_force_average(w);
    REQUIRE(average_eq1(p).average == expected);
    REQUIRE(average_eq2(p) == expected);
  }
}

TEST_CASE("property: bound holds, equality exactly on mixed support") {
  RandomStream rng(12);
  int equalities = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto const p = oracle::random_probability_vector(rng);
    auto const report = average_eq1(p);
    REQUIRE(report.average >= Rational(1, 9));
    REQUIRE(report.satisfied);
    REQUIRE(report.equality() == p.supported_on_mixed_rows());
    // The pure rows each add 8/9 of their weight above the bound.
    REQUIRE(report.margin == Rational(8, 9) * (p[0] + p[7]));
    equalities += report.equality() ? 1 : 0;
  }
  CHECK(equalities > 100);
}

TEST_CASE("property: the average is affine in p") {
  RandomStream rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    auto const x = oracle::random_probability_vector(rng);
    auto const y = oracle::random_probability_vector(rng);
    Rational const t(Integer(rng.below(11)), Integer(10));
    auto const lhs = average_eq1(mix(x, y, t)).average;
    auto const rhs = t * average_eq1(x).average + (1 - t) * average_eq1(y).average;
    REQUIRE(lhs == rhs);
  }
}

}
