#pragma once

#include "mermin/core_types.hpp"

#include <vector>

namespace mermin {

/// Exact check of the classical instruction-set bound.
struct BoundReport {
  Rational average;
  Rational bound{1, 9};
  bool satisfied = true;
  Rational margin;  ///< average - bound
  /// Rows carrying positive weight whose own row average equals the bound.
  std::vector<InstructionSet> equality_rows;

  bool equality() const { return margin == 0; }
};

/// Average of the nine products of one row, i.e. row sum / 9.
Rational row_average(InstructionSet lambda);

/// Row averages stacked as a vector, templated on the scalar so the same
/// weights serve exact and floating evaluation alike.
template <typename Scalar>
Vector<Scalar, 8> row_average_vector() {
  Vector<Scalar, 8> out;
  auto const table = product_table();
  for (int row = 0; row < 8; ++row) out(row) = Scalar(table.row(row).sum()) / Scalar(9);
  return out;
}

/// Sum over rows of p_l * row_average(l).
template <typename Derived>
typename Derived::Scalar table_average(Eigen::MatrixBase<Derived> const& p) {
  using Scalar = typename Derived::Scalar;
  return row_average_vector<Scalar>().dot(p.derived());
}

/// Direct route: weight each row of the product table by p.
BoundReport average_eq1(ProbabilityVector8 const& p);

/// (A_a + A_b + A_c)^2 for the colour triple; 1 or 9.
int square_sum(InstructionSet lambda);

/// Both stations read the same triple, so A_j = B_j for every setting.
bool condition_i_holds(InstructionSet lambda);

/// Factorised route: (1/9) sum_l p_l (sum_i A_i)(sum_j B_j) with B = A.
Rational average_eq2(ProbabilityVector8 const& p);

/// Compares an average against a caller-supplied target (default 0) with a
/// caller-chosen tolerance. Used to decide whether a statistic is "about" the
/// quantum value.
struct TargetComparison {
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool within = false;
};

TargetComparison compare_to_target(Rational const& average, double tolerance, double target = 0.0);

}  // namespace mermin
