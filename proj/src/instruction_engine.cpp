#include "mermin/instruction_engine.hpp"

#include <cmath>

namespace mermin {

Rational row_average(InstructionSet lambda) {
  return Rational(product_table().row(lambda.row()).sum(), 9);
}

BoundReport average_eq1(ProbabilityVector8 const& p) {
  BoundReport report;
  report.average = table_average(p.values());
  report.margin = report.average - report.bound;
  report.satisfied = report.margin >= 0;
  for (auto lambda : all_instruction_sets()) {
    if (p[lambda] > 0 && row_average(lambda) == report.bound) report.equality_rows.push_back(lambda);
  }
  return report;
}

int square_sum(InstructionSet lambda) {
  int const sum = color_matrix().row(lambda.row()).sum();
  return sum * sum;
}

bool condition_i_holds(InstructionSet lambda) {
  // A_j B_j = +1 on a +-1 valued pair is the same statement as A_j = B_j.
  auto const table = product_table();
  for (auto s : kSettings) {
    if (table(lambda.row(), SettingPair{s, s}.index()) != 1) return false;
  }
  return true;
}

Rational average_eq2(ProbabilityVector8 const& p) {
  Rational total = 0;
  for (auto lambda : all_instruction_sets()) {
    if (p[lambda] == 0) continue;
    int const a_sum = color_matrix().row(lambda.row()).sum();
    int const b_sum = a_sum;
    total += p[lambda] * Rational(a_sum * b_sum);
  }
  return total / 9;
}

TargetComparison compare_to_target(Rational const& average, double tolerance, double target) {
  TargetComparison out;
  out.value = to_double(average);
  out.target = target;
  out.tolerance = tolerance;
  out.within = std::abs(out.value - target) <= tolerance;
  return out;
}

}  // namespace mermin
