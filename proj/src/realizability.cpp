#include "mermin/realizability.hpp"

#include "mermin/errors.hpp"
#include "mermin/exact_simplex.hpp"

#include <cassert>

namespace mermin {

void PairDistribution::validate() const {
  Rational sum = 0;
  for (int cell = 0; cell < 4; ++cell) {
    if (probs(cell) < 0) {
      throw InvalidTables("table " + to_string(pair) + " cell " + std::string(cell_label(cell)) +
                          " is negative: " + to_string(probs(cell)));
    }
    sum += probs(cell);
  }
  if (sum != 1) throw InvalidTables("table " + to_string(pair) + " sums to " + to_string(sum));
}

NineDistributions::NineDistributions() {
  for (int i = 0; i < kPairCount; ++i) tables[static_cast<std::size_t>(i)].pair = SettingPair::from_index(i);
}

void NineDistributions::validate() const {
  for (int i = 0; i < kPairCount; ++i) {
    auto const& table = tables[static_cast<std::size_t>(i)];
    if (table.pair.index() != i) {
      throw InvalidTables("table for " + to_string(table.pair) + " filed under " + to_string(SettingPair::from_index(i)));
    }
    table.validate();
  }
}

Vector<Rational, 36> NineDistributions::stacked() const {
  Vector<Rational, 36> out;
  for (int i = 0; i < kPairCount; ++i) out.segment<4>(4 * i) = tables[static_cast<std::size_t>(i)].probs;
  return out;
}

NineDistributions nine_from_p(ProbabilityVector8 const& p) {
  Vector<Rational, 36> const cells = forward_matrix<Rational>() * p.values();
  NineDistributions out;
  for (int i = 0; i < kPairCount; ++i) out.tables[static_cast<std::size_t>(i)].probs = cells.segment<4>(4 * i);
  return out;
}

NineDistributions quantum_target_tables() {
  NineDistributions out;
  for (auto& table : out.tables) {
    if (table.pair.diagonal()) {
      table(Outcome::green, Outcome::green) = Rational(1, 2);
      table(Outcome::red, Outcome::red) = Rational(1, 2);
    } else {
      // Agreement 1/4 split evenly, disagreement 3/4 split evenly.
      table(Outcome::green, Outcome::green) = Rational(1, 8);
      table(Outcome::red, Outcome::red) = Rational(1, 8);
      table(Outcome::green, Outcome::red) = Rational(3, 8);
      table(Outcome::red, Outcome::green) = Rational(3, 8);
    }
  }
  return out;
}

Marginal first_marginal(PairDistribution const& d) {
  return {d(Outcome::green, Outcome::green) + d(Outcome::green, Outcome::red),
          d(Outcome::red, Outcome::green) + d(Outcome::red, Outcome::red)};
}

Marginal second_marginal(PairDistribution const& d) {
  return {d(Outcome::green, Outcome::green) + d(Outcome::red, Outcome::green),
          d(Outcome::green, Outcome::red) + d(Outcome::red, Outcome::red)};
}

MarginalReport marginal_consistency(NineDistributions const& nine) {
  MarginalReport report;
  for (int station = 1; station <= 2; ++station) {
    for (auto s : kSettings) {
      SettingMarginalCheck check;
      check.station = station;
      check.setting = s;
      for (auto remote : kSettings) {
        auto const pair = station == 1 ? SettingPair{s, remote} : SettingPair{remote, s};
        check.marginals[static_cast<std::size_t>(index(remote))] =
            station == 1 ? first_marginal(nine[pair]) : second_marginal(nine[pair]);
      }
      for (std::size_t k = 0; k < 3; ++k) {
        check.discrepancies[k] = check.marginals[k].green - check.marginals[0].green;
        if (check.discrepancies[k] != 0) check.consistent = false;
      }
      report.consistent = report.consistent && check.consistent;
      report.checks.push_back(std::move(check));
    }
  }
  return report;
}

RealizabilityResult joint_realizability(NineDistributions const& nine) {
  nine.validate();

  lp::Matrix<Rational> const A = forward_matrix<Rational>();
  lp::ColumnVector<Rational> const b = nine.stacked();
  auto const solved = lp::ExactSimplex<Rational>(A, b).solve();

  RealizabilityResult result;
  if (solved.feasible) {
    result.status = RealizabilityStatus::feasible;
    std::vector<Rational> raw(solved.point.data(), solved.point.data() + solved.point.size());
    result.witness = ProbabilityVector8::validate(raw);
  } else {
    result.status = RealizabilityStatus::infeasible;
    result.certificate = InfeasibilityCertificate{solved.certificate};
  }
  return result;
}

RealizabilityGap realizability_gap(NineDistributions const& nine) {
  nine.validate();
  // Columns: gap, p (8), upper slacks (36), lower slacks (36). The gap comes
  // first so the lexicographic minimum minimises it before anything else.
  constexpr int kCells = 36;
  constexpr int kGap = 0;
  constexpr int kP = 1;
  constexpr int kUpper = kP + 8;
  constexpr int kLower = kUpper + kCells;
  constexpr int kCols = kLower + kCells;

  auto const M = forward_matrix<Rational>();
  Vector<Rational, 36> const b = nine.stacked();
  lp::Matrix<Rational> A = lp::Matrix<Rational>::Zero(2 * kCells + 1, kCols);
  lp::ColumnVector<Rational> rhs(2 * kCells + 1);
  for (int k = 0; k < kCells; ++k) {
    // (M p)_k - gap + u_k = b_k  and  (M p)_k + gap - v_k = b_k
    A.block<1, 8>(k, kP) = M.row(k);
    A(k, kGap) = -1;
    A(k, kUpper + k) = 1;
    rhs(k) = b(k);
    A.block<1, 8>(kCells + k, kP) = M.row(k);
    A(kCells + k, kGap) = 1;
    A(kCells + k, kLower + k) = -1;
    rhs(kCells + k) = b(k);
  }
  A.block<1, 8>(2 * kCells, kP).setOnes();
  rhs(2 * kCells) = 1;

  auto const solved = lp::ExactSimplex<Rational>(A, rhs).solve();
  assert(solved.feasible);
  std::vector<Rational> raw(solved.point.data() + kP, solved.point.data() + kP + 8);
  return {solved.point(kGap), ProbabilityVector8::validate(raw)};
}

bool verify_certificate(InfeasibilityCertificate const& cert, NineDistributions const& nine) {
  if (cert.coefficients.size() != 36) {
    throw MalformedCertificate("certificate needs 36 coefficients, got " + std::to_string(cert.coefficients.size()));
  }
  return lp::is_farkas_certificate(cert.coefficients, forward_matrix<Rational>(), nine.stacked());
}

Rational average_from_nine(NineDistributions const& nine) {
  Rational total = 0;
  for (auto const& table : nine.tables) {
    for (int cell = 0; cell < 4; ++cell) {
      total += Rational(value(cell_left(cell)) * value(cell_right(cell))) * table.probs(cell);
    }
  }
  return total / 9;
}

}  // namespace mermin
