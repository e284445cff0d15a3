#pragma once

#include "mermin/core_types.hpp"

#include <optional>
#include <vector>

namespace mermin {

//---------------------------------------------------------------------------//
// Pair distributions
//---------------------------------------------------------------------------//

/// Joint law of (outcome1, outcome2) for one setting pair. Cells are stored in
/// the canonical order (+,+), (+,-), (-,+), (-,-).
struct PairDistribution {
  SettingPair pair;
  Vector<Rational, 4> probs = Vector<Rational, 4>::Zero();

  Rational const& operator()(Outcome left, Outcome right) const { return probs(cell_index(left, right)); }
  Rational& operator()(Outcome left, Outcome right) { return probs(cell_index(left, right)); }

  /// Throws InvalidTables when a cell is negative or the cells do not sum to 1.
  void validate() const;

  friend bool operator==(PairDistribution const& x, PairDistribution const& y) {
    return x.pair == y.pair && x.probs == y.probs;
  }
};

/// One distribution per setting pair, indexed by SettingPair::index().
struct NineDistributions {
  std::array<PairDistribution, 9> tables;

  NineDistributions();

  PairDistribution const& operator[](SettingPair p) const { return tables[static_cast<std::size_t>(p.index())]; }
  PairDistribution& operator[](SettingPair p) { return tables[static_cast<std::size_t>(p.index())]; }

  /// Throws InvalidTables on a bad table or a table filed under the wrong pair.
  void validate() const;

  /// All 36 cells stacked pair by pair.
  Vector<Rational, 36> stacked() const;

  friend bool operator==(NineDistributions const& x, NineDistributions const& y) { return x.tables == y.tables; }
};

/// Pushes a distribution over instruction sets forward to the nine tables.
NineDistributions nine_from_p(ProbabilityVector8 const& p);

/// 36x8 incidence matrix: entry (4*pair + cell, row) is 1 when instruction set
/// `row` produces `cell` under `pair`. nine_from_p(p).stacked() == M * p.
template <typename Scalar>
Eigen::Matrix<Scalar, 36, 8> forward_matrix() {
  Eigen::Matrix<Scalar, 36, 8> m = Eigen::Matrix<Scalar, 36, 8>::Zero();
  for (auto lambda : all_instruction_sets()) {
    for (int pair = 0; pair < kPairCount; ++pair) {
      auto const p = SettingPair::from_index(pair);
      int const cell = cell_index(lambda.color(p.left), lambda.color(p.right));
      m(4 * pair + cell, lambda.row()) = Scalar(1);
    }
  }
  return m;
}

/// Tables with perfect agreement on equal settings and product expectation
/// -1/2 (agreement 1/4) on unequal settings, all marginals uniform.
NineDistributions quantum_target_tables();

//---------------------------------------------------------------------------//
// Marginals
//---------------------------------------------------------------------------//

struct Marginal {
  Rational green;  ///< probability of +1
  Rational red;    ///< probability of -1

  friend bool operator==(Marginal const&, Marginal const&) = default;
};

Marginal first_marginal(PairDistribution const& d);
Marginal second_marginal(PairDistribution const& d);

/// How one station's outcome law varies across the three remote settings.
struct SettingMarginalCheck {
  int station = 1;   ///< 1 for S1 (first marginal), 2 for S2 (second marginal)
  Setting setting = Setting::a;
  std::array<Marginal, 3> marginals;  ///< one per remote setting, canonical order
  /// P(+1) in context k minus P(+1) in context a.
  std::array<Rational, 3> discrepancies;
  bool consistent = true;
};

struct MarginalReport {
  std::vector<SettingMarginalCheck> checks;  ///< S1 a, b, c then S2 a, b, c
  bool consistent = true;
};

MarginalReport marginal_consistency(NineDistributions const& nine);

//---------------------------------------------------------------------------//
// Joint realizability
//---------------------------------------------------------------------------//

/// Coefficients, one per stacked cell constraint, combining the 36 equalities
/// into a contradiction.
struct InfeasibilityCertificate {
  Vector<Rational, Eigen::Dynamic> coefficients;
};

enum class RealizabilityStatus { feasible, infeasible };

struct RealizabilityResult {
  RealizabilityStatus status = RealizabilityStatus::infeasible;
  std::optional<ProbabilityVector8> witness;
  std::optional<InfeasibilityCertificate> certificate;

  bool feasible() const { return status == RealizabilityStatus::feasible; }
};

/// Decides exactly whether one setting-independent law over instruction sets
/// reproduces all nine tables. Throws InvalidTables on malformed input.
RealizabilityResult joint_realizability(NineDistributions const& nine);

/// True iff y^T M >= 0 on every instruction-set coordinate and y^T b < 0,
/// where M is forward_matrix() and b the stacked tables. Throws
/// MalformedCertificate when the coefficient count is not 36.
bool verify_certificate(InfeasibilityCertificate const& cert, NineDistributions const& nine);

/// Smallest uniform cell error at which the tables become realizable:
/// gap = min over p of max |nine_from_p(p) - nine| over the 36 cells, with the
/// lexicographically smallest minimiser. gap == 0 exactly when realizable.
/// Empirical tables from finite samples are almost never exactly realizable;
/// the gap tells sampling noise (small) from structural infeasibility.
struct RealizabilityGap {
  Rational gap;
  ProbabilityVector8 nearest = ProbabilityVector8::uniform();
};

RealizabilityGap realizability_gap(NineDistributions const& nine);

/// (1/9) sum over pairs and cells of x*y*P(x,y).
Rational average_from_nine(NineDistributions const& nine);

}  // namespace mermin
