#pragma once

#include <Eigen/Core>

#include <cassert>
#include <vector>

namespace mermin::lp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ColumnVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Result of deciding { x >= 0 : A x = b }.
template <typename Scalar>
struct FeasibilityOutcome {
  bool feasible = false;
  /// Lexicographically smallest feasible point (set when feasible).
  ColumnVector<Scalar> point;
  /// y with y^T A >= 0 componentwise and y^T b < 0 (set when infeasible).
  ColumnVector<Scalar> certificate;
  int pivots = 0;
};

/// Dense two-phase simplex for equality-form feasibility over an exact ordered
/// field (intended for rationals). Phase one minimises the sum of artificial
/// variables with Bland's rule; its duals give a Farkas certificate when the
/// optimum is positive. Phase two minimises x_0, then x_1, ... as a single
/// lexicographic objective, which lands on the lexicographically smallest
/// vertex. Redundant equality rows are tolerated: their artificial stays basic
/// at zero and never becomes a pivot row.
template <typename Scalar>
class ExactSimplex {
 public:
  ExactSimplex(Matrix<Scalar> const& A, ColumnVector<Scalar> const& b)
      : rows_(static_cast<int>(A.rows())),
        cols_(static_cast<int>(A.cols())),
        rhs_(cols_ + rows_),
        sign_(rows_, 1),
        basis_(rows_) {
    assert(b.size() == A.rows());
    tableau_ = Matrix<Scalar>::Zero(rows_ + 1, cols_ + rows_ + 1);
    for (int i = 0; i < rows_; ++i) {
      sign_[i] = b(i) < Scalar(0) ? -1 : 1;
      for (int j = 0; j < cols_; ++j) tableau_(i, j) = sign_[i] < 0 ? Scalar(-A(i, j)) : A(i, j);
      tableau_(i, rhs_) = sign_[i] < 0 ? Scalar(-b(i)) : b(i);
      tableau_(i, cols_ + i) = Scalar(1);
      basis_[i] = cols_ + i;
    }
    // Phase-one cost row: reduced costs of "sum of artificials".
    for (int j = 0; j < cols_; ++j) {
      Scalar s(0);
      for (int i = 0; i < rows_; ++i) s -= tableau_(i, j);
      tableau_(rows_, j) = s;
    }
    Scalar s(0);
    for (int i = 0; i < rows_; ++i) s -= tableau_(i, rhs_);
    tableau_(rows_, rhs_) = s;
  }

  FeasibilityOutcome<Scalar> solve() {
    FeasibilityOutcome<Scalar> out;
    run_phase_one();

    Scalar const infeasibility = -tableau_(rows_, rhs_);
    if (infeasibility > Scalar(0)) {
      out.feasible = false;
      out.certificate = ColumnVector<Scalar>(rows_);
      for (int i = 0; i < rows_; ++i) {
        // Dual of row i is 1 - reduced cost of its artificial column.
        Scalar const dual = Scalar(1) - tableau_(rows_, cols_ + i);
        out.certificate(i) = sign_[i] < 0 ? dual : Scalar(-dual);
      }
      out.pivots = pivots_;
      return out;
    }

    drive_out_artificials();
    run_lexicographic_phase_two();

    out.feasible = true;
    out.point = ColumnVector<Scalar>::Zero(cols_);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) out.point(basis_[i]) = tableau_(i, rhs_);
    }
    out.pivots = pivots_;
    return out;
  }

 private:
  void pivot(int row, int col) {
    ++pivots_;
    Scalar const inv = Scalar(1) / tableau_(row, col);
    std::vector<int> support;
    for (int j = 0; j <= rhs_; ++j) {
      if (tableau_(row, j) != Scalar(0)) {
        tableau_(row, j) *= inv;
        support.push_back(j);
      }
    }
    for (int r = 0; r <= rows_; ++r) {
      if (r == row) continue;
      Scalar const factor = tableau_(r, col);
      if (factor == Scalar(0)) continue;
      for (int j : support) tableau_(r, j) -= factor * tableau_(row, j);
    }
    basis_[row] = col;
  }

  /// Bland ratio test: minimum ratio, ties to the smallest basic index.
  int leaving_row(int col) const {
    int best = -1;
    Scalar best_ratio;
    for (int i = 0; i < rows_; ++i) {
      if (!(tableau_(i, col) > Scalar(0))) continue;
      Scalar ratio = tableau_(i, rhs_) / tableau_(i, col);
      if (best < 0 || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void run_phase_one() {
    for (;;) {
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (tableau_(rows_, j) < Scalar(0)) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;
      int const leaving = leaving_row(entering);
      assert(leaving >= 0 && "phase one is bounded below by zero");
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (int j = 0; j < cols_; ++j) {
        if (tableau_(i, j) != Scalar(0) && !is_basic(j)) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  bool is_basic(int col) const {
    for (int b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

  /// Sign of the reduced-cost column of the lexicographic objective
  /// (x_0, x_1, ...): the first non-zero component decides.
  int lex_reduced_cost_sign(int col, std::vector<int> const& row_of) const {
    for (int k = 0; k < cols_; ++k) {
      Scalar r = k == col ? Scalar(1) : Scalar(0);
      if (row_of[k] >= 0) r -= tableau_(row_of[k], col);
      if (r < Scalar(0)) return -1;
      if (r > Scalar(0)) return 1;
    }
    return 0;
  }

  void run_lexicographic_phase_two() {
    for (;;) {
      std::vector<int> row_of(cols_, -1);
      for (int i = 0; i < rows_; ++i) {
        if (basis_[i] < cols_) row_of[basis_[i]] = i;
      }
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (row_of[j] >= 0) continue;
        if (lex_reduced_cost_sign(j, row_of) < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;
      int const leaving = leaving_row(entering);
      assert(leaving >= 0 && "objective is bounded below by zero");
      pivot(leaving, entering);
    }
  }

  int rows_;
  int cols_;
  int rhs_;
  std::vector<int> sign_;
  std::vector<int> basis_;
  Matrix<Scalar> tableau_;
  int pivots_ = 0;
};

template <typename DerivedA, typename DerivedB>
auto solve_feasibility(Eigen::MatrixBase<DerivedA> const& A, Eigen::MatrixBase<DerivedB> const& b) {
  using Scalar = typename DerivedA::Scalar;
  return ExactSimplex<Scalar>(A.template cast<Scalar>(), b.template cast<Scalar>()).solve();
}

/// y^T A >= 0 componentwise and y^T b < 0, evaluated exactly.
template <typename DerivedY, typename DerivedA, typename DerivedB>
bool is_farkas_certificate(Eigen::MatrixBase<DerivedY> const& y, Eigen::MatrixBase<DerivedA> const& A,
                           Eigen::MatrixBase<DerivedB> const& b) {
  using Scalar = typename DerivedA::Scalar;
  if (y.size() != A.rows() || b.size() != A.rows()) return false;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    Scalar s(0);
    for (Eigen::Index i = 0; i < A.rows(); ++i) s += y(i) * A(i, j);
    if (s < Scalar(0)) return false;
  }
  Scalar s(0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) s += y(i) * b(i);
  return s < Scalar(0);
}

}  // namespace mermin::lp
