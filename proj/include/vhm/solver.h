#pragma once

#include "vhm/types.h"

#include <Eigen/SparseCholesky>

namespace vhm {

namespace detail {
void countFactorization();
}

/// Number of sparse factorizations computed so far; lets callers assert that
/// repeated solves reuse a prefactored matrix.
long factorizationCount();
void resetFactorizationCount();

/// Prefactored positive (semi)definite sparse matrix. Construction is
/// exclusive; solves on a built factorization are const and race-free.
/// One step of iterative refinement keeps residuals near 1e-8 relative.
template <typename Scalar>
class Factorization {
 public:
  using Matrix = Eigen::SparseMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Factorization(const Matrix& A) : matrix_(A) {
    matrix_.makeCompressed();
    ldlt_.compute(matrix_);
    if (ldlt_.info() != Eigen::Success)
      throw Error("factorization failed; matrix is not positive semidefinite "
                  "(consider the intrinsic Delaunay path)");
    const auto& d = ldlt_.vectorD();
    double dMax = d.real().maxCoeff();
    if (d.real().minCoeff() < -1e-10 * std::max(dMax, 1.0))
      throw Error("matrix is indefinite; run intrinsic Delaunay "
                  "retriangulation before solving");
    detail::countFactorization();
  }

  Vector solve(const Vector& b) const {
    if (b.size() != matrix_.rows())
      throw Error("backsolve dimension mismatch: matrix is " +
                  std::to_string(matrix_.rows()) + ", right-hand side is " +
                  std::to_string(b.size()));
    Vector x = ldlt_.solve(b);
    x += ldlt_.solve(b - matrix_ * x).eval();
    return x;
  }

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  long nonZeros() const { return matrix_.nonZeros(); }

 private:
  Matrix matrix_;
  Eigen::SimplicialLDLT<Matrix> ldlt_;
};

using RealFactorization = Factorization<double>;
using ComplexFactorization = Factorization<Complex>;

/// Copy of a positive semidefinite matrix with one row/column replaced by the
/// identity, removing the constant null space of pure-Neumann Poisson
/// systems. Solutions of the pinned system satisfy x[vertex] = 0 when the
/// right-hand side entry at the pinned vertex is zeroed.
SparseReal pinVertex(const SparseReal& A, int vertex);

} // namespace vhm
