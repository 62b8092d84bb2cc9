#include "tailrisk/linalg.hpp"

#include "tailrisk/error.hpp"

#include <string>

namespace tailrisk {

SymmetricSpectrum symmetric_eigen(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::Domain, "symmetric eigendecomposition did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_exactly_symmetric(const Matrix& a) noexcept {
  if (a.rows() != a.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i)) return false;
    }
  }
  return true;
}

bool all_finite(const Matrix& a) noexcept { return a.allFinite(); }

Matrix spd_inverse(const Matrix& a) {
  require(a.rows() == a.cols(), "spd_inverse: matrix must be square");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::Singular, "matrix is not positive definite (Cholesky failed)");
  }
  Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  // Symmetrize away the rounding asymmetry of the two triangular solves.
  return 0.5 * (inv + inv.transpose());
}

Vector spd_solve(const Matrix& a, const Vector& b) {
  require(a.rows() == a.cols() && a.rows() == b.size(), "spd_solve: dimension mismatch");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::Singular, "matrix is not positive definite (Cholesky failed)");
  }
  return llt.solve(b);
}

Matrix principal_submatrix(const Matrix& a, const std::vector<Index>& idx) {
  const auto m = static_cast<Index>(idx.size());
  Matrix s(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) s(i, j) = a(idx[i], idx[j]);
  }
  return s;
}

}  // namespace tailrisk
