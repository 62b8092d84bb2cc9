#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tailrisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct SymmetricSpectrum {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(k) pairs with values(k)
};

SymmetricSpectrum symmetric_eigen(const Matrix& a);

bool is_exactly_symmetric(const Matrix& a) noexcept;

bool all_finite(const Matrix& a) noexcept;

/// Inverse of a symmetric positive-definite matrix via Cholesky. Throws
/// ErrorKind::Singular when the factorization breaks down.
Matrix spd_inverse(const Matrix& a);

/// Solves a*x = b for symmetric positive-definite a.
Vector spd_solve(const Matrix& a, const Vector& b);

/// Principal submatrix on the given (sorted or unsorted) index set.
Matrix principal_submatrix(const Matrix& a, const std::vector<Index>& idx);

}  // namespace tailrisk
