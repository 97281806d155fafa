#pragma once

#include <Eigen/Core>

#include <utility>

namespace eemkit::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Ledoit-Wolf shrunk covariance: (1-eps)*S + eps*(tr(S)/h)*I.
// `degenerate` marks all-constant input (tr(S) = 0); downstream training
// decides what to do with it.
struct ShrunkCovariance {
  Matrix matrix;
  double epsilon = 0.0;
  double trace = 0.0;  // trace of the empirical covariance it was built from
  bool degenerate = false;
};

// Empirical covariance with divisor N (maximum-likelihood form) and the mean.
// Set `bessel` for the N-1 divisor (sensitivity checks only).
std::pair<Matrix, Vector> empirical_covariance(const Matrix& H, bool bessel = false);

// Shrinkage intensity per Ledoit & Wolf (2004), clamped to [0, 1].
ShrunkCovariance ledoit_wolf(const Matrix& H);

// Solve A x = b for symmetric positive definite A.
// Throws NumericalError on singular/indefinite input.
Vector sym_solve(const Matrix& A, const Vector& b);
Matrix sym_inverse(const Matrix& A);

// Pseudo inverse square root via symmetric eigendecomposition; eigenvalues
// below tol * lambda_max are dropped.
Matrix sym_inv_sqrt(const Matrix& A, double tol = 1e-10);

// Moore-Penrose pseudoinverse; singular values below tol * sigma_max truncated.
Matrix pseudoinverse(const Matrix& A, double tol = 1e-10);

// Squared Mahalanobis norm m^T A^{-1} m.
double mahalanobis_sq(const Vector& m, const Matrix& A);

}  // namespace eemkit::linalg
