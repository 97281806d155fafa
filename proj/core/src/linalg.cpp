#include "eemkit/linalg.hpp"

#include "eemkit/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace eemkit::linalg {

std::pair<Matrix, Vector> empirical_covariance(const Matrix& H, bool bessel) {
  const Eigen::Index n = H.rows();
  const Eigen::Index h = H.cols();
  if (n < 1) throw DataError("empirical_covariance: need at least one row");
  Vector mean = H.colwise().mean();
  Matrix centered = H.rowwise() - mean.transpose();
  const double divisor = bessel ? std::max<double>(1.0, double(n) - 1.0) : double(n);
  Matrix cov(h, h);
  cov.setZero();
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / divisor);
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return {std::move(cov), std::move(mean)};
}

ShrunkCovariance ledoit_wolf(const Matrix& H) {
  const auto n = static_cast<double>(H.rows());
  const auto h = static_cast<double>(H.cols());
  auto [S, mean] = empirical_covariance(H);

  ShrunkCovariance out;
  out.trace = S.trace();
  if (out.trace <= 0.0) {
    // all-constant input: no spread at all
    out.matrix = Matrix::Zero(S.rows(), S.cols());
    out.epsilon = 1.0;
    out.degenerate = true;
    return out;
  }

  const double mu = out.trace / h;
  // Normalized Frobenius inner product <A,B> = tr(A B^T)/h, as in the
  // Ledoit-Wolf 2004 estimator.
  const double d2 = (S.squaredNorm() - 2.0 * mu * out.trace + h * mu * mu) / h;
  double eps;
  if (d2 <= 1e-300) {
    // S is already a multiple of the identity; shrinkage is a no-op
    eps = 1.0;
  } else {
    Matrix centered = H.rowwise() - mean.transpose();
    // b2bar = (1/N^2) sum_k ||x_k x_k^T - S||^2, expanded so a single GEMM does
    // the x_k^T S x_k terms.
    Vector norms2 = centered.rowwise().squaredNorm();
    Vector xSx = ((centered * S).array() * centered.array()).rowwise().sum();
    const double SF2 = S.squaredNorm();
    const double b2bar =
        (norms2.array().square().sum() - 2.0 * xSx.sum() + n * SF2) / (n * n) / h;
    eps = std::clamp(std::min(b2bar, d2) / d2, 0.0, 1.0);
  }

  out.epsilon = eps;
  out.matrix = (1.0 - eps) * S;
  out.matrix.diagonal().array() += eps * mu;
  return out;
}

namespace {

Eigen::LDLT<Matrix> checked_ldlt(const Matrix& A) {
  if (A.rows() != A.cols()) throw DataError("sym_solve: matrix must be square");
  Eigen::LDLT<Matrix> ldlt(A);
  const Vector d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  if (ldlt.info() != Eigen::Success || dmax <= 0.0 ||
      dmin <= double(A.rows()) * 1e-12 * dmax) {
    throw NumericalError(
        "singular covariance; combined class covariance not invertible");
  }
  return ldlt;
}

}  // namespace

Vector sym_solve(const Matrix& A, const Vector& b) {
  return checked_ldlt(A).solve(b);
}

Matrix sym_inverse(const Matrix& A) {
  return checked_ldlt(A).solve(Matrix::Identity(A.rows(), A.cols()));
}

Matrix sym_inv_sqrt(const Matrix& A, double tol) {
  if (A.rows() != A.cols()) throw DataError("sym_inv_sqrt: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  if (es.info() != Eigen::Success)
    throw NumericalError("sym_inv_sqrt: eigendecomposition failed");
  const Vector& w = es.eigenvalues();
  const double wmax = std::max(0.0, w.maxCoeff());
  Vector inv_sqrt_w = Vector::Zero(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > tol * wmax && w[i] > 0.0) inv_sqrt_w[i] = 1.0 / std::sqrt(w[i]);
  }
  Matrix R = es.eigenvectors() * inv_sqrt_w.asDiagonal() * es.eigenvectors().transpose();
  // symmetrize away rounding
  return 0.5 * (R + R.transpose());
}

Matrix pseudoinverse(const Matrix& A, double tol) {
  if (A.size() == 0) return Matrix(A.cols(), A.rows());
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * smax && sv[i] > 0.0) inv[i] = 1.0 / sv[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double mahalanobis_sq(const Vector& m, const Matrix& A) {
  return m.dot(sym_solve(A, m));
}

}  // namespace eemkit::linalg
