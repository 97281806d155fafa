// Independent reference implementations used as test oracles. These must stay
// naive and separate from the library code paths they check.
#pragma once

#include "eemkit/rng.hpp"

#include <Eigen/Core>
#include <Eigen/QR>

#include <cmath>
#include <functional>
#include <utility>

namespace oracles {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Ledoit-Wolf 2004 shrinkage, written with explicit loops straight from the
// published formulas (divisor N, target tr(S)/h * I, norm <A,A> = tr(AA^T)/h).
struct NaiveLw {
  MatrixXd covariance;
  double epsilon = 0.0;
};

inline NaiveLw naive_ledoit_wolf(const MatrixXd& X) {
  const auto n = X.rows();
  const auto h = X.cols();
  VectorXd mean = VectorXd::Zero(h);
  for (Eigen::Index k = 0; k < n; ++k) mean += X.row(k).transpose();
  mean /= double(n);

  MatrixXd S = MatrixXd::Zero(h, h);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < h; ++i)
      for (Eigen::Index j = 0; j < h; ++j)
        S(i, j) += (X(k, i) - mean[i]) * (X(k, j) - mean[j]) / double(n);

  double mu = 0.0;
  for (Eigen::Index i = 0; i < h; ++i) mu += S(i, i) / double(h);

  double d2 = 0.0;
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < h; ++j) {
      const double target = i == j ? mu : 0.0;
      d2 += (S(i, j) - target) * (S(i, j) - target) / double(h);
    }

  double b2bar = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < h; ++i)
      for (Eigen::Index j = 0; j < h; ++j) {
        const double dev = (X(k, i) - mean[i]) * (X(k, j) - mean[j]) - S(i, j);
        norm2 += dev * dev;
      }
    b2bar += norm2 / double(h);
  }
  b2bar /= double(n) * double(n);

  NaiveLw out;
  out.epsilon = d2 > 0.0 ? std::min(b2bar, d2) / d2 : 1.0;
  out.covariance = (1.0 - out.epsilon) * S;
  for (Eigen::Index i = 0; i < h; ++i) out.covariance(i, i) += out.epsilon * mu;
  return out;
}

// Composite Simpson quadrature on [lo, hi] with n+1 points (n even).
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int n = 40000) {
  if (n % 2) ++n;
  const double step = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + step * i) * (i % 2 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

inline double normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * 3.14159265358979323846 * var);
}

// Dcs(f,g) = ln(int f^2) + ln(int g^2) - 2 ln(int fg) by direct quadrature.
inline double quadrature_dcs(const std::function<double(double)>& f,
                             const std::function<double(double)>& g, double lo,
                             double hi, int n = 40000) {
  const double ff = simpson([&](double x) { return f(x) * f(x); }, lo, hi, n);
  const double gg = simpson([&](double x) { return g(x) * g(x); }, lo, hi, n);
  const double fg = simpson([&](double x) { return f(x) * g(x); }, lo, hi, n);
  return std::log(ff) + std::log(gg) - 2.0 * std::log(fg);
}

// Minimize beta^T Sigma beta subject to beta^T m = 2 with a generic
// null-space method: parameterize beta = beta0 + Z u on the constraint plane
// and solve the reduced normal equations by conjugate gradients. Deliberately
// independent of the closed form it is used to check.
inline VectorXd constrained_quadratic_min(const MatrixXd& sigma, const VectorXd& m) {
  const auto h = m.size();
  const VectorXd beta0 = 2.0 * m / m.squaredNorm();  // feasible start

  // orthonormal basis of the plane m^T beta = const via QR of [m I]
  MatrixXd A(h, h + 1);
  A.col(0) = m;
  A.rightCols(h) = MatrixXd::Identity(h, h);
  const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(A).householderQ();
  const MatrixXd Z = Q.rightCols(h - 1);

  const MatrixXd reduced = Z.transpose() * sigma * Z;
  const VectorXd rhs = -Z.transpose() * (sigma * beta0);

  // plain conjugate gradients on the (h-1)-dimensional SPD system
  VectorXd u = VectorXd::Zero(h - 1);
  VectorXd r = rhs;
  VectorXd p = r;
  double rr = r.squaredNorm();
  for (Eigen::Index it = 0; it < 20 * (h - 1) && rr > 1e-30; ++it) {
    const VectorXd ap = reduced * p;
    const double alpha = rr / p.dot(ap);
    u += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return beta0 + Z * u;
}

// Balanced two-class feature matrix H (N x N) that is invertible, has
// near-zero column means and exactly proportional class covariances:
// per-class deviations live in orthogonal (q-1)-dimensional subspaces with
// exactly isotropic sample covariance, class means sit in the 2-dimensional
// complement, and a small eta off-axis shift keeps H nonsingular.
struct DualityData {
  MatrixXd h_pos;  // q x N
  MatrixXd h_neg;  // q x N
};

inline DualityData duality_construction(int n, double gap, double eta,
                                        double sigma_pos, double sigma_neg,
                                        std::uint64_t seed) {
  const int q = n / 2;
  eemkit::Rng rng(seed);
  MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.normal();
  const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(G).householderQ();

  // Helmert-style orthonormal basis of the zero-sum hyperplane in R^q
  MatrixXd W = MatrixXd::Zero(q, q - 1);
  for (int j = 1; j < q; ++j) {
    for (int i = 0; i < j; ++i) W(i, j - 1) = 1.0;
    W(j, j - 1) = -double(j);
    W.col(j - 1) /= std::sqrt(double(j) * double(j + 1));
  }

  const MatrixXd v_pos = Q.middleCols(2, q - 1);
  const MatrixXd v_neg = Q.middleCols(2 + (q - 1), q - 1);
  const VectorXd mu_pos = gap * Q.col(0);
  const VectorXd mu_neg = -gap * Q.col(0) + eta * Q.col(1);

  DualityData out;
  out.h_pos = std::sqrt(double(q)) * sigma_pos * W * v_pos.transpose();
  out.h_neg = std::sqrt(double(q)) * sigma_neg * W * v_neg.transpose();
  out.h_pos.rowwise() += mu_pos.transpose();
  out.h_neg.rowwise() += mu_neg.transpose();
  return out;
}

// Two Gaussian blobs at +/- offset per coordinate, rows shuffled.
struct Blobs {
  MatrixXd X;
  Eigen::VectorXi y;
};

inline Blobs make_blobs(int n_pos, int n_neg, int d, double offset,
                        std::uint64_t seed, double spread = 1.0) {
  eemkit::Rng rng(seed);
  Blobs out;
  out.X.resize(n_pos + n_neg, d);
  out.y.resize(n_pos + n_neg);
  for (int i = 0; i < n_pos + n_neg; ++i) {
    const bool pos = i < n_pos;
    out.y[i] = pos ? +1 : -1;
    for (int j = 0; j < d; ++j)
      out.X(i, j) = spread * rng.normal() + (pos ? offset : -offset);
  }
  std::vector<int> perm = rng.permutation(n_pos + n_neg);
  MatrixXd xs(out.X.rows(), d);
  Eigen::VectorXi ys(out.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    xs.row(Eigen::Index(i)) = out.X.row(perm[i]);
    ys[Eigen::Index(i)] = out.y[perm[i]];
  }
  out.X = std::move(xs);
  out.y = std::move(ys);
  return out;
}

}  // namespace oracles
