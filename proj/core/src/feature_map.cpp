#include "eemkit/feature_map.hpp"

#include "eemkit/errors.hpp"
#include "eemkit/linalg.hpp"
#include "eemkit/rng.hpp"

#include <cmath>

namespace eemkit {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sig: return "sig";
    case Activation::nsig: return "nsig";
    case Activation::rbf: return "rbf";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  if (s == "sig") return Activation::sig;
  if (s == "nsig") return Activation::nsig;
  if (s == "rbf") return Activation::rbf;
  throw DataError("unknown activation '" + s + "' (expected sig|nsig|rbf)");
}

RandomMapSpec sample_random_map(int d, int h, Activation kind, std::uint64_t seed) {
  if (d < 1) throw DataError("sample_random_map: d must be >= 1");
  if (h < 1) throw DataError("h must be >= 1");
  RandomMapSpec spec;
  spec.kind = kind;
  spec.h = h;
  spec.d = d;
  spec.seed = seed;
  spec.W.resize(h, d);
  spec.b.resize(h);
  Rng rng(derive_seed(seed, 0x5eed, std::uint64_t(h), std::uint64_t(d)));
  for (int j = 0; j < h; ++j) {
    for (int c = 0; c < d; ++c) spec.W(j, c) = rng.uniform();
    spec.b[j] = rng.uniform();
  }
  return spec;
}

Eigen::MatrixXd apply_random_map(const RandomMapSpec& spec, const Eigen::MatrixXd& X) {
  if (X.cols() != spec.d)
    throw DataError("apply_random_map: input has " + std::to_string(X.cols()) +
                    " columns, map expects " + std::to_string(spec.d));
  switch (spec.kind) {
    case Activation::sig: {
      Eigen::MatrixXd Z = X * spec.W.transpose();  // N x h, <w_j, x_i>
      Z.rowwise() -= spec.b.transpose();
      return (1.0 + (-Z.array()).exp()).inverse();
    }
    case Activation::nsig: {
      Eigen::MatrixXd Z = (X * spec.W.transpose()) / double(spec.d);
      Z.rowwise() -= spec.b.transpose();
      return (1.0 + (-Z.array()).exp()).inverse();
    }
    case Activation::rbf: {
      // ||w_j - x_i||^2 = ||x_i||^2 + ||w_j||^2 - 2 <x_i, w_j>
      Eigen::VectorXd xn = X.rowwise().squaredNorm();
      Eigen::VectorXd wn = spec.W.rowwise().squaredNorm();
      Eigen::MatrixXd D2 = -2.0 * X * spec.W.transpose();
      D2.colwise() += xn;
      D2.rowwise() += wn.transpose();
      D2 = D2.cwiseMax(0.0);
      return (-(D2.array().rowwise() * spec.b.transpose().array())).exp();
    }
  }
  throw DataError("apply_random_map: bad activation");
}

Eigen::MatrixXd gaussian_gram(double gamma, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& B) {
  if (gamma <= 0.0) throw DataError("gaussian_gram: gamma must be > 0");
  if (A.cols() != B.cols()) throw DataError("gaussian_gram: dimension mismatch");
  Eigen::VectorXd an = A.rowwise().squaredNorm();
  Eigen::VectorXd bn = B.rowwise().squaredNorm();
  Eigen::MatrixXd D2 = -2.0 * A * B.transpose();
  D2.colwise() += an;
  D2.rowwise() += bn.transpose();
  return (-gamma * D2.cwiseMax(0.0).array()).exp();
}

NystromMapSpec fit_nystrom(const Eigen::MatrixXd& X, int h, double gamma,
                           std::uint64_t seed) {
  if (h < 1) throw DataError("h must be >= 1");
  if (h > X.rows())
    throw DataError("fit_nystrom: h = " + std::to_string(h) + " exceeds sample count " +
                    std::to_string(X.rows()));
  NystromMapSpec spec;
  spec.gamma = gamma;
  spec.seed = seed;
  // landmarks drawn without replacement via a seed-derived shuffle
  Rng rng(derive_seed(seed, 0x4a5d, std::uint64_t(h), 0));
  std::vector<int> perm = rng.permutation(int(X.rows()));
  spec.landmarks.resize(h, X.cols());
  for (int i = 0; i < h; ++i) spec.landmarks.row(i) = X.row(perm[std::size_t(i)]);
  // duplicate landmarks leave the Gram rank-deficient; the pseudo inverse
  // square root drops the null eigenvalues instead of resampling
  spec.kroot = linalg::sym_inv_sqrt(gaussian_gram(gamma, spec.landmarks, spec.landmarks));
  return spec;
}

Eigen::MatrixXd apply_nystrom(const NystromMapSpec& spec, const Eigen::MatrixXd& X) {
  if (X.cols() != spec.landmarks.cols())
    throw DataError("apply_nystrom: dimension mismatch");
  // row i of the result is kroot * K(landmarks, x_i)
  return gaussian_gram(spec.gamma, X, spec.landmarks) * spec.kroot;
}

Eigen::MatrixXd apply_feature_map(const FeatureMap& map, const Eigen::MatrixXd& X) {
  return std::visit(
      [&X](const auto& m) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomMapSpec>) return apply_random_map(m, X);
        if constexpr (std::is_same_v<T, NystromMapSpec>) return apply_nystrom(m, X);
        if constexpr (std::is_same_v<T, CollapsedKernelMapSpec>)
          return gaussian_gram(m.gamma, X, m.landmarks);
      },
      map);
}

int feature_map_input_dim(const FeatureMap& map) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomMapSpec>) return m.d;
        else return int(m.landmarks.cols());
      },
      map);
}

int feature_map_output_dim(const FeatureMap& map) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomMapSpec>) return m.h;
        else return int(m.landmarks.rows());
      },
      map);
}

}  // namespace eemkit
