#include "eemkit/feature_map.hpp"

#include "eemkit/errors.hpp"
#include "eemkit/linalg.hpp"
#include "eemkit/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace eemkit;

namespace {

Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

}  // namespace

TEST_SUITE("feature_map") {

TEST_CASE("sampling is deterministic and respects the [0,1] contract") {
  RandomMapSpec a = sample_random_map(3, 2, Activation::sig, 77);
  RandomMapSpec b = sample_random_map(3, 2, Activation::sig, 77);
  CHECK(a.W == b.W);
  CHECK(a.b == b.b);
  CHECK(a.W.rows() == 2);
  CHECK(a.W.cols() == 3);
  CHECK(a.b.size() == 2);
  CHECK(a.W.minCoeff() >= 0.0);
  CHECK(a.W.maxCoeff() <= 1.0);
  CHECK(a.b.minCoeff() >= 0.0);
  CHECK(a.b.maxCoeff() <= 1.0);

  RandomMapSpec c = sample_random_map(3, 2, Activation::sig, 78);
  CHECK(a.W != c.W);
}

TEST_CASE("h must be positive") {
  CHECK_THROWS_WITH_AS(sample_random_map(3, 0, Activation::rbf, 1),
                       doctest::Contains("h must be >= 1"), DataError);
}

TEST_CASE("sig at zero argument gives one half") {
  RandomMapSpec spec;
  spec.kind = Activation::sig;
  spec.h = 1;
  spec.d = 2;
  spec.W = Eigen::MatrixXd::Zero(1, 2);
  spec.b = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd X(1, 2);
  X << 3, -4;
  CHECK(apply_random_map(spec, X)(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("rbf at its own center is one for any bias") {
  RandomMapSpec spec;
  spec.kind = Activation::rbf;
  spec.h = 1;
  spec.d = 3;
  spec.W.resize(1, 3);
  spec.W << 0.3, 0.7, 0.1;
  spec.b.resize(1);
  spec.b << 0.9234;
  CHECK(apply_random_map(spec, spec.W)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("nsig divides the inner product by the input dimension") {
  RandomMapSpec spec;
  spec.kind = Activation::nsig;
  spec.h = 1;
  spec.d = 10;
  spec.W = Eigen::MatrixXd::Ones(1, 10);
  spec.b = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(1, 10);  // <w,x> = 10
  CHECK(apply_random_map(spec, X)(0, 0) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-12));
}

TEST_CASE("activation output ranges") {
  Eigen::MatrixXd X = random_points(40, 4, 5) * 3.0;
  for (Activation kind : {Activation::sig, Activation::nsig, Activation::rbf}) {
    RandomMapSpec spec = sample_random_map(4, 10, kind, 9);
    Eigen::MatrixXd H = apply_random_map(spec, X);
    CHECK(H.minCoeff() > 0.0);
    CHECK(H.maxCoeff() <= 1.0);
    if (kind != Activation::rbf) CHECK(H.maxCoeff() < 1.0);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  RandomMapSpec spec = sample_random_map(4, 3, Activation::sig, 1);
  CHECK_THROWS_AS(apply_random_map(spec, Eigen::MatrixXd::Zero(2, 5)), DataError);
}

TEST_CASE("batch mapping equals row-at-a-time mapping exactly") {
  Eigen::MatrixXd X = random_points(15, 3, 8);
  RandomMapSpec rm = sample_random_map(3, 6, Activation::rbf, 3);
  NystromMapSpec nm = fit_nystrom(random_points(9, 3, 10), 5, 0.8, 4);
  Eigen::MatrixXd hr = apply_random_map(rm, X);
  Eigen::MatrixXd hn = apply_nystrom(nm, X);
  for (int i = 0; i < X.rows(); ++i) {
    CHECK((apply_random_map(rm, X.row(i)) - hr.row(i)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((apply_nystrom(nm, X.row(i)) - hn.row(i)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gaussian gram basics") {
  Eigen::MatrixXd A = random_points(6, 2, 12);
  Eigen::MatrixXd K = gaussian_gram(1.5, A, A);
  CHECK((K.diagonal().array() - 1.0).abs().maxCoeff() == 0.0);
  CHECK(K.minCoeff() > 0.0);
  CHECK(K.maxCoeff() <= 1.0);

  Eigen::MatrixXd x(1, 1), y(1, 1);
  x << 0.0;
  y << 1.0;
  CHECK(gaussian_gram(1.0, x, y)(0, 0) == doctest::Approx(std::exp(-1.0)));

  // gamma -> 0+ limit
  CHECK((gaussian_gram(1e-12, A, A).array() - 1.0).abs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(gaussian_gram(0.0, A, A), DataError);
}

TEST_CASE("nystrom single landmark") {
  Eigen::MatrixXd X = random_points(5, 2, 13);
  NystromMapSpec spec = fit_nystrom(X, 1, 2.0, 21);
  CHECK(spec.kroot.rows() == 1);
  CHECK(spec.kroot(0, 0) == doctest::Approx(1.0));
  // mapping the landmark itself gives K(x,x) * 1 = 1
  CHECK(apply_nystrom(spec, spec.landmarks)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("nystrom with all points uses a permutation of the rows") {
  Eigen::MatrixXd X = random_points(8, 2, 14);
  NystromMapSpec spec = fit_nystrom(X, 8, 1.0, 3);
  std::vector<char> used(8, 0);
  for (int i = 0; i < 8; ++i) {
    bool matched = false;
    for (int j = 0; j < 8 && !matched; ++j) {
      if (!used[std::size_t(j)] && spec.landmarks.row(i) == X.row(j)) {
        used[std::size_t(j)] = 1;
        matched = true;
      }
    }
    CHECK(matched);
  }
  CHECK_THROWS_AS(fit_nystrom(X, 9, 1.0, 3), DataError);
}

TEST_CASE("full-landmark nystrom reconstructs the exact gram matrix") {
  Eigen::MatrixXd X = random_points(20, 3, 15);
  NystromMapSpec spec = fit_nystrom(X, 20, 0.5, 6);
  Eigen::MatrixXd H = apply_nystrom(spec, X);
  Eigen::MatrixXd K = gaussian_gram(0.5, X, X);
  CHECK((H * H.transpose() - K).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("kroot squares to the pseudo-inverse of the landmark gram") {
  Eigen::MatrixXd X = random_points(10, 2, 16);
  NystromMapSpec spec = fit_nystrom(X, 6, 0.7, 7);
  Eigen::MatrixXd K = gaussian_gram(0.7, spec.landmarks, spec.landmarks);
  CHECK((spec.kroot * K * spec.kroot - Eigen::MatrixXd::Identity(6, 6))
            .cwiseAbs()
            .maxCoeff() <= 1e-6);
}

TEST_CASE("kernel trick consistency on fresh points") {
  Eigen::MatrixXd X = random_points(12, 3, 17);
  NystromMapSpec spec = fit_nystrom(X, 7, 0.6, 8);
  Eigen::MatrixXd fresh = random_points(4, 3, 18);
  Eigen::MatrixXd phi = apply_nystrom(spec, fresh);
  Eigen::MatrixXd K = gaussian_gram(0.6, spec.landmarks, spec.landmarks);
  Eigen::MatrixXd kx = gaussian_gram(0.6, fresh, spec.landmarks);  // 4 x 7
  Eigen::MatrixXd expected = kx * linalg::sym_inverse(K) * kx.transpose();
  CHECK((phi * phi.transpose() - expected).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("well separated landmarks under a sharp kernel give basis vectors") {
  // unit-separated points with gamma = 1e3: the gram is effectively identity
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  NystromMapSpec spec = fit_nystrom(X, 4, 1e3, 9);
  Eigen::MatrixXd H = apply_nystrom(spec, spec.landmarks);
  CHECK((H - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("duplicate landmarks are handled by eigenvalue dropping") {
  Eigen::MatrixXd X(4, 1);
  X << 0.5, 0.5, 0.5, 0.5;  // all identical: rank-1 gram
  NystromMapSpec spec = fit_nystrom(X, 4, 1.0, 10);
  Eigen::MatrixXd H = apply_nystrom(spec, X);
  CHECK(H.allFinite());
  // reconstruction still matches the (rank-1) gram
  CHECK((H * H.transpose() - gaussian_gram(1.0, X, X)).cwiseAbs().maxCoeff() <= 1e-6);
}

}  // TEST_SUITE
