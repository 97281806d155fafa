#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <variant>

namespace eemkit {

enum class Activation { sig, nsig, rbf };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Random hidden layer: h units with weights W (h x d) and biases b, all
// sampled from U[0,1].
struct RandomMapSpec {
  Activation kind = Activation::rbf;
  int h = 0;
  int d = 0;
  Eigen::MatrixXd W;  // h x d, rows are unit weight vectors w_j
  Eigen::VectorXd b;  // length h
  std::uint64_t seed = 0;
};

RandomMapSpec sample_random_map(int d, int h, Activation kind, std::uint64_t seed);
Eigen::MatrixXd apply_random_map(const RandomMapSpec& spec, const Eigen::MatrixXd& X);

// Gaussian kernel matrix K[i][j] = exp(-gamma * ||a_i - b_j||^2).
Eigen::MatrixXd gaussian_gram(double gamma, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& B);

// Nystrom map phi(x) = K(landmarks, landmarks)^{-1/2} K(landmarks, x).
struct NystromMapSpec {
  Eigen::MatrixXd landmarks;  // h x d, rows drawn from training data
  double gamma = 1.0;
  Eigen::MatrixXd kroot;  // K(landmarks, landmarks)^{-1/2}, symmetric
  std::uint64_t seed = 0;
};

NystromMapSpec fit_nystrom(const Eigen::MatrixXd& X, int h, double gamma,
                           std::uint64_t seed);
Eigen::MatrixXd apply_nystrom(const NystromMapSpec& spec, const Eigen::MatrixXd& X);

// SLFN form of a collapsed Nystrom model: phi(x) = K(landmarks, x) with the
// kroot factor folded into beta.
struct CollapsedKernelMapSpec {
  Eigen::MatrixXd landmarks;
  double gamma = 1.0;
};

using FeatureMap = std::variant<RandomMapSpec, NystromMapSpec, CollapsedKernelMapSpec>;

Eigen::MatrixXd apply_feature_map(const FeatureMap& map, const Eigen::MatrixXd& X);
int feature_map_input_dim(const FeatureMap& map);
int feature_map_output_dim(const FeatureMap& map);

}  // namespace eemkit
