#pragma once

#include "eemkit/feature_map.hpp"
#include "eemkit/linalg.hpp"

#include <Eigen/Core>

#include <optional>
#include <utility>

namespace eemkit {

// Per-class Gaussian fitted in feature space: mean and Ledoit-Wolf shrunk
// covariance.
struct ClassGaussian {
  Eigen::VectorXd mean;
  linalg::ShrunkCovariance covariance;
  int count = 0;
};

// Output activation F over the 1-D projection. A two-threshold rule assigns
// inside_label to the closed interval [t_lo, t_hi]; a one-threshold rule maps
// x >= t0 to +1; a trivial rule is a constant.
struct DecisionRule {
  enum class Kind { one_threshold, two_threshold, trivial };
  Kind kind = Kind::trivial;
  double t0 = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int inside_label = +1;
  int constant_label = -1;
};

// Projected class statistics: m_pm = beta^T mean_pm, s_pm = beta^T Sigma_pm beta.
struct ProjectedStats {
  double mean_pos = 0.0;
  double var_pos = 0.0;
  double mean_neg = 0.0;
  double var_neg = 0.0;
};

struct EemModel {
  FeatureMap map;
  Eigen::VectorXd beta;
  ProjectedStats projected;
  DecisionRule rule;
  double prior_pos = 0.5;
  double prior_neg = 0.5;

  bool trivial() const { return rule.kind == DecisionRule::Kind::trivial; }
};

struct FitOptions {
  // adds jitter * I to the combined covariance before inverting (explicit
  // escape hatch for singular covariances)
  double jitter = 0.0;
};

std::pair<ClassGaussian, ClassGaussian> fit_class_gaussians(
    const Eigen::MatrixXd& h_pos, const Eigen::MatrixXd& h_neg);

// Closed-form operator beta = 2 (Sigma+ + Sigma-)^{-1} m / ||m||^2_Sigma with
// m = mean+ - mean-. Returns nullopt for the degenerate mean+ == mean- case
// (trivial classifier).
std::optional<Eigen::VectorXd> solve_beta(const ClassGaussian& pos,
                                          const ClassGaussian& neg,
                                          double jitter = 0.0);

// Thresholds where the projected class densities N(m+,S+) and N(m-,S-) are
// equal. Requires the fitted-model invariant m+ - m- = 2.
DecisionRule compute_thresholds(double mean_pos, double var_pos, double mean_neg,
                                double var_neg);

// Full training pipeline: map, per-class Gaussians, beta, projection,
// thresholds.
EemModel fit(const Eigen::MatrixXd& x_pos, const Eigen::MatrixXd& x_neg,
             FeatureMap map, const FitOptions& options = {});

// beta^T phi(x) for every row of X.
Eigen::VectorXd project(const EemModel& model, const Eigen::MatrixXd& X);

Eigen::VectorXi predict(const EemModel& model, const Eigen::MatrixXd& X);
int apply_rule(const DecisionRule& rule, double projection);

// Bayes-rule posterior P(+|x) from the projected densities and the priors.
Eigen::VectorXd predict_proba(const EemModel& model, const Eigen::MatrixXd& X);

// argmax_y C_y/(C+ + C-) * P(beta^T h | y); equals predict when C+ == C-.
Eigen::VectorXi predict_cost_sensitive(const EemModel& model, const Eigen::MatrixXd& X,
                                       double cost_pos, double cost_neg);

// Convert a Nystrom-mapped model to its single-hidden-layer form:
// phi(x) = K(landmarks, x), beta_hat = kroot * beta. Predictions unchanged.
EemModel collapse_eekm(const EemModel& model);

}  // namespace eemkit
