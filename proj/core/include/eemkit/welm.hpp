#pragma once

#include "eemkit/feature_map.hpp"

#include <Eigen/Core>

#include <string>

namespace eemkit {

// Row weights for the balanced least-squares fit:
//   none           - plain ELM, B_i = 1
//   balanced       - B_i = sqrt(1 / |class(i)|)
//   balanced_ratio - B_i = |larger class| / |class(i)|
enum class WelmWeighting { none, balanced, balanced_ratio };

std::string to_string(WelmWeighting w);
WelmWeighting welm_weighting_from_string(const std::string& s);

struct WelmModel {
  RandomMapSpec map;
  Eigen::VectorXd beta;
  WelmWeighting weighting = WelmWeighting::balanced;
};

// beta = (B H)^dagger (B Y) over the random feature map.
WelmModel fit_welm(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                   RandomMapSpec map, WelmWeighting weighting);

// sign(beta^T phi(x)); sign(0) -> +1.
Eigen::VectorXi predict_welm(const WelmModel& model, const Eigen::MatrixXd& X);

Eigen::VectorXd project_welm(const WelmModel& model, const Eigen::MatrixXd& X);

}  // namespace eemkit
