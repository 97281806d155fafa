#include "eemkit/welm.hpp"

#include "eemkit/errors.hpp"
#include "eemkit/linalg.hpp"

#include <cmath>

namespace eemkit {

std::string to_string(WelmWeighting w) {
  switch (w) {
    case WelmWeighting::none: return "none";
    case WelmWeighting::balanced: return "balanced";
    case WelmWeighting::balanced_ratio: return "balanced-ratio";
  }
  return "?";
}

WelmWeighting welm_weighting_from_string(const std::string& s) {
  if (s == "none") return WelmWeighting::none;
  if (s == "balanced") return WelmWeighting::balanced;
  if (s == "balanced-ratio" || s == "balanced_ratio") return WelmWeighting::balanced_ratio;
  throw DataError("unknown weighting '" + s + "' (expected none|balanced|balanced-ratio)");
}

WelmModel fit_welm(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                   RandomMapSpec map, WelmWeighting weighting) {
  if (X.rows() < 1) throw DataError("fit_welm: empty training set");
  if (X.rows() != y.size()) throw DataError("fit_welm: feature/label size mismatch");

  const double n_pos = double((y.array() == +1).count());
  const double n_neg = double((y.array() == -1).count());

  Eigen::MatrixXd H = apply_random_map(map, X);
  Eigen::VectorXd Y = y.cast<double>();

  if (weighting != WelmWeighting::none && n_pos > 0 && n_neg > 0) {
    Eigen::VectorXd B(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double own = y[i] > 0 ? n_pos : n_neg;
      B[i] = weighting == WelmWeighting::balanced ? std::sqrt(1.0 / own)
                                                  : std::max(n_pos, n_neg) / own;
    }
    H.array().colwise() *= B.array();
    Y.array() *= B.array();
  }

  WelmModel model;
  model.map = std::move(map);
  model.weighting = weighting;
  model.beta = linalg::pseudoinverse(H) * Y;
  return model;
}

Eigen::VectorXd project_welm(const WelmModel& model, const Eigen::MatrixXd& X) {
  return apply_random_map(model.map, X) * model.beta;
}

Eigen::VectorXi predict_welm(const WelmModel& model, const Eigen::MatrixXd& X) {
  Eigen::VectorXd p = project_welm(model, X);
  Eigen::VectorXi out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = p[i] >= 0.0 ? +1 : -1;
  return out;
}

}  // namespace eemkit
