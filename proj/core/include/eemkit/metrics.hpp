#pragma once

#include <Eigen/Core>

namespace eemkit::metrics {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

Confusion confusion(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred);

// Geometric mean of per-class recalls, in [0, 1]. A class with zero members
// contributes factor 1 so single-class test folds stay scored.
double gmean(const Confusion& c);

// Spearman rank correlation with average ranks for ties; defined as 0 when
// either rank vector has no variance.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace eemkit::metrics
