#include "eemkit/metrics.hpp"

#include "eemkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace eemkit::metrics {

Confusion confusion(const Eigen::VectorXi& y_true, const Eigen::VectorXi& y_pred) {
  if (y_true.size() != y_pred.size())
    throw DataError("confusion: label vectors differ in length");
  Confusion c;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    if (y_true[i] > 0)
      (y_pred[i] > 0 ? c.tp : c.fn)++;
    else
      (y_pred[i] > 0 ? c.fp : c.tn)++;
  }
  return c;
}

double gmean(const Confusion& c) {
  const double recall_pos = c.tp + c.fn > 0 ? double(c.tp) / double(c.tp + c.fn) : 1.0;
  const double recall_neg = c.tn + c.fp > 0 ? double(c.tn) / double(c.tn + c.fp) : 1.0;
  return std::sqrt(recall_pos * recall_neg);
}

namespace {

// fractional ranks, ties averaged
std::vector<double> ranks(const Eigen::VectorXd& v) {
  const auto n = std::size_t(v.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[Eigen::Index(a)] < v[Eigen::Index(b)]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[Eigen::Index(order[j + 1])] == v[Eigen::Index(order[i])]) ++j;
    const double avg = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DataError("spearman: vectors differ in length");
  if (a.size() < 2) throw DataError("spearman: need at least 2 values");
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const auto n = double(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;  // zero rank variance
  return cov / std::sqrt(va * vb);
}

}  // namespace eemkit::metrics
