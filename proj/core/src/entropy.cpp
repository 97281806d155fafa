#include "eemkit/entropy.hpp"

#include "eemkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eemkit::entropy {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void require_positive_variance(const Gaussian1D& g, const char* where) {
  if (!(g.variance > 0.0))
    throw NumericalError(std::string(where) + ": non-positive variance");
}
}  // namespace

double gaussian_pdf(double x, double mean, double variance) {
  return std::exp(log_gaussian_pdf(x, mean, variance));
}

double log_gaussian_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * kPi * variance) - d * d / (2.0 * variance);
}

double renyi_h2_gaussian(const Gaussian1D& g) {
  require_positive_variance(g, "renyi_h2_gaussian");
  // integral of N(m,S)^2 = 1 / (2 sqrt(pi S))
  return std::log(2.0 * std::sqrt(kPi * g.variance));
}

double renyi_h2_cross_gaussian(const Gaussian1D& f, const Gaussian1D& g) {
  require_positive_variance(f, "renyi_h2_cross_gaussian");
  require_positive_variance(g, "renyi_h2_cross_gaussian");
  // integral of f*g = N(m_f - m_g; 0, S_f + S_g)[0]
  return -log_gaussian_pdf(f.mean - g.mean, 0.0, f.variance + g.variance);
}

double dcs_gaussian_1d(const Gaussian1D& f, const Gaussian1D& g, DcsFormula formula) {
  require_positive_variance(f, "dcs_gaussian_1d");
  require_positive_variance(g, "dcs_gaussian_1d");
  const double sum = f.variance + g.variance;
  const double am_over_gm = 0.5 * sum / std::sqrt(f.variance * g.variance);
  const double gap = f.mean - g.mean;
  const double last = gap * gap / sum;
  if (formula == DcsFormula::as_printed)
    return -0.5 * std::log(kPi / 2.0) - std::log(am_over_gm) + last;
  return std::log(am_over_gm) + last;
}

double dcs_last_term(const Gaussian1D& f, const Gaussian1D& g) {
  const double gap = f.mean - g.mean;
  return gap * gap / (f.variance + g.variance);
}

double silverman_width(const Eigen::VectorXd& values) {
  const auto n = values.size();
  if (n < 2) throw DataError("silverman_width: need at least 2 values");
  const double mean = values.mean();
  const double var = (values.array() - mean).square().sum() / double(n);
  return std::pow(4.0 / (3.0 * double(n)), 0.2) * std::sqrt(var);
}

KdeMixture1D make_kde(const Eigen::VectorXd& values) {
  KdeMixture1D kde;
  kde.centers = values;
  kde.bandwidth = silverman_width(values);
  if (kde.bandwidth <= 0.0)
    kde.bandwidth = 1e-6 * (1.0 + std::abs(values.mean()));
  return kde;
}

namespace {

// ln of the mean over all pairs of N(0, S)[u_i - v_j], the closed-form cross
// term of two equal-weight mixtures with component variance summing to S.
// Evaluated by log-sum-exp so widely separated samples cannot underflow the
// cross integral to an exact zero.
double log_mixture_cross_integral(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                  double S) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j)
      max_log = std::max(max_log, log_gaussian_pdf(u[i] - v[j], 0.0, S));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j)
      acc += std::exp(log_gaussian_pdf(u[i] - v[j], 0.0, S) - max_log);
  return max_log + std::log(acc) - std::log(double(u.size()) * double(v.size()));
}

}  // namespace

double dcs_kde_1d(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const KdeMixture1D fa = make_kde(a);
  const KdeMixture1D fb = make_kde(b);
  const double s2 = fa.bandwidth * fa.bandwidth;
  const double t2 = fb.bandwidth * fb.bandwidth;
  const double ff = log_mixture_cross_integral(a, a, 2.0 * s2);
  const double gg = log_mixture_cross_integral(b, b, 2.0 * t2);
  const double fg = log_mixture_cross_integral(a, b, s2 + t2);
  return ff + gg - 2.0 * fg;
}

}  // namespace eemkit::entropy
