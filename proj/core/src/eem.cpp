#include "eemkit/eem.hpp"

#include "eemkit/entropy.hpp"
#include "eemkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace eemkit {

std::pair<ClassGaussian, ClassGaussian> fit_class_gaussians(
    const Eigen::MatrixXd& h_pos, const Eigen::MatrixXd& h_neg) {
  if (h_pos.rows() < 1 || h_neg.rows() < 1)
    throw DataError("fit_class_gaussians: both classes required");
  if (h_pos.cols() != h_neg.cols())
    throw DataError("fit_class_gaussians: feature dimension mismatch");
  ClassGaussian pos, neg;
  pos.covariance = linalg::ledoit_wolf(h_pos);
  pos.mean = h_pos.colwise().mean();
  pos.count = int(h_pos.rows());
  neg.covariance = linalg::ledoit_wolf(h_neg);
  neg.mean = h_neg.colwise().mean();
  neg.count = int(h_neg.rows());
  return {std::move(pos), std::move(neg)};
}

std::optional<Eigen::VectorXd> solve_beta(const ClassGaussian& pos,
                                          const ClassGaussian& neg, double jitter) {
  Eigen::VectorXd m = pos.mean - neg.mean;
  if (m.cwiseAbs().maxCoeff() < 1e-12) return std::nullopt;  // trivial classifier
  Eigen::MatrixXd sigma = pos.covariance.matrix + neg.covariance.matrix;
  if (jitter > 0.0) sigma.diagonal().array() += jitter;
  Eigen::VectorXd x = linalg::sym_solve(sigma, m);
  const double mahalanobis = m.dot(x);  // ||m||^2_Sigma
  return Eigen::VectorXd(2.0 / mahalanobis * x);
}

DecisionRule compute_thresholds(double mean_pos, double var_pos, double mean_neg,
                                double var_neg) {
  if (!(var_pos > 0.0) || !(var_neg > 0.0))
    throw NumericalError("compute_thresholds: non-positive projected variance");

  DecisionRule rule;
  if (std::abs(var_pos - var_neg) <= 1e-9 * (var_pos + var_neg)) {
    rule.kind = DecisionRule::Kind::one_threshold;
    rule.t0 = mean_neg + 1.0;
    return rule;
  }

  // Solve ln N(mean_pos, var_pos)[t] = ln N(mean_neg, var_neg)[t], a quadratic
  // in t. Solving the density equality directly (rather than the closed form
  // in terms of the mean gap) keeps the thresholds exact even when the gap is
  // only approximately 2.
  const double a = 0.5 / var_pos - 0.5 / var_neg;
  const double b = -mean_pos / var_pos + mean_neg / var_neg;
  const double c = 0.5 * mean_pos * mean_pos / var_pos -
                   0.5 * mean_neg * mean_neg / var_neg -
                   0.5 * std::log(var_neg / var_pos);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0)
    throw NumericalError("compute_thresholds: densities do not cross");
  const double root = std::sqrt(disc);
  // stable quadratic roots plus two Newton polish steps; near-equal variances
  // make |a| tiny and push the roots far into the tails where the raw formula
  // loses digits
  const double q = -0.5 * (b + (b >= 0.0 ? root : -root));
  auto polish = [&](double t) {
    for (int it = 0; it < 2; ++it) {
      const double g = (a * t + b) * t + c;
      const double dg = 2.0 * a * t + b;
      if (dg != 0.0) t -= g / dg;
    }
    return t;
  };
  const double t1 = polish(q / a);
  const double t2 = polish(c / q);

  rule.kind = DecisionRule::Kind::two_threshold;
  rule.t_lo = std::min(t1, t2);
  rule.t_hi = std::max(t1, t2);
  // the class with smaller projected variance owns the bounded interval
  rule.inside_label = var_pos < var_neg ? +1 : -1;
  return rule;
}

namespace {

int majority_label(int count_pos, int count_neg) {
  return count_pos > count_neg ? +1 : -1;
}

}  // namespace

EemModel fit(const Eigen::MatrixXd& x_pos, const Eigen::MatrixXd& x_neg,
             FeatureMap map, const FitOptions& options) {
  if (x_pos.rows() < 1 || x_neg.rows() < 1)
    throw DataError("fit: both classes required");
  Eigen::MatrixXd h_pos = apply_feature_map(map, x_pos);
  Eigen::MatrixXd h_neg = apply_feature_map(map, x_neg);
  auto [pos, neg] = fit_class_gaussians(h_pos, h_neg);

  EemModel model;
  model.map = std::move(map);

  auto beta = solve_beta(pos, neg, options.jitter);
  if (!beta) {
    model.beta = Eigen::VectorXd::Zero(pos.mean.size());
    model.rule.kind = DecisionRule::Kind::trivial;
    model.rule.constant_label = majority_label(pos.count, neg.count);
    return model;
  }
  model.beta = std::move(*beta);

  model.projected.mean_pos = model.beta.dot(pos.mean);
  model.projected.mean_neg = model.beta.dot(neg.mean);
  model.projected.var_pos =
      model.beta.dot(pos.covariance.matrix.selfadjointView<Eigen::Lower>() * model.beta);
  model.projected.var_neg =
      model.beta.dot(neg.covariance.matrix.selfadjointView<Eigen::Lower>() * model.beta);
  if (options.jitter > 0.0) {
    // jitter splits evenly across the classes so the projected variances stay
    // consistent with the jittered combined covariance used for beta
    const double j = 0.5 * options.jitter * model.beta.squaredNorm();
    model.projected.var_pos += j;
    model.projected.var_neg += j;
  }
  if (!(model.projected.var_pos > 0.0) || !(model.projected.var_neg > 0.0))
    throw NumericalError(
        "fit: degenerate class covariance (zero projected variance); "
        "rerun with jitter");

  model.rule = compute_thresholds(model.projected.mean_pos, model.projected.var_pos,
                                  model.projected.mean_neg, model.projected.var_neg);
  return model;
}

Eigen::VectorXd project(const EemModel& model, const Eigen::MatrixXd& X) {
  return apply_feature_map(model.map, X) * model.beta;
}

int apply_rule(const DecisionRule& rule, double p) {
  switch (rule.kind) {
    case DecisionRule::Kind::trivial:
      return rule.constant_label;
    case DecisionRule::Kind::one_threshold:
      return p >= rule.t0 ? +1 : -1;
    case DecisionRule::Kind::two_threshold:
      return (p >= rule.t_lo && p <= rule.t_hi) ? rule.inside_label : -rule.inside_label;
  }
  return -1;
}

Eigen::VectorXi predict(const EemModel& model, const Eigen::MatrixXd& X) {
  if (model.trivial()) {
    return Eigen::VectorXi::Constant(X.rows(), model.rule.constant_label);
  }
  Eigen::VectorXd p = project(model, X);
  Eigen::VectorXi out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = apply_rule(model.rule, p[i]);
  return out;
}

Eigen::VectorXd predict_proba(const EemModel& model, const Eigen::MatrixXd& X) {
  if (model.trivial())
    return Eigen::VectorXd::Constant(X.rows(), model.prior_pos);
  Eigen::VectorXd p = project(model, X);
  Eigen::VectorXd out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    // log-space Bayes rule; the log-sum-exp form keeps far-out projections at
    // exactly 0 or 1 instead of 0/0
    const double lp = entropy::log_gaussian_pdf(p[i], model.projected.mean_pos,
                                                model.projected.var_pos) +
                      std::log(model.prior_pos);
    const double ln = entropy::log_gaussian_pdf(p[i], model.projected.mean_neg,
                                                model.projected.var_neg) +
                      std::log(model.prior_neg);
    out[i] = 1.0 / (1.0 + std::exp(ln - lp));
  }
  return out;
}

Eigen::VectorXi predict_cost_sensitive(const EemModel& model, const Eigen::MatrixXd& X,
                                       double cost_pos, double cost_neg) {
  if (!(cost_pos > 0.0) || !(cost_neg > 0.0))
    throw DataError("predict_cost_sensitive: costs must be positive");
  if (cost_pos == cost_neg) return predict(model, X);  // exact reduction
  if (model.trivial())
    return Eigen::VectorXi::Constant(X.rows(), model.rule.constant_label);
  Eigen::VectorXd p = project(model, X);
  const double log_pos = std::log(cost_pos);
  const double log_neg = std::log(cost_neg);
  Eigen::VectorXi out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double lp = entropy::log_gaussian_pdf(p[i], model.projected.mean_pos,
                                                model.projected.var_pos) +
                      log_pos;
    const double ln = entropy::log_gaussian_pdf(p[i], model.projected.mean_neg,
                                                model.projected.var_neg) +
                      log_neg;
    out[i] = lp >= ln ? +1 : -1;
  }
  return out;
}

EemModel collapse_eekm(const EemModel& model) {
  if (std::holds_alternative<CollapsedKernelMapSpec>(model.map))
    throw DataError("collapse_eekm: already collapsed");
  const auto* nystrom = std::get_if<NystromMapSpec>(&model.map);
  if (!nystrom)
    throw DataError("collapse_eekm: model does not use a Nystrom map");
  EemModel out = model;
  out.map = CollapsedKernelMapSpec{nystrom->landmarks, nystrom->gamma};
  // kroot is symmetric, so beta_hat^T K(landmarks,x) == beta^T (kroot K(...))
  out.beta = nystrom->kroot.selfadjointView<Eigen::Lower>() * model.beta;
  return out;
}

}  // namespace eemkit
