#include "eemkit/eval.hpp"

#include "eemkit/errors.hpp"
#include "eemkit/metrics.hpp"
#include "eemkit/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace eemkit::eval {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Fixed task list, preallocated result slots: output is identical for any
// thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(std::max(threads, 1), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= double(v.size());
  return {mean, std::sqrt(var)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_matrix_by_label(
    const Eigen::MatrixXd& X, const Eigen::VectorXi& y) {
  std::vector<int> pos, neg;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] > 0 ? pos : neg).push_back(int(i));
  return {take_rows(X, pos), take_rows(X, neg)};
}

// grid ordering for ties: higher mean first, then smaller h, then smaller gamma
bool better_config(double score_a, const ModelConfig& a, double score_b,
                   const ModelConfig& b) {
  if (score_a != score_b) return score_a > score_b;
  if (a.h != b.h) return a.h < b.h;
  const double ga = a.gamma.value_or(0.0);
  const double gb = b.gamma.value_or(0.0);
  return ga < gb;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::eem: return "eem";
    case Algorithm::eekm: return "eekm";
    case Algorithm::welm: return "welm";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "eem") return Algorithm::eem;
  if (s == "eekm") return Algorithm::eekm;
  if (s == "welm") return Algorithm::welm;
  throw DataError("unknown algorithm '" + s + "' (expected eem|eekm|welm)");
}

std::string ModelConfig::describe() const {
  std::ostringstream os;
  os << to_string(algorithm);
  if (algorithm == Algorithm::eekm)
    os << " gamma=" << (gamma ? std::to_string(*gamma) : std::string("?"));
  else
    os << " " << eemkit::to_string(activation);
  os << " h=" << h;
  if (algorithm == Algorithm::welm) os << " w=" << eemkit::to_string(weighting);
  return os.str();
}

FittedModel fit_config(const ModelConfig& cfg, const Eigen::MatrixXd& X,
                       const Eigen::VectorXi& y, std::uint64_t map_seed,
                       double jitter) {
  if (cfg.h < 1) throw DataError("h must be >= 1");
  switch (cfg.algorithm) {
    case Algorithm::eem: {
      auto [xp, xn] = split_matrix_by_label(X, y);
      auto map = sample_random_map(int(X.cols()), cfg.h, cfg.activation, map_seed);
      return eemkit::fit(xp, xn, FeatureMap(std::move(map)), FitOptions{jitter});
    }
    case Algorithm::eekm: {
      if (!cfg.gamma) throw DataError("eekm requires gamma");
      auto [xp, xn] = split_matrix_by_label(X, y);
      const int h_eff = std::min<int>(cfg.h, int(X.rows()));
      auto map = fit_nystrom(X, h_eff, *cfg.gamma, map_seed);
      return eemkit::fit(xp, xn, FeatureMap(std::move(map)), FitOptions{jitter});
    }
    case Algorithm::welm: {
      auto map = sample_random_map(int(X.cols()), cfg.h, cfg.activation, map_seed);
      return fit_welm(X, y, std::move(map), cfg.weighting);
    }
  }
  throw DataError("fit_config: bad algorithm");
}

Eigen::VectorXi predict_config(const FittedModel& model, const Eigen::MatrixXd& X) {
  if (const auto* m = std::get_if<EemModel>(&model)) return predict(*m, X);
  return predict_welm(std::get<WelmModel>(model), X);
}

Eigen::VectorXd project_config(const FittedModel& model, const Eigen::MatrixXd& X) {
  if (const auto* m = std::get_if<EemModel>(&model)) return project(*m, X);
  return project_welm(std::get<WelmModel>(model), X);
}

EvalReport cross_validate(const Dataset& ds, const ModelConfig& cfg,
                          const EvalOptions& opts) {
  if (ds.count_label(+1) < 1 || ds.count_label(-1) < 1)
    throw DataError("cross_validate: both classes required");
  FoldPlan plan = stratified_kfold(ds, opts.k, opts.repeats, opts.seed);

  std::optional<ScalingTransform> global_scaler;
  if (opts.scale_globally) global_scaler = fit_scaler(ds);

  const int n_splits = int(plan.splits.size());
  std::vector<double> gmeans(std::size_t(n_splits), -1.0);  // -1 marks skipped
  std::vector<double> times(std::size_t(n_splits), 0.0);
  std::vector<int> clamps(std::size_t(n_splits), 0);

  parallel_for(n_splits, opts.threads, [&](int s) {
    const auto& split = plan.splits[std::size_t(s)];
    Eigen::MatrixXd xtr = take_rows(ds.features, split.train);
    Eigen::VectorXi ytr = take_rows(ds.labels, split.train);
    if ((ytr.array() == +1).count() == 0 || (ytr.array() == -1).count() == 0)
      return;  // single-class training fold: skip and record
    Eigen::MatrixXd xte = take_rows(ds.features, split.test);
    Eigen::VectorXi yte = take_rows(ds.labels, split.test);

    Dataset train_view{xtr, ytr, ds.name};
    const ScalingTransform scaler =
        global_scaler ? *global_scaler : fit_scaler(train_view);
    xtr = apply_scaler(scaler, xtr);
    xte = apply_scaler(scaler, xte);

    const std::uint64_t map_seed =
        derive_seed(cfg.seed, std::uint64_t(s), std::uint64_t(cfg.h), 0xcfd);
    const auto t0 = Clock::now();
    FittedModel model = fit_config(cfg, xtr, ytr, map_seed, opts.jitter);
    times[std::size_t(s)] = seconds_since(t0);
    if (cfg.algorithm == Algorithm::eekm && cfg.h > xtr.rows())
      clamps[std::size_t(s)] = 1;

    gmeans[std::size_t(s)] =
        metrics::gmean(metrics::confusion(yte, predict_config(model, xte)));
  });

  EvalReport report;
  report.config = cfg;
  for (int s = 0; s < n_splits; ++s) {
    if (gmeans[std::size_t(s)] < 0.0) {
      report.skipped_folds++;
      continue;
    }
    report.fold_gmeans.push_back(gmeans[std::size_t(s)]);
    report.fold_train_seconds.push_back(times[std::size_t(s)]);
    report.clamped_h += clamps[std::size_t(s)];
  }
  std::tie(report.mean_gmean, report.std_gmean) = mean_std(report.fold_gmeans);
  return report;
}

std::pair<ModelConfig, std::vector<EvalReport>> grid_search_cv(
    const Dataset& ds, const std::vector<ModelConfig>& grid, const EvalOptions& opts) {
  if (grid.empty()) throw DataError("grid_search_cv: empty grid");
  std::vector<EvalReport> reports;
  reports.reserve(grid.size());
  for (const auto& cfg : grid) reports.push_back(cross_validate(ds, cfg, opts));
  const EvalReport* best = &reports.front();
  for (const auto& r : reports)
    if (better_config(r.mean_gmean, r.config, best->mean_gmean, best->config)) best = &r;
  return {best->config, std::move(reports)};
}

namespace {

TuneResult tune_impl(const Dataset& ds, const std::vector<ModelConfig>& grid,
                     const EvalOptions& opts, bool kde) {
  if (grid.empty()) throw DataError("tune: empty grid");
  const ScalingTransform scaler = fit_scaler(ds);
  const Eigen::MatrixXd X = apply_scaler(scaler, ds.features);

  TuneResult result;
  bool have_best = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ModelConfig& cfg = grid[i];
    double score;
    try {
      const std::uint64_t map_seed =
          derive_seed(cfg.seed, std::uint64_t(i), std::uint64_t(cfg.h), 0x7e);
      FittedModel model = fit_config(cfg, X, ds.labels, map_seed, opts.jitter);
      if (const auto* em = std::get_if<EemModel>(&model); em && em->trivial())
        continue;  // no usable projection
      Eigen::VectorXd p = project_config(model, X);
      std::vector<double> pos, neg;
      for (Eigen::Index r = 0; r < p.size(); ++r)
        (ds.labels[r] > 0 ? pos : neg).push_back(p[r]);
      Eigen::VectorXd pp = Eigen::Map<Eigen::VectorXd>(pos.data(), Eigen::Index(pos.size()));
      Eigen::VectorXd pn = Eigen::Map<Eigen::VectorXd>(neg.data(), Eigen::Index(neg.size()));
      if (kde) {
        score = entropy::dcs_kde_1d(pp, pn);
      } else {
        entropy::Gaussian1D gp, gn;
        if (opts.empirical_projection_variance || !std::holds_alternative<EemModel>(model)) {
          gp = {pp.mean(), (pp.array() - pp.mean()).square().sum() / double(pp.size())};
          gn = {pn.mean(), (pn.array() - pn.mean()).square().sum() / double(pn.size())};
        } else {
          const auto& em = std::get<EemModel>(model);
          gp = {em.projected.mean_pos, em.projected.var_pos};
          gn = {em.projected.mean_neg, em.projected.var_neg};
        }
        score = entropy::dcs_gaussian_1d(gp, gn, opts.dcs_formula);
      }
      if (!std::isfinite(score)) continue;
    } catch (const NumericalError&) {
      continue;  // config failed to fit; skip
    }
    result.scores.emplace_back(cfg, score);
    if (!have_best || better_config(score, cfg, result.score, result.config)) {
      result.config = cfg;
      result.score = score;
      have_best = true;
    }
  }
  if (!have_best) throw NumericalError("tune: every configuration failed to fit");
  return result;
}

}  // namespace

TuneResult tune_by_gaussian_dcs(const Dataset& ds, const std::vector<ModelConfig>& grid,
                                const EvalOptions& opts) {
  return tune_impl(ds, grid, opts, false);
}

TuneResult tune_by_kde_dcs(const Dataset& ds, const std::vector<ModelConfig>& grid,
                           const EvalOptions& opts) {
  return tune_impl(ds, grid, opts, true);
}

std::vector<std::pair<int, double>> spearman_experiment(
    const Dataset& ds, const std::vector<int>& dims, int n_projections,
    int n_operators, std::uint64_t seed) {
  if (ds.count_label(+1) < 2 || ds.count_label(-1) < 2)
    throw DataError("spearman_experiment: need at least 2 samples per class");
  const ScalingTransform scaler = fit_scaler(ds);
  const Eigen::MatrixXd X = apply_scaler(scaler, ds.features);
  auto [xp, xn] = split_matrix_by_label(X, ds.labels);

  std::vector<std::pair<int, double>> out;
  for (const int h : dims) {
    std::vector<double> surrogate, full;
    surrogate.reserve(std::size_t(n_projections) * std::size_t(n_operators));
    full.reserve(surrogate.capacity());
    for (int ip = 0; ip < n_projections; ++ip) {
      const auto map = sample_random_map(int(X.cols()), h, Activation::rbf,
                                         derive_seed(seed, std::uint64_t(h),
                                                     std::uint64_t(ip), 0x3a));
      const Eigen::MatrixXd hp = apply_random_map(map, xp);
      const Eigen::MatrixXd hn = apply_random_map(map, xn);
      const auto [pos, neg] = fit_class_gaussians(hp, hn);
      Rng beta_rng(derive_seed(seed, std::uint64_t(h), std::uint64_t(ip), 0xbe7a));
      for (int io = 0; io < n_operators; ++io) {
        Eigen::VectorXd beta(h);
        for (int c = 0; c < h; ++c) beta[c] = beta_rng.normal();
        const double m1 = beta.dot(pos.mean);
        const double m0 = beta.dot(neg.mean);
        const double s1 = beta.dot(pos.covariance.matrix.selfadjointView<Eigen::Lower>() * beta);
        const double s0 = beta.dot(neg.covariance.matrix.selfadjointView<Eigen::Lower>() * beta);
        if (!(s1 > 0.0) || !(s0 > 0.0)) continue;  // degenerate projection
        entropy::Gaussian1D g1{m1, s1}, g0{m0, s0};
        const double a = entropy::dcs_last_term(g1, g0);
        const double b = entropy::dcs_gaussian_1d(g1, g0);
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        surrogate.push_back(a);
        full.push_back(b);
      }
    }
    if (surrogate.size() < 2)
      throw NumericalError("spearman_experiment: all projections degenerate");
    const Eigen::VectorXd va =
        Eigen::Map<Eigen::VectorXd>(surrogate.data(), Eigen::Index(surrogate.size()));
    const Eigen::VectorXd vb =
        Eigen::Map<Eigen::VectorXd>(full.data(), Eigen::Index(full.size()));
    out.emplace_back(h, metrics::spearman(va, vb));
  }
  return out;
}

std::vector<std::pair<int, double>> stability_sweep(const Dataset& ds,
                                                    const std::vector<int>& h_values,
                                                    const ModelConfig& tmpl,
                                                    const EvalOptions& opts) {
  if (h_values.empty()) throw DataError("stability_sweep: empty h list");
  std::vector<std::pair<int, double>> out;
  out.reserve(h_values.size());
  for (int h : h_values) {
    ModelConfig cfg = tmpl;
    cfg.h = h;
    out.emplace_back(h, cross_validate(ds, cfg, opts).mean_gmean);
  }
  return out;
}

double bench_train_seconds(const Dataset& ds, const ModelConfig& cfg,
                           const EvalOptions& opts, int runs) {
  const ScalingTransform scaler = fit_scaler(ds);
  const Eigen::MatrixXd X = apply_scaler(scaler, ds.features);
  std::vector<double> times;
  times.reserve(std::size_t(runs));
  for (int r = 0; r < runs; ++r) {
    const auto t0 = Clock::now();
    FittedModel model =
        fit_config(cfg, X, ds.labels, derive_seed(cfg.seed, std::uint64_t(r), 0xbe, 0),
                   opts.jitter);
    times.push_back(seconds_since(t0));
    (void)model;
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

std::string to_json(const EvalReport& report) {
  nlohmann::json j;
  j["config"] = {{"algorithm", to_string(report.config.algorithm)},
                 {"activation", eemkit::to_string(report.config.activation)},
                 {"h", report.config.h},
                 {"seed", report.config.seed}};
  if (report.config.gamma) j["config"]["gamma"] = *report.config.gamma;
  if (report.config.algorithm == Algorithm::welm)
    j["config"]["weighting"] = eemkit::to_string(report.config.weighting);
  j["gmean_mean"] = report.mean_gmean;
  j["gmean_std"] = report.std_gmean;
  j["fold_gmeans"] = report.fold_gmeans;
  j["fold_train_seconds"] = report.fold_train_seconds;
  j["skipped_folds"] = report.skipped_folds;
  if (report.clamped_h > 0) j["clamped_h_folds"] = report.clamped_h;
  return j.dump(2);
}

std::string to_text(const EvalReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s  %6.2f +- %5.2f  (folds=%zu, skipped=%d)",
                report.config.describe().c_str(), 100.0 * report.mean_gmean,
                100.0 * report.std_gmean, report.fold_gmeans.size(),
                report.skipped_folds);
  os << line;
  return os.str();
}

}  // namespace eemkit::eval
