#pragma once

#include "eemkit/dataset.hpp"
#include "eemkit/eem.hpp"
#include "eemkit/entropy.hpp"
#include "eemkit/welm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eemkit::eval {

enum class Algorithm { eem, eekm, welm };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct ModelConfig {
  Algorithm algorithm = Algorithm::eem;
  Activation activation = Activation::rbf;  // eem / welm
  int h = 100;
  std::optional<double> gamma;  // eekm
  std::uint64_t seed = 0;
  WelmWeighting weighting = WelmWeighting::balanced;  // welm

  std::string describe() const;
};

struct EvalOptions {
  int k = 10;
  int repeats = 10;
  std::uint64_t seed = 0;
  // fit the [0,1] scaler on the whole dataset instead of per training fold
  bool scale_globally = false;
  double jitter = 0.0;
  int threads = 1;
  entropy::DcsFormula dcs_formula = entropy::DcsFormula::corrected;
  // tune_by_gaussian_dcs: empirical variance of the projections (default) or
  // the quadratic-form variance beta^T Sigma beta
  bool empirical_projection_variance = true;
};

struct EvalReport {
  ModelConfig config;
  std::vector<double> fold_gmeans;         // in [0,1], skipped folds excluded
  std::vector<double> fold_train_seconds;  // wall clock per fitted fold
  int skipped_folds = 0;                   // single-class training folds
  int clamped_h = 0;                       // nonzero when eekm h was capped at fold size
  double mean_gmean = 0.0;
  double std_gmean = 0.0;
};

using FittedModel = std::variant<EemModel, WelmModel>;

// Fit one configuration on an already-scaled training set.
FittedModel fit_config(const ModelConfig& cfg, const Eigen::MatrixXd& X,
                       const Eigen::VectorXi& y, std::uint64_t map_seed,
                       double jitter = 0.0);
Eigen::VectorXi predict_config(const FittedModel& model, const Eigen::MatrixXd& X);
Eigen::VectorXd project_config(const FittedModel& model, const Eigen::MatrixXd& X);

// Repeated stratified k-fold cross-validation: per fold, fit the scaler on the
// training part, fit the model, score GMean on the test part.
EvalReport cross_validate(const Dataset& ds, const ModelConfig& cfg,
                          const EvalOptions& opts);

// Exhaustive grid search; best = argmax mean GMean, ties broken by smaller h,
// then smaller gamma.
std::pair<ModelConfig, std::vector<EvalReport>> grid_search_cv(
    const Dataset& ds, const std::vector<ModelConfig>& grid, const EvalOptions& opts);

struct TuneResult {
  ModelConfig config;  // winner
  double score = 0.0;
  std::vector<std::pair<ModelConfig, double>> scores;  // all configs that fitted
};

// Entropy-based selection: every config is fitted once on the full (scaled)
// dataset and scored by the Cauchy-Schwarz divergence of the projected class
// densities; no fold retraining.
TuneResult tune_by_gaussian_dcs(const Dataset& ds, const std::vector<ModelConfig>& grid,
                                const EvalOptions& opts);
TuneResult tune_by_kde_dcs(const Dataset& ds, const std::vector<ModelConfig>& grid,
                           const EvalOptions& opts);

// For each Hilbert-space dimension: sample random rbf maps and random normal
// operators beta, score each pair by the surrogate term and by the full
// Gaussian Dcs, and return the Spearman correlation of the two lists.
std::vector<std::pair<int, double>> spearman_experiment(
    const Dataset& ds, const std::vector<int>& dims, int n_projections,
    int n_operators, std::uint64_t seed);

// cross_validate per hidden layer size; emits (h, mean GMean) pairs.
std::vector<std::pair<int, double>> stability_sweep(const Dataset& ds,
                                                    const std::vector<int>& h_values,
                                                    const ModelConfig& tmpl,
                                                    const EvalOptions& opts);

// Median wall-clock training seconds over `runs` fits on the full scaled set.
double bench_train_seconds(const Dataset& ds, const ModelConfig& cfg,
                           const EvalOptions& opts, int runs = 3);

std::string to_json(const EvalReport& report);
std::string to_text(const EvalReport& report);

}  // namespace eemkit::eval
