// Command line front end: train, predict, evaluate, tune, experiment.
// Exit codes: 0 ok, 2 input/data error, 3 numerical error.

#include "eemkit/dataset.hpp"
#include "eemkit/eem.hpp"
#include "eemkit/errors.hpp"
#include "eemkit/eval.hpp"
#include "eemkit/metrics.hpp"
#include "eemkit/model_io.hpp"
#include "eemkit/rng.hpp"
#include "eemkit/welm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace eemkit;

struct CommonArgs {
  std::string data_path;
  std::string format = "libsvm";
  int label_column = 0;
  bool csv_header = false;
  std::uint64_t seed = 0;
  int threads = 1;
  double jitter = 0.0;
  bool scale_globally = false;
  std::string dcs_formula = "corrected";
};

void add_data_flags(CLI::App* cmd, CommonArgs& a, bool required = true) {
  auto* opt = cmd->add_option("--data", a.data_path, "dataset file");
  if (required) opt->required();
  cmd->add_option("--format", a.format, "data format")
      ->check(CLI::IsMember({"libsvm", "csv"}))
      ->capture_default_str();
  cmd->add_option("--label-column", a.label_column,
                  "csv label column index (negatives count from the end)")
      ->capture_default_str();
  cmd->add_flag("--csv-header", a.csv_header, "skip a csv header line");
}

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--seed", a.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", a.threads, "worker threads (folds/configs)")
      ->capture_default_str();
  cmd->add_option("--jitter", a.jitter,
                  "add jitter*I to the combined covariance before inverting");
  cmd->add_flag("--scale-globally", a.scale_globally,
                "fit the [0,1] scaler on the full dataset instead of per fold");
  cmd->add_option("--dcs-formula", a.dcs_formula, "Gaussian Dcs expression variant")
      ->check(CLI::IsMember({"corrected", "as-printed"}))
      ->capture_default_str();
}

Dataset load_data(const CommonArgs& a) {
  CsvOptions csv;
  csv.label_column = a.label_column;
  csv.has_header = a.csv_header;
  return load(a.data_path, a.format == "csv" ? DataFormat::csv : DataFormat::libsvm, csv);
}

eval::EvalOptions make_eval_options(const CommonArgs& a, int k, int repeats) {
  eval::EvalOptions opts;
  opts.k = k;
  opts.repeats = repeats;
  opts.seed = a.seed;
  opts.scale_globally = a.scale_globally;
  opts.jitter = a.jitter;
  opts.threads = a.threads;
  opts.dcs_formula = a.dcs_formula == "as-printed" ? entropy::DcsFormula::as_printed
                                                   : entropy::DcsFormula::corrected;
  return opts;
}

std::vector<double> parse_costs(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.size() != 2 || out[0] <= 0 || out[1] <= 0)
    throw DataError("--costs expects two positive reals 'C+,C-'");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw DataError("expected a comma-separated integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw DataError("expected a comma-separated list of reals");
  return out;
}

// grid from --grid-h / --grid-gamma, or the single --h/--gamma config
std::vector<eval::ModelConfig> build_grid(const eval::ModelConfig& base,
                                          const std::string& grid_h,
                                          const std::string& grid_gamma) {
  std::vector<int> hs = grid_h.empty() ? std::vector<int>{base.h} : parse_int_list(grid_h);
  std::vector<std::optional<double>> gammas;
  if (!grid_gamma.empty()) {
    for (double g : parse_double_list(grid_gamma)) gammas.emplace_back(g);
  } else {
    gammas.push_back(base.gamma);
  }
  std::vector<eval::ModelConfig> grid;
  for (int h : hs)
    for (const auto& g : gammas) {
      eval::ModelConfig cfg = base;
      cfg.h = h;
      cfg.gamma = g;
      grid.push_back(cfg);
    }
  return grid;
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write '" + out_path + "'");
  out << text << '\n';
}

int cmd_train(const CommonArgs& common, const eval::ModelConfig& cfg,
              const std::string& model_path, const std::string& stamp) {
  Dataset ds = load_data(common);
  ScalingTransform scaler = fit_scaler(ds);
  Eigen::MatrixXd X = apply_scaler(scaler, ds.features);
  if (ds.count_label(+1) < 1 || ds.count_label(-1) < 1)
    throw DataError("training requires both classes");

  eval::FittedModel fitted = eval::fit_config(
      cfg, X, ds.labels, derive_seed(cfg.seed, 0x7121, std::uint64_t(cfg.h), 0),
      common.jitter);

  ModelFile file;
  file.algorithm = eval::to_string(cfg.algorithm);
  file.dataset_name = ds.name;
  file.seed = cfg.seed;
  file.created_at = stamp;
  file.scaler = scaler;  // predict applies the same transform before the map
  if (auto* em = std::get_if<EemModel>(&fitted))
    file.model = std::move(*em);
  else
    file.model = std::move(std::get<WelmModel>(fitted));

  save_model(file, model_path);

  Eigen::VectorXi yhat;
  if (const auto* em = std::get_if<EemModel>(&file.model)) {
    yhat = predict(*em, X);
    std::printf("trained %s on %s: h=%d", file.algorithm.c_str(), ds.name.c_str(),
                cfg.h);
    if (em->trivial()) {
      std::printf(", trivial rule (constant %+d)", em->rule.constant_label);
    } else if (em->rule.kind == DecisionRule::Kind::one_threshold) {
      std::printf(", threshold t0=%.6g", em->rule.t0);
    } else {
      std::printf(", thresholds [%.6g, %.6g] label %+d inside", em->rule.t_lo,
                  em->rule.t_hi, em->rule.inside_label);
    }
  } else {
    const auto& wm = std::get<WelmModel>(file.model);
    yhat = predict_welm(wm, X);
    std::printf("trained welm (%s) on %s: h=%d", to_string(wm.weighting).c_str(),
                ds.name.c_str(), cfg.h);
  }
  const double g = metrics::gmean(metrics::confusion(ds.labels, yhat));
  std::printf(", training GMean %.4g\n", g);
  std::printf("model written to %s\n", model_path.c_str());
  return 0;
}

int cmd_predict(const CommonArgs& common, const std::string& model_path,
                bool proba, const std::string& costs) {
  ModelFile file = load_model(model_path);
  Dataset ds = load_data(common);
  Eigen::MatrixXd X =
      file.scaler ? apply_scaler(*file.scaler, ds.features) : ds.features;

  Eigen::VectorXi labels;
  Eigen::VectorXd probs;
  if (const auto* em = std::get_if<EemModel>(&file.model)) {
    if (!costs.empty()) {
      auto c = parse_costs(costs);
      labels = predict_cost_sensitive(*em, X, c[0], c[1]);
    } else {
      labels = predict(*em, X);
    }
    if (proba) probs = predict_proba(*em, X);
  } else {
    if (!costs.empty())
      throw DataError("--costs applies to eem/eekm models only");
    labels = predict_welm(std::get<WelmModel>(file.model), X);
    if (proba) throw DataError("--proba applies to eem/eekm models only");
  }

  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (proba)
      std::printf("%+d %.17g\n", labels[i], probs[i]);
    else
      std::printf("%+d\n", labels[i]);
  }
  return 0;
}

int cmd_evaluate(const CommonArgs& common, const eval::ModelConfig& base,
                 const std::string& grid_h, const std::string& grid_gamma, int k,
                 int repeats, const std::string& out_path) {
  Dataset ds = load_data(common);
  auto opts = make_eval_options(common, k, repeats);
  auto grid = build_grid(base, grid_h, grid_gamma);

  auto [best, reports] = eval::grid_search_cv(ds, grid, opts);
  std::ostringstream text;
  for (const auto& r : reports) text << eval::to_text(r) << '\n';
  if (grid.size() > 1) text << "best: " << best.describe() << '\n';
  std::cout << text.str();

  if (!out_path.empty()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(nlohmann::json::parse(eval::to_json(r)));
    write_or_print(j.dump(2), out_path);
  }
  return 0;
}

int cmd_tune(const CommonArgs& common, const eval::ModelConfig& base,
             const std::string& grid_h, const std::string& grid_gamma,
             const std::string& method) {
  Dataset ds = load_data(common);
  auto opts = make_eval_options(common, 10, 1);
  auto grid = build_grid(base, grid_h, grid_gamma);
  eval::TuneResult result = method == "dcs-kde" ? eval::tune_by_kde_dcs(ds, grid, opts)
                                                : eval::tune_by_gaussian_dcs(ds, grid, opts);
  for (const auto& [cfg, score] : result.scores)
    std::printf("%-28s  Dcs=%.6g\n", cfg.describe().c_str(), score);
  std::printf("chosen: %s  (Dcs=%.6g)\n", result.config.describe().c_str(), result.score);
  return 0;
}

int cmd_experiment_spearman(const CommonArgs& common, const std::string& dims,
                            int n_projections, int n_operators,
                            const std::string& out_path) {
  Dataset ds = load_data(common);
  auto rows = eval::spearman_experiment(ds, parse_int_list(dims), n_projections,
                                        n_operators, common.seed);
  std::ostringstream tsv;
  tsv << "dim\tspearman\n";
  for (const auto& [dim, rho] : rows) tsv << dim << '\t' << rho << '\n';
  write_or_print(tsv.str(), out_path);
  return 0;
}

int cmd_experiment_stability(const CommonArgs& common, const eval::ModelConfig& base,
                             const std::string& h_values, int k, int repeats,
                             const std::string& out_path) {
  Dataset ds = load_data(common);
  auto opts = make_eval_options(common, k, repeats);
  auto rows = eval::stability_sweep(ds, parse_int_list(h_values), base, opts);
  std::ostringstream tsv;
  tsv << "h\tgmean_mean\n";
  for (const auto& [h, g] : rows) tsv << h << '\t' << g << '\n';
  write_or_print(tsv.str(), out_path);
  return 0;
}

int cmd_experiment_bench(const CommonArgs& common, const eval::ModelConfig& base) {
  Dataset ds = load_data(common);
  auto opts = make_eval_options(common, 10, 1);
  const double sec = eval::bench_train_seconds(ds, base, opts);
  std::printf("%s  train_seconds_median3=%.6g\n", base.describe().c_str(), sec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme Entropy Machine toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  eval::ModelConfig cfg;
  std::string algo = "eem", activation = "rbf", weighting = "balanced";
  double gamma = -1.0;
  std::string model_path, grid_h, grid_gamma, out_path, costs, stamp;
  std::string tune_method = "dcs-gauss", dims = "1,10,100", h_values;
  int k = 10, repeats = 10, n_projections = 100, n_operators = 100;
  bool proba = false;

  auto add_model_flags = [&](CLI::App* cmd, bool need_h) {
    cmd->set_help_flag("--help", "print help");  // frees -h for the --h option
    cmd->add_option("--algo", algo, "algorithm")
        ->check(CLI::IsMember({"eem", "eekm", "welm"}))
        ->capture_default_str();
    cmd->add_option("--activation", activation, "random map activation")
        ->check(CLI::IsMember({"sig", "nsig", "rbf"}))
        ->capture_default_str();
    auto* hopt = cmd->add_option("--h", cfg.h, "hidden units / landmarks");
    if (need_h) hopt->capture_default_str();
    cmd->add_option("--gamma", gamma, "Gaussian kernel width (eekm)");
    cmd->add_option("--weighting", weighting, "welm row weighting")
        ->check(CLI::IsMember({"none", "balanced", "balanced-ratio"}))
        ->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "fit a model and write a model file");
  add_data_flags(train, common);
  add_common_flags(train, common);
  add_model_flags(train, true);
  train->add_option("--model", model_path, "output model file")->required();
  train->add_option("--stamp", stamp, "optional created-at text stored in metadata");

  auto* predict_cmd = app.add_subcommand("predict", "label rows with a saved model");
  add_data_flags(predict_cmd, common);
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_flag("--proba", proba, "also print P(+|x)");
  predict_cmd->add_option("--costs", costs, "cost-sensitive decision 'C+,C-'");

  auto* evaluate = app.add_subcommand("evaluate", "repeated stratified k-fold CV");
  add_data_flags(evaluate, common);
  add_common_flags(evaluate, common);
  add_model_flags(evaluate, true);
  evaluate->add_option("--grid-h", grid_h, "grid of hidden sizes, e.g. 50,100,250");
  evaluate->add_option("--grid-gamma", grid_gamma, "grid of kernel widths");
  evaluate->add_option("-k,--folds", k, "fold count")->capture_default_str();
  evaluate->add_option("--repeats", repeats, "CV repeats")->capture_default_str();
  evaluate->add_option("--out", out_path, "write JSON report here");

  auto* tune = app.add_subcommand("tune", "entropy-based model selection (no folds)");
  add_data_flags(tune, common);
  add_common_flags(tune, common);
  add_model_flags(tune, true);
  tune->add_option("--grid-h", grid_h, "grid of hidden sizes");
  tune->add_option("--grid-gamma", grid_gamma, "grid of kernel widths");
  tune->add_option("--method", tune_method, "selection score")
      ->check(CLI::IsMember({"dcs-gauss", "dcs-kde"}))
      ->capture_default_str();

  auto* experiment = app.add_subcommand("experiment", "protocol experiments");
  experiment->require_subcommand(1);
  auto* spearman = experiment->add_subcommand(
      "spearman", "surrogate-vs-full Dcs rank correlation per dimension");
  add_data_flags(spearman, common);
  add_common_flags(spearman, common);
  spearman->add_option("--dims", dims, "Hilbert dimensions")->capture_default_str();
  spearman->add_option("--n-projections", n_projections)->capture_default_str();
  spearman->add_option("--n-operators", n_operators)->capture_default_str();
  spearman->add_option("--out", out_path, "write TSV here");

  auto* stability = experiment->add_subcommand("stability", "GMean across hidden sizes");
  add_data_flags(stability, common);
  add_common_flags(stability, common);
  add_model_flags(stability, false);
  stability->add_option("--h-values", h_values, "comma-separated hidden sizes")
      ->required();
  stability->add_option("-k,--folds", k)->capture_default_str();
  stability->add_option("--repeats", repeats)->capture_default_str();
  stability->add_option("--out", out_path, "write TSV here");

  auto* bench = experiment->add_subcommand("bench", "median training wall time");
  add_data_flags(bench, common);
  add_common_flags(bench, common);
  add_model_flags(bench, true);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.algorithm = eval::algorithm_from_string(algo);
    cfg.activation = activation_from_string(activation);
    cfg.weighting = welm_weighting_from_string(weighting);
    cfg.seed = common.seed;
    if (gamma > 0.0) cfg.gamma = gamma;
    if (cfg.algorithm == eval::Algorithm::eekm && !cfg.gamma && grid_gamma.empty())
      throw DataError("eekm requires --gamma or --grid-gamma");

    if (train->parsed()) return cmd_train(common, cfg, model_path, stamp);
    if (predict_cmd->parsed()) return cmd_predict(common, model_path, proba, costs);
    if (evaluate->parsed())
      return cmd_evaluate(common, cfg, grid_h, grid_gamma, k, repeats, out_path);
    if (tune->parsed()) return cmd_tune(common, cfg, grid_h, grid_gamma, tune_method);
    if (experiment->parsed()) {
      if (spearman->parsed())
        return cmd_experiment_spearman(common, dims, n_projections, n_operators,
                                       out_path);
      if (stability->parsed())
        return cmd_experiment_stability(common, cfg, h_values, k, repeats, out_path);
      if (bench->parsed()) return cmd_experiment_bench(common, cfg);
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
