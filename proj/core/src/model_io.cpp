#include "eemkit/model_io.hpp"

#include "eemkit/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace eemkit {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) return Eigen::MatrixXd(0, 0);
  const auto rows = Eigen::Index(j.size());
  const auto cols = Eigen::Index(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(std::size_t(i));
    if (Eigen::Index(row.size()) != cols)
      throw DataError("model file: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row.at(std::size_t(c)).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(Eigen::Index(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(std::size_t(i)).get<double>();
  return v;
}

json map_to_json(const FeatureMap& map) {
  json j;
  if (const auto* rm = std::get_if<RandomMapSpec>(&map)) {
    j["kind"] = "random";
    j["activation"] = to_string(rm->kind);
    j["h"] = rm->h;
    j["d"] = rm->d;
    j["seed"] = rm->seed;
    j["W"] = matrix_to_json(rm->W);
    j["b"] = vector_to_json(rm->b);
  } else if (const auto* nm = std::get_if<NystromMapSpec>(&map)) {
    j["kind"] = "nystrom";
    j["gamma"] = nm->gamma;
    j["seed"] = nm->seed;
    j["landmarks"] = matrix_to_json(nm->landmarks);
    j["kroot"] = matrix_to_json(nm->kroot);
  } else {
    const auto& cm = std::get<CollapsedKernelMapSpec>(map);
    j["kind"] = "collapsed-kernel";
    j["gamma"] = cm.gamma;
    j["landmarks"] = matrix_to_json(cm.landmarks);
  }
  return j;
}

FeatureMap map_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "random") {
    RandomMapSpec rm;
    rm.kind = activation_from_string(j.at("activation").get<std::string>());
    rm.h = j.at("h").get<int>();
    rm.d = j.at("d").get<int>();
    rm.seed = j.at("seed").get<std::uint64_t>();
    rm.W = matrix_from_json(j.at("W"));
    rm.b = vector_from_json(j.at("b"));
    return rm;
  }
  if (kind == "nystrom") {
    NystromMapSpec nm;
    nm.gamma = j.at("gamma").get<double>();
    nm.seed = j.at("seed").get<std::uint64_t>();
    nm.landmarks = matrix_from_json(j.at("landmarks"));
    nm.kroot = matrix_from_json(j.at("kroot"));
    return nm;
  }
  if (kind == "collapsed-kernel") {
    CollapsedKernelMapSpec cm;
    cm.gamma = j.at("gamma").get<double>();
    cm.landmarks = matrix_from_json(j.at("landmarks"));
    return cm;
  }
  throw DataError("model file: unknown map kind '" + kind + "'");
}

json rule_to_json(const DecisionRule& rule) {
  json j;
  switch (rule.kind) {
    case DecisionRule::Kind::one_threshold:
      j["kind"] = "one-threshold";
      j["t0"] = rule.t0;
      break;
    case DecisionRule::Kind::two_threshold:
      j["kind"] = "two-threshold";
      j["t_lo"] = rule.t_lo;
      j["t_hi"] = rule.t_hi;
      j["inside_label"] = rule.inside_label;
      break;
    case DecisionRule::Kind::trivial:
      j["kind"] = "trivial";
      j["constant_label"] = rule.constant_label;
      break;
  }
  return j;
}

DecisionRule rule_from_json(const json& j) {
  DecisionRule rule;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one-threshold") {
    rule.kind = DecisionRule::Kind::one_threshold;
    rule.t0 = j.at("t0").get<double>();
  } else if (kind == "two-threshold") {
    rule.kind = DecisionRule::Kind::two_threshold;
    rule.t_lo = j.at("t_lo").get<double>();
    rule.t_hi = j.at("t_hi").get<double>();
    rule.inside_label = j.at("inside_label").get<int>();
  } else if (kind == "trivial") {
    rule.kind = DecisionRule::Kind::trivial;
    rule.constant_label = j.at("constant_label").get<int>();
  } else {
    throw DataError("model file: unknown rule kind '" + kind + "'");
  }
  return rule;
}

json eem_to_json(const EemModel& m) {
  json j;
  j["map"] = map_to_json(m.map);
  j["beta"] = vector_to_json(m.beta);
  j["projected"] = {{"mean_pos", m.projected.mean_pos},
                    {"var_pos", m.projected.var_pos},
                    {"mean_neg", m.projected.mean_neg},
                    {"var_neg", m.projected.var_neg}};
  j["rule"] = rule_to_json(m.rule);
  j["priors"] = {{"pos", m.prior_pos}, {"neg", m.prior_neg}};
  return j;
}

EemModel eem_from_json(const json& j) {
  EemModel m;
  m.map = map_from_json(j.at("map"));
  m.beta = vector_from_json(j.at("beta"));
  const auto& p = j.at("projected");
  m.projected.mean_pos = p.at("mean_pos").get<double>();
  m.projected.var_pos = p.at("var_pos").get<double>();
  m.projected.mean_neg = p.at("mean_neg").get<double>();
  m.projected.var_neg = p.at("var_neg").get<double>();
  m.rule = rule_from_json(j.at("rule"));
  m.prior_pos = j.at("priors").at("pos").get<double>();
  m.prior_neg = j.at("priors").at("neg").get<double>();
  return m;
}

json welm_to_json(const WelmModel& m) {
  json j;
  j["map"] = map_to_json(FeatureMap(m.map));
  j["beta"] = vector_to_json(m.beta);
  j["weighting"] = to_string(m.weighting);
  return j;
}

WelmModel welm_from_json(const json& j) {
  WelmModel m;
  FeatureMap map = map_from_json(j.at("map"));
  const auto* rm = std::get_if<RandomMapSpec>(&map);
  if (!rm) throw DataError("model file: welm requires a random map");
  m.map = *rm;
  m.beta = vector_from_json(j.at("beta"));
  m.weighting = welm_weighting_from_string(j.at("weighting").get<std::string>());
  return m;
}

}  // namespace

void save_model(const ModelFile& file, const std::string& path) {
  json j;
  j["format_version"] = file.format_version;
  j["algorithm"] = file.algorithm;
  j["metadata"] = {{"dataset", file.dataset_name}, {"seed", file.seed}};
  if (!file.created_at.empty()) j["metadata"]["created_at"] = file.created_at;
  if (const auto* em = std::get_if<EemModel>(&file.model))
    j["model"] = eem_to_json(*em);
  else
    j["model"] = welm_to_json(std::get<WelmModel>(file.model));
  if (file.scaler) {
    j["scaler"] = {{"min", vector_to_json(file.scaler->min)},
                   {"range", vector_to_json(file.scaler->range)}};
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model file '" + path + "': " + e.what());
  }
  try {
    ModelFile file;
    file.format_version = j.at("format_version").get<int>();
    if (file.format_version != 1)
      throw DataError("unsupported model format version " +
                      std::to_string(file.format_version));
    file.algorithm = j.at("algorithm").get<std::string>();
    file.dataset_name = j.at("metadata").at("dataset").get<std::string>();
    file.seed = j.at("metadata").at("seed").get<std::uint64_t>();
    if (j.at("metadata").contains("created_at"))
      file.created_at = j.at("metadata").at("created_at").get<std::string>();
    if (file.algorithm == "welm")
      file.model = welm_from_json(j.at("model"));
    else
      file.model = eem_from_json(j.at("model"));
    if (j.contains("scaler")) {
      ScalingTransform t;
      t.min = vector_from_json(j.at("scaler").at("min"));
      t.range = vector_from_json(j.at("scaler").at("range"));
      file.scaler = std::move(t);
    }
    return file;
  } catch (const json::exception& e) {
    throw DataError("model file '" + path + "': " + e.what());
  }
}

}  // namespace eemkit
