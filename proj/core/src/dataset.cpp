#include "eemkit/dataset.hpp"

#include "eemkit/errors.hpp"
#include "eemkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eemkit {

namespace {

int parse_label(const std::string& tok, std::size_t line_no) {
  double v;
  try {
    std::size_t pos = 0;
    v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": unparseable label '" + tok + "'");
  }
  if (v == 1.0) return +1;
  if (v == -1.0) return -1;
  if (v == 0.0) return -1;  // {0,1} labeling, 0 -> -1
  throw DataError("line " + std::to_string(line_no) + ": label outside {-1,0,+1}");
}

void validate(const Dataset& ds) {
  if (ds.rows() < 1 || ds.cols() < 1)
    throw DataError("dataset must have at least one row and one feature");
  if (!ds.features.allFinite())
    throw DataError("dataset contains NaN or infinite feature values");
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<int> labels;
  std::vector<std::vector<std::pair<int, double>>> rows;
  int max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments and blank lines
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    labels.push_back(parse_label(tok, line_no));
    std::vector<std::pair<int, double>> entries;
    int prev_index = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw DataError("line " + std::to_string(line_no) + ": expected index:value, got '" + tok + "'");
      int idx;
      double val;
      try {
        idx = std::stoi(tok.substr(0, colon));
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad feature entry '" + tok + "'");
      }
      if (idx < 1)
        throw DataError("line " + std::to_string(line_no) + ": indices are 1-based");
      if (idx <= prev_index)
        throw DataError("line " + std::to_string(line_no) + ": indices must be ascending");
      prev_index = idx;
      max_index = std::max(max_index, idx);
      entries.emplace_back(idx, val);
    }
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw DataError("'" + path + "': no data rows");

  Dataset ds;
  ds.features = Eigen::MatrixXd::Zero(Eigen::Index(rows.size()), max_index);
  ds.labels.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.labels[Eigen::Index(i)] = labels[i];
    for (const auto& [idx, val] : rows[i]) ds.features(Eigen::Index(i), idx - 1) = val;
  }
  return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = opt.has_header;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (ncols == 0) {
      ncols = cells.size();
      if (ncols < 2)
        throw DataError("line " + std::to_string(line_no) + ": need a label and at least one feature");
    } else if (cells.size() != ncols) {
      throw DataError("line " + std::to_string(line_no) + ": inconsistent column count (" +
                      std::to_string(cells.size()) + " vs " + std::to_string(ncols) + ")");
    }
    const int lcol = opt.label_column >= 0 ? opt.label_column
                                           : int(ncols) + opt.label_column;
    if (lcol < 0 || lcol >= int(ncols))
      throw DataError("label column " + std::to_string(opt.label_column) + " out of range");
    labels.push_back(parse_label(cells[std::size_t(lcol)], line_no));
    std::vector<double> feat;
    feat.reserve(ncols - 1);
    for (std::size_t c = 0; c < ncols; ++c) {
      if (int(c) == lcol) continue;
      try {
        std::size_t pos = 0;
        feat.push_back(std::stod(cells[c], &pos));
        if (pos != cells[c].size()) throw std::invalid_argument(cells[c]);
      } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": unparseable value '" + cells[c] + "'");
      }
    }
    rows.push_back(std::move(feat));
  }
  if (rows.empty()) throw DataError("'" + path + "': no data rows");

  Dataset ds;
  ds.features.resize(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
  ds.labels.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.labels[Eigen::Index(i)] = labels[i];
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      ds.features(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  }
  return ds;
}

}  // namespace

int Dataset::count_label(int label) const {
  return int((labels.array() == label).count());
}

Dataset load(const std::string& path, DataFormat format, const CsvOptions& csv) {
  Dataset ds = format == DataFormat::libsvm ? load_libsvm(path) : load_csv(path, csv);
  auto slash = path.find_last_of("/\\");
  ds.name = slash == std::string::npos ? path : path.substr(slash + 1);
  if (auto dot = ds.name.find_last_of('.'); dot != std::string::npos) ds.name.resize(dot);
  validate(ds);
  return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  char buf[64];
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    out << (ds.labels[i] > 0 ? "+1" : "-1");
    for (Eigen::Index j = 0; j < ds.cols(); ++j) {
      const double v = ds.features(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, " %lld:%.17g", static_cast<long long>(j + 1), v);
      out << buf;
    }
    out << '\n';
  }
}

ScalingTransform fit_scaler(const Dataset& ds) {
  if (ds.rows() < 1) throw DataError("fit_scaler: empty dataset");
  ScalingTransform t;
  t.min = ds.features.colwise().minCoeff();
  t.range = ds.features.colwise().maxCoeff().transpose() - t.min;
  return t;
}

Eigen::MatrixXd apply_scaler(const ScalingTransform& t, const Eigen::MatrixXd& X) {
  if (X.cols() != t.min.size())
    throw DataError("apply_scaler: dimension mismatch");
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (t.range[j] > 0.0)
      out.col(j) = (X.col(j).array() - t.min[j]) / t.range[j];
    else
      out.col(j).setZero();
  }
  return out;
}

Dataset apply_scaler(const ScalingTransform& t, const Dataset& ds) {
  Dataset out = ds;
  out.features = apply_scaler(t, ds.features);
  return out;
}

FoldPlan stratified_kfold(const Dataset& ds, int k, int repeats, std::uint64_t seed) {
  if (k < 2) throw DataError("stratified_kfold: k must be >= 2");
  if (repeats < 1) throw DataError("stratified_kfold: repeats must be >= 1");
  const int npos = ds.count_label(+1);
  const int nneg = ds.count_label(-1);
  if (npos + nneg != ds.rows())
    throw DataError("stratified_kfold: labels must be -1/+1");

  FoldPlan plan;
  plan.k = k;
  plan.repeats = repeats;
  plan.seed = seed;
  plan.minority_deficit = std::min(npos, nneg) < k;
  plan.splits.reserve(std::size_t(k) * std::size_t(repeats));

  std::vector<int> pos_idx, neg_idx;
  for (Eigen::Index i = 0; i < ds.rows(); ++i)
    (ds.labels[i] > 0 ? pos_idx : neg_idx).push_back(int(i));

  for (int rep = 0; rep < repeats; ++rep) {
    // shuffle each class with its own seed-derived stream, deal round-robin
    std::vector<std::vector<int>> fold_test;
    fold_test.resize(std::size_t(k));
    for (int cls = 0; cls < 2; ++cls) {
      std::vector<int> idx = cls == 0 ? pos_idx : neg_idx;
      Rng rng(derive_seed(seed, std::uint64_t(rep), std::uint64_t(cls), 0xf01d));
      rng.shuffle(idx);
      for (std::size_t i = 0; i < idx.size(); ++i)
        fold_test[i % std::size_t(k)].push_back(idx[i]);
    }
    for (int f = 0; f < k; ++f) {
      FoldPlan::Split split;
      split.test = fold_test[std::size_t(f)];
      std::sort(split.test.begin(), split.test.end());
      std::vector<char> in_test(std::size_t(ds.rows()), 0);
      for (int i : split.test) in_test[std::size_t(i)] = 1;
      for (Eigen::Index i = 0; i < ds.rows(); ++i)
        if (!in_test[std::size_t(i)]) split.train.push_back(int(i));
      plan.splits.push_back(std::move(split));
    }
  }
  return plan;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_by_class(const Dataset& ds) {
  std::vector<int> pos, neg;
  for (Eigen::Index i = 0; i < ds.rows(); ++i)
    (ds.labels[i] > 0 ? pos : neg).push_back(int(i));
  return {take_rows(ds.features, pos), take_rows(ds.features, neg)};
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(Eigen::Index(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(Eigen::Index(i)) = X.row(idx[i]);
  return out;
}

Eigen::VectorXi take_rows(const Eigen::VectorXi& y, const std::vector<int>& idx) {
  Eigen::VectorXi out(Eigen::Index(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[Eigen::Index(i)] = y[idx[i]];
  return out;
}

}  // namespace eemkit
