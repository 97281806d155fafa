#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eemkit {

// Binary-labeled dense dataset. Labels are strictly -1/+1.
struct Dataset {
  Eigen::MatrixXd features;  // N x d
  Eigen::VectorXi labels;    // entries in {-1, +1}
  std::string name;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
  int count_label(int label) const;
};

enum class DataFormat { libsvm, csv };

struct CsvOptions {
  int label_column = 0;
  bool has_header = false;
};

// Load a dataset. Labels in {-1,+1} are kept, {0,1} are remapped 0 -> -1,
// anything else is a DataError with the offending line number.
Dataset load(const std::string& path, DataFormat format,
             const CsvOptions& csv = {});

// Write in libsvm text format (zeros omitted, 17 significant digits).
void save_libsvm(const Dataset& ds, const std::string& path);

// Per-feature affine map x -> (x - min) / range fitted on training data.
// Zero-range features map to constant 0.
struct ScalingTransform {
  Eigen::VectorXd min;    // per-feature minimum
  Eigen::VectorXd range;  // per-feature max - min, entries >= 0
};

ScalingTransform fit_scaler(const Dataset& ds);
Dataset apply_scaler(const ScalingTransform& t, const Dataset& ds);
Eigen::MatrixXd apply_scaler(const ScalingTransform& t, const Eigen::MatrixXd& X);

// Repeated stratified k-fold plan. Within one repeat the test sets partition
// [0, N). Deterministic given the seed.
struct FoldPlan {
  struct Split {
    std::vector<int> train;
    std::vector<int> test;
  };
  std::vector<Split> splits;  // repeats * k entries, repeat-major
  int k = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  // set when k exceeds the smaller class size; folds may lack minority samples
  bool minority_deficit = false;
};

FoldPlan stratified_kfold(const Dataset& ds, int k, int repeats, std::uint64_t seed);

// (X+, X-) row partitions, in-class row order preserved.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_by_class(const Dataset& ds);

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& idx);
Eigen::VectorXi take_rows(const Eigen::VectorXi& y, const std::vector<int>& idx);

}  // namespace eemkit
