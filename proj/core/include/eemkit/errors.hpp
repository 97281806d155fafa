#pragma once

#include <stdexcept>
#include <string>

namespace eemkit {

// Bad input: parse failures, shape mismatches, invalid labels, missing files.
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: singular covariance, non-positive variance, degenerate
// class statistics. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eemkit
