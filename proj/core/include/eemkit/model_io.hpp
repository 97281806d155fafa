#pragma once

#include "eemkit/dataset.hpp"
#include "eemkit/eem.hpp"
#include "eemkit/welm.hpp"

#include <optional>
#include <string>
#include <variant>

namespace eemkit {

// On-disk model: format version, algorithm tag, full map arrays, beta,
// projected stats, decision rule, priors, training metadata. 64-bit values
// survive the round trip exactly (shortest-round-trip decimal serialization).
struct ModelFile {
  int format_version = 1;
  std::string algorithm;  // "eem" | "eekm" | "welm"
  std::variant<EemModel, WelmModel> model;
  // the [0,1] scaler fitted on the training data, applied before the map
  std::optional<ScalingTransform> scaler;
  std::string dataset_name;
  std::uint64_t seed = 0;
  std::string created_at;  // empty unless explicitly stamped
};

void save_model(const ModelFile& file, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace eemkit
