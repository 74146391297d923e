#pragma once

#include "chigrid/chiproc.hpp"
#include "chigrid/pickands.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace chigrid {

enum class ConstantsSource { Estimate, Provided };

struct PickandsTermEntry {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

struct ExperimentConfig {
  std::size_t m = 1;
  double alpha = 1.0;
  double r = 0.0;
  double T = 0.0;
  GridSpec grid;
  double eta = 0.05;
  std::size_t n_rep = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::pair<double, double>> eval_points;
  ConstantsSource constants_source = ConstantsSource::Estimate;
  std::optional<double> H_alpha;
  std::optional<double> H_D_alpha;
  std::vector<PickandsTermEntry> pickands_term;
  /// Settings for constant estimation; defaults follow alpha.
  PickandsSettings pickands;
};

/// {-2, -1, 0, 1, 2, 3}^2, x-major.
std::vector<std::pair<double, double>> default_eval_points();

/// Parses and validates a JSON config document. Throws ParseError for
/// malformed JSON (including duplicate keys) and ValidationError naming the
/// offending field path.
ExperimentConfig parse_config(std::string_view document);

/// Normalized echo of a config, with defaults applied.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

} // namespace chigrid
