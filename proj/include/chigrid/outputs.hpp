#pragma once

// Persistence of experiment results.
//
//   manifest.json  config echo, seed, version, lattice, grid and constants
//   samples.csv    replication_index,m_cont,m_grid,norm_cont,norm_grid
//   cdf.csv        x,y,empirical,theoretical,diff
//   summary.json   sup_distance and marginal KS distances
//   timing.json    wall-clock runtimes (the only file that varies between
//                  identical runs)
//
// CSV files use '.' decimals, '\n' line ends, a header row and the
// shortest decimal form that round-trips each double.

#include "chigrid/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace chigrid {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

struct Manifest {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
};

nlohmann::ordered_json manifest_json(const ExperimentResult& result);
nlohmann::ordered_json summary_json(const ExperimentResult& result);
nlohmann::ordered_json constants_json(const ConstantsRecord& constants);
nlohmann::ordered_json estimate_json(const PickandsEstimate& estimate);

std::string samples_csv(const std::vector<ReplicationResult>& replications);
std::string cdf_csv(const ComparisonReport& report);

/// Creates `directory` if needed. Throws IoError if it already holds files
/// and `force` is false, or on any write failure.
void prepare_output_directory(const std::filesystem::path& directory, bool force);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

Manifest write_outputs(const ExperimentResult& result, const std::filesystem::path& directory,
                       bool force);

} // namespace chigrid
