#pragma once

// Seeded, worker-count-invariant Monte Carlo experiments comparing the
// empirical joint CDF of normalized (continuous, grid) chi maxima with
// the limiting law.

#include "chigrid/chiproc.hpp"
#include "chigrid/config.hpp"
#include "chigrid/gaussim.hpp"
#include "chigrid/pickands.hpp"
#include "chigrid/theory.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace chigrid {

struct NormalizedPair {
  double cont = 0.0; // a_T (m_cont - b_T)
  double grid = 0.0; // a_T (m_grid - b_{delta,T})
};

struct ReplicationResult {
  MaximaPair pair;
  NormalizedPair normalized;
};

/// Simulation layout derived from a config: mesh eta (2 ln T)^(-1/alpha)
/// covering [0, T], and the snapped grid.
struct ExperimentLayout {
  LatticeSpec lattice;
  GridSpacing spacing;
  /// delta_used (2 ln T)^(1/alpha): grid spacing on the Pickands scale.
  double D_effective = 0.0;
  CorrelationModel model;
};

ExperimentLayout experiment_layout(const ExperimentConfig& config);

/// Constants entering the normalization and the limit.
struct ConstantsRecord {
  ConstantsSource source = ConstantsSource::Estimate;
  NormConstants norm;
  std::optional<PickandsEstimate> H_alpha_estimate;
  std::optional<PickandsEstimate> H_D_alpha_estimate;
  /// Pickands grids: one term per eval point (value and stderr when estimated).
  std::vector<PickandsEstimate> pickands_terms;
  /// Eval points whose estimated term exceeded min(e^-x, e^-y) within
  /// three standard errors and was clamped to it.
  std::vector<std::size_t> clamped_points;
};

/// Seed used for constant estimation, derived from the master seed.
std::uint64_t constants_seed(std::uint64_t master_seed);

/// Resolves H_alpha, H_{D,alpha} and the Pickands-grid terms (estimating
/// them when the config asks to) and the normalization constants.
ConstantsRecord resolve_constants(const ExperimentConfig& config, const ExperimentLayout& layout,
                                  unsigned workers);

/// Limit spec for one eval point, checking Fréchet bounds on the term.
LimitSpec limit_spec_at(const ExperimentConfig& config, const ConstantsRecord& constants,
                        std::size_t point_index);

struct ComparisonReport {
  std::vector<std::pair<double, double>> eval_points;
  std::vector<double> empirical;
  std::vector<double> theoretical;
  std::vector<double> per_point; // empirical - theoretical
  double sup_distance = 0.0;
  double marginal_ks_cont = 0.0;
  double marginal_ks_grid = 0.0;
};

/// Empirical CDF at the eval points, the limit, and marginal KS distances
/// against the mixed Gumbel law.
ComparisonReport compare(const std::vector<NormalizedPair>& samples, const ExperimentConfig& config,
                         const ConstantsRecord& constants);

struct ExperimentResult {
  ExperimentConfig config;
  ExperimentLayout layout;
  ConstantsRecord constants;
  std::vector<ReplicationResult> replications;
  ComparisonReport report;
  double constants_seconds = 0.0;
  double replication_seconds = 0.0;
};

/// One replication: stream (master_seed, index), sample, chi path, maxima.
ReplicationResult run_replication(const VectorChiSampler& sampler, const ExperimentLayout& layout,
                                  const ExperimentConfig& config, const NormConstants& norm,
                                  std::uint64_t index);

/// Full pipeline. The result is identical for any number of workers.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers);

} // namespace chigrid
