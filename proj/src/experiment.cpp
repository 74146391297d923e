#include "chigrid/experiment.hpp"

#include "chigrid/errors.hpp"
#include "chigrid/parallel.hpp"
#include "chigrid/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace chigrid {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

ExperimentLayout experiment_layout(const ExperimentConfig& config) {
  ExperimentLayout layout;
  const double scale = std::pow(2.0 * std::log(config.T), 1.0 / config.alpha);
  const double mesh = config.eta / scale;
  layout.lattice = LatticeSpec::covering(config.T, mesh);
  layout.spacing = grid_spacing(config.grid, config.T, config.alpha, mesh);
  layout.D_effective = layout.spacing.delta_used * scale;
  layout.model = config.r > 0.0 ? CorrelationModel::strong_mixture(config.alpha, config.r, config.T)
                                 : CorrelationModel::exp_power(config.alpha);
  return layout;
}

std::uint64_t constants_seed(std::uint64_t master_seed) {
  return splitmix64(master_seed ^ 0x5049434b414e4453ULL);
}

ConstantsRecord resolve_constants(const ExperimentConfig& config, const ExperimentLayout& layout,
                                  unsigned workers) {
  ConstantsRecord rec;
  rec.source = config.constants_source;
  const bool pickands_grid = config.grid.kind == GridKind::Pickands;
  double H_alpha = 0.0;
  double H_D_alpha = 0.0;

  if (config.constants_source == ConstantsSource::Provided) {
    H_alpha = *config.H_alpha;
    if (pickands_grid) {
      H_D_alpha = *config.H_D_alpha;
      for (const auto& [x, y] : config.eval_points) {
        const auto it = std::find_if(config.pickands_term.begin(), config.pickands_term.end(),
                                     [&](const PickandsTermEntry& e) { return e.x == x && e.y == y; });
        PickandsEstimate term;
        term.kind = PickandsKind::TwoIndex;
        term.value = it->value;
        rec.pickands_terms.push_back(term);
      }
    }
  } else {
    auto settings = config.pickands;
    settings.workers = workers;
    const double D = pickands_grid ? layout.D_effective : 0.0;
    const auto ensemble = DriftedFieldEnsemble::simulate(config.alpha, D, settings,
                                                         constants_seed(config.master_seed));
    rec.H_alpha_estimate = ensemble.continuous();
    H_alpha = rec.H_alpha_estimate->value;
    if (pickands_grid) {
      rec.H_D_alpha_estimate = ensemble.grid();
      H_D_alpha = rec.H_D_alpha_estimate->value;
      for (const auto& [x, y] : config.eval_points) {
        rec.pickands_terms.push_back(ensemble.pickands_term(x, y, config.m, H_alpha, H_D_alpha));
      }
    }
  }

  rec.norm = norm_constants(config.T, config.m, config.alpha, config.grid.kind, H_alpha, H_D_alpha,
                            layout.spacing.delta_used);

  if (pickands_grid) {
    for (std::size_t i = 0; i < config.eval_points.size(); ++i) {
      const auto [x, y] = config.eval_points[i];
      const double upper = std::min(std::exp(-x), std::exp(-y));
      auto& term = rec.pickands_terms[i];
      // Monte Carlo noise may push an estimate slightly past its bound.
      if (term.value > upper + kFrechetSlack && term.value <= upper + 3.0 * term.std_error) {
        term.value = upper;
        rec.clamped_points.push_back(i);
      }
    }
  }
  return rec;
}

LimitSpec limit_spec_at(const ExperimentConfig& config, const ConstantsRecord& constants,
                        std::size_t point_index) {
  LimitSpec spec;
  spec.m = config.m;
  spec.r = config.r;
  spec.grid_kind = config.grid.kind;
  if (config.grid.kind == GridKind::Pickands) {
    spec.pickands_term = constants.pickands_terms.at(point_index).value;
  }
  return spec;
}

ComparisonReport compare(const std::vector<NormalizedPair>& samples, const ExperimentConfig& config,
                         const ConstantsRecord& constants) {
  if (samples.empty()) {
    throw DomainError("comparison needs at least one replication");
  }
  ComparisonReport report;
  report.eval_points = config.eval_points;

  std::vector<std::pair<double, double>> pairs;
  std::vector<double> cont;
  std::vector<double> grid;
  pairs.reserve(samples.size());
  cont.reserve(samples.size());
  grid.reserve(samples.size());
  for (const auto& s : samples) {
    pairs.emplace_back(s.cont, s.grid);
    cont.push_back(s.cont);
    grid.push_back(s.grid);
  }
  report.empirical = empirical_joint_cdf(pairs, report.eval_points);

  for (std::size_t i = 0; i < report.eval_points.size(); ++i) {
    const auto [x, y] = report.eval_points[i];
    const double theory = limit_joint(x, y, limit_spec_at(config, constants, i));
    report.theoretical.push_back(theory);
    report.per_point.push_back(report.empirical[i] - theory);
    report.sup_distance = std::max(report.sup_distance, std::abs(report.per_point.back()));
  }

  const auto marginal = [&](double x) { return limit_marginal(x, config.r, config.m); };
  report.marginal_ks_cont = ks_distance(cont, marginal);
  report.marginal_ks_grid = ks_distance(grid, marginal);
  return report;
}

ReplicationResult run_replication(const VectorChiSampler& sampler, const ExperimentLayout& layout,
                                  const ExperimentConfig& config, const NormConstants& norm,
                                  std::uint64_t index) {
  auto rng = RngStream::for_replication(config.master_seed, index);
  const auto chi = chi_path(sampler.sample(rng));
  ReplicationResult out;
  out.pair = maxima_pair(chi, layout.spacing.stride, config.T);
  out.normalized.cont = norm.normalize_cont(out.pair.m_cont);
  out.normalized.grid = norm.normalize_grid(out.pair.m_grid);
  if (!std::isfinite(out.normalized.cont) || !std::isfinite(out.normalized.grid)) {
    throw NumericalError("non-finite normalized maximum in replication " + std::to_string(index));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers) {
  ExperimentResult result;
  result.config = config;
  result.layout = experiment_layout(config);

  auto start = std::chrono::steady_clock::now();
  result.constants = resolve_constants(config, result.layout, workers);
  result.constants_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const VectorChiSampler sampler(result.layout.model, result.layout.lattice, config.m);
  result.replications.resize(config.n_rep);
  parallel_for(config.n_rep, workers, [&](std::size_t i) {
    result.replications[i] = run_replication(sampler, result.layout, config, result.constants.norm, i);
  });
  result.replication_seconds = seconds_since(start);

  std::vector<NormalizedPair> samples;
  samples.reserve(result.replications.size());
  for (const auto& r : result.replications) {
    samples.push_back(r.normalized);
  }
  result.report = compare(samples, config, result.constants);
  return result;
}

} // namespace chigrid
