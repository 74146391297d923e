#pragma once

// Monte Carlo estimation of the Pickands constant H_alpha, its grid
// version H_{D,alpha}, and the two-index constant H^{x,y}_{D,alpha_0}.
//
// All three are expectations of functionals of exp(max B*) with
// B*(t) = sqrt(2) B_{alpha/2}(t) - t^alpha on [0, lambda]. Two estimators
// are offered:
//
//  Plain   i.i.d. draws of B*, sample mean of exp(max)/lambda. Simple but
//          exp(max) is heavy tailed (for alpha = 2 its second moment is
//          of order exp(lambda^2)), so the sample mean badly undershoots.
//
//  Tilted  importance sampling from Q = (1/N) sum_j P_j, where
//          dP_j/dP = exp(B*(t_j)) over the N lattice points t_j. Under P_j
//          the field is sqrt(2) B(s) + t_j^alpha - |s - t_j|^alpha, and
//          dP/dQ = 1 / mean_j exp(B*(t_j)), which makes the per-draw
//          ratio exp(max) dP/dQ lie in [1, N]. The estimator is unbiased
//          for the same lattice quantity as Plain.

#include "chigrid/gaussim.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace chigrid {

enum class PickandsKind { Continuous, Grid, TwoIndex };
enum class PickandsEstimator { Plain, Tilted };

std::string_view to_string(PickandsKind kind);
std::string_view to_string(PickandsEstimator estimator);
PickandsEstimator pickands_estimator_from_string(std::string_view name);

inline constexpr std::size_t kMinPickandsReplications = 100;

struct PickandsSettings {
  double lambda = 50.0;
  double mesh = 0.02;
  std::size_t n_rep = 20000;
  PickandsEstimator estimator = PickandsEstimator::Tilted;
  unsigned workers = 1;

  /// lambda = 50, mesh = 0.02 for alpha <= 1; lambda = 20, mesh = 0.01 above.
  static PickandsSettings defaults_for(double alpha);
};

struct DriftedFieldSample {
  double lambda = 0.0;
  double mesh = 0.0;
  double cont_max = 0.0; // over all lattice points in [0, lambda]
  double grid_max = 0.0; // over multiples of the snapped D
};

/// One draw of B*_{alpha/2} on the lattice covering [0, lambda], under the
/// original law. `D` must be >= mesh; it is snapped to a lattice multiple.
DriftedFieldSample sample_drifted_field(double alpha, double lambda, double mesh, double D,
                                        RngStream& rng);

struct PickandsEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double lambda = 0.0;
  double mesh = 0.0;
  std::size_t n_rep = 0;
  PickandsKind kind = PickandsKind::Continuous;
  PickandsEstimator estimator = PickandsEstimator::Tilted;
  double D = 0.0;            // snapped grid spacing (Grid, TwoIndex)
  double quantile_999 = 0.0; // 0.999-quantile of the per-draw terms
};

/// Reusable set of weighted draws; every estimate computed from one
/// ensemble shares the same random numbers.
class DriftedFieldEnsemble {
public:
  struct Draw {
    double cont_max;
    double grid_max;
    double log_weight; // ln dP/dQ (0 for Plain)
  };

  /// D <= 0 means no grid (grid_max = cont_max). Draw pairs 2p, 2p+1 come
  /// from stream (seed, p), so results do not depend on settings.workers.
  static DriftedFieldEnsemble simulate(double alpha, double D, const PickandsSettings& settings,
                                       std::uint64_t seed);

  /// H_alpha(lambda) / lambda on the lattice.
  PickandsEstimate continuous() const;
  /// H_{D,alpha}(lambda) / lambda.
  PickandsEstimate grid() const;
  /// H^{x,y}_{D,alpha_0}(lambda) / lambda^m. The m - 1 components with
  /// index 2 enter through the exact factor H_2 = pi^(-1/2) each.
  PickandsEstimate two_index(double x, double y, std::size_t m) const;
  /// pi^((m-1)/2) H^{ln H_alpha + x, ln H_{D,alpha} + y}_{D,alpha_0}.
  PickandsEstimate pickands_term(double x, double y, std::size_t m, double H_alpha,
                                 double H_D_alpha) const;

  double alpha() const { return alpha_; }
  double D() const { return D_; }
  const PickandsSettings& settings() const { return settings_; }
  const std::vector<Draw>& draws() const { return draws_; }

private:
  template <typename Term>
  PickandsEstimate summarize(PickandsKind kind, Term&& term) const;

  double alpha_ = 0.0;
  double D_ = 0.0;
  PickandsSettings settings_;
  std::vector<Draw> draws_;
};

/// Continuous estimate when D is absent, grid estimate otherwise.
PickandsEstimate estimate_H(double alpha, const PickandsSettings& settings, std::optional<double> D,
                            std::uint64_t seed);

PickandsEstimate estimate_two_index(double x, double y, double alpha, std::size_t m, double D,
                                    const PickandsSettings& settings, std::uint64_t seed);

/// Exact H_2 = 1 / sqrt(pi).
double pickands_h2();

} // namespace chigrid
