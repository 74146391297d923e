#pragma once

// Normalization constants, chi-distribution utilities, tail asymptotics
// and the limiting joint CDFs of (continuous max, grid max).

#include "chigrid/chiproc.hpp"

#include <cstddef>

namespace chigrid {

struct NormConstants {
  double a_T = 0.0;
  double b_T = 0.0;
  double b_delta_T = 0.0;
  double T = 0.0;
  std::size_t m = 1;
  double alpha = 1.0;
  GridKind grid_kind = GridKind::Sparse;
  double H_alpha = 0.0;
  double H_D_alpha = 0.0; // Pickands grids only
  double delta = 0.0;     // sparse grids only

  double normalize_cont(double m_cont) const { return a_T * (m_cont - b_T); }
  double normalize_grid(double m_grid) const { return a_T * (m_grid - b_delta_T); }
};

/// a_T = sqrt(2 ln T), b_T and b_{delta,T}. Dense grids normalize the
/// grid maximum with b_T. Throws DomainError on nonpositive inputs or
/// T <= e.
NormConstants norm_constants(double T, std::size_t m, double alpha, GridKind grid_kind,
                             double H_alpha, double H_D_alpha, double delta);

/// ln(2^(1-m/2) / Gamma(m/2)).
double chi_log_tail_factor(std::size_t m);

double chi_pdf(double z, std::size_t m);
double chi_cdf(double z, std::size_t m);
double chi_survival(double z, std::size_t m);
/// Smallest z with P(chi_m > z) <= p.
double chi_survival_quantile(double p, std::size_t m);

/// T 2^(1-m/2) H_alpha / Gamma(m/2) u^(2/alpha + m - 2) exp(-u^2/2):
/// leading term of P(sup_[0,T] chi_m > u) as u grows.
double tail_asymptotic(double u, double T, std::size_t m, double alpha, double H_alpha);

/// E exp(-g exp(-r + sqrt(2r) chi_m)) by adaptive Gauss-Kronrod
/// quadrature (tolerance 1e-10, truncated where the chi survival drops
/// below 1e-12). Exact exp(-g) when r = 0.
double mixture_expectation(double g, double r, std::size_t m);

/// Mixed Gumbel CDF: mixture_expectation(exp(-x), r, m).
double limit_marginal(double x, double r, std::size_t m);

struct LimitSpec {
  std::size_t m = 1;
  double r = 0.0;
  GridKind grid_kind = GridKind::Sparse;
  /// pi^((m-1)/2) H^{ln H_alpha + x, ln H_{D,alpha} + y}_{D,alpha_0} at the
  /// evaluation point; used by Pickands grids only.
  double pickands_term = 0.0;
};

/// Slack allowed on the Fréchet bounds of the Pickands-grid constant.
inline constexpr double kFrechetSlack = 1e-6;

/// Limiting joint CDF at (x, y). Throws FrechetViolation for a Pickands
/// term outside [0, min(e^-x, e^-y)] by more than kFrechetSlack.
double limit_joint(double x, double y, const LimitSpec& spec);

} // namespace chigrid
