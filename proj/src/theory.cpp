#include "chigrid/theory.hpp"

#include "chigrid/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chigrid {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kTruncationSurvival = 1e-12;

double half(std::size_t m) { return 0.5 * static_cast<double>(m); }

void require_m(std::size_t m) {
  if (m < 1) {
    throw DomainError("degrees of freedom must be >= 1");
  }
}

} // namespace

double chi_log_tail_factor(std::size_t m) {
  require_m(m);
  return (1.0 - half(m)) * std::numbers::ln2 - std::lgamma(half(m));
}

NormConstants norm_constants(double T, std::size_t m, double alpha, GridKind grid_kind,
                             double H_alpha, double H_D_alpha, double delta) {
  require_m(m);
  if (!(T > std::numbers::e)) {
    throw DomainError("normalization needs T > e");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("alpha must lie in (0, 2]");
  }
  if (!(H_alpha > 0.0)) {
    throw DomainError("H_alpha must be positive");
  }
  NormConstants c;
  c.T = T;
  c.m = m;
  c.alpha = alpha;
  c.grid_kind = grid_kind;
  c.H_alpha = H_alpha;
  c.a_T = std::sqrt(2.0 * std::log(T));

  const double log_a = std::log(c.a_T);
  const double base = chi_log_tail_factor(m);
  const double power = 2.0 / alpha + static_cast<double>(m) - 2.0;
  c.b_T = c.a_T + (base + std::log(H_alpha) + power * log_a) / c.a_T;

  switch (grid_kind) {
  case GridKind::Pickands:
    if (!(H_D_alpha > 0.0)) {
      throw DomainError("H_D_alpha must be positive for a Pickands grid");
    }
    c.H_D_alpha = H_D_alpha;
    c.b_delta_T = c.a_T + (base + std::log(H_D_alpha) + power * log_a) / c.a_T;
    break;
  case GridKind::Sparse:
    if (!(delta > 0.0)) {
      throw DomainError("delta must be positive for a sparse grid");
    }
    c.delta = delta;
    c.b_delta_T =
        c.a_T + (base - std::log(delta) + (static_cast<double>(m) - 2.0) * log_a) / c.a_T;
    break;
  case GridKind::Dense:
    c.b_delta_T = c.b_T;
    break;
  }
  return c;
}

double chi_pdf(double z, std::size_t m) {
  require_m(m);
  if (z < 0.0) {
    return 0.0;
  }
  if (z == 0.0) {
    return m == 1 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
  }
  const double md = static_cast<double>(m);
  return std::exp(chi_log_tail_factor(m) + (md - 1.0) * std::log(z) - 0.5 * z * z);
}

double chi_cdf(double z, std::size_t m) {
  require_m(m);
  if (z <= 0.0) {
    return 0.0;
  }
  return boost::math::gamma_p(half(m), 0.5 * z * z);
}

double chi_survival(double z, std::size_t m) {
  require_m(m);
  if (z <= 0.0) {
    return 1.0;
  }
  return boost::math::gamma_q(half(m), 0.5 * z * z);
}

double chi_survival_quantile(double p, std::size_t m) {
  require_m(m);
  return std::sqrt(2.0 * boost::math::gamma_q_inv(half(m), p));
}

double tail_asymptotic(double u, double T, std::size_t m, double alpha, double H_alpha) {
  if (!(u > 0.0)) {
    throw DomainError("tail asymptotic needs u > 0");
  }
  const double power = 2.0 / alpha + static_cast<double>(m) - 2.0;
  return T * H_alpha * std::exp(chi_log_tail_factor(m) + power * std::log(u) - 0.5 * u * u);
}

double mixture_expectation(double g, double r, std::size_t m) {
  require_m(m);
  if (!(g >= 0.0) || !(r >= 0.0)) {
    throw DomainError("mixture expectation needs g >= 0 and r >= 0");
  }
  if (r == 0.0) {
    return std::exp(-g);
  }
  if (g == 0.0) {
    return 1.0;
  }
  const double slope = std::sqrt(2.0 * r);
  const double z_max = chi_survival_quantile(kTruncationSurvival, m);
  auto integrand = [&](double z) { return std::exp(-g * std::exp(-r + slope * z)) * chi_pdf(z, m); };
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, z_max, 20, kQuadratureTolerance);
  return std::clamp(value, 0.0, 1.0);
}

double limit_marginal(double x, double r, std::size_t m) {
  return mixture_expectation(std::exp(-x), r, m);
}

double limit_joint(double x, double y, const LimitSpec& spec) {
  const double ex = std::exp(-x);
  const double ey = std::exp(-y);
  switch (spec.grid_kind) {
  case GridKind::Sparse:
    return mixture_expectation(ex + ey, spec.r, spec.m);
  case GridKind::Pickands: {
    const double upper = std::min(ex, ey);
    if (spec.pickands_term > upper + kFrechetSlack || spec.pickands_term < -kFrechetSlack) {
      throw FrechetViolation("Pickands-grid constant " + std::to_string(spec.pickands_term) +
                             " outside [0, " + std::to_string(upper) + "] at (" +
                             std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    const double term = std::clamp(spec.pickands_term, 0.0, upper);
    return mixture_expectation(ex + ey - term, spec.r, spec.m);
  }
  case GridKind::Dense:
    return limit_marginal(std::min(x, y), spec.r, spec.m);
  }
  return 0.0;
}

} // namespace chigrid
