#include "chigrid/pickands.hpp"

#include "chigrid/errors.hpp"
#include "chigrid/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chigrid {

namespace {

struct FieldLayout {
  LatticeSpec lattice;
  std::size_t stride = 0; // 0: no grid
  std::vector<double> drift; // (k mesh)^alpha
};

FieldLayout make_layout(double alpha, double lambda, double mesh, double D) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("alpha must lie in (0, 2]");
  }
  if (!(lambda > 0.0) || !(mesh > 0.0) || mesh > lambda) {
    throw DomainError("need 0 < mesh <= lambda");
  }
  FieldLayout layout;
  const auto steps = static_cast<std::size_t>(std::floor(lambda / mesh + 1e-9));
  layout.lattice = LatticeSpec{mesh, steps + 1};
  if (D > 0.0) {
    if (D < mesh * (1.0 - 1e-9)) {
      throw GridFinerThanMesh("grid spacing D is finer than the lattice mesh");
    }
    layout.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(D / mesh)));
  }
  layout.drift.resize(layout.lattice.n_points);
  for (std::size_t k = 0; k < layout.drift.size(); ++k) {
    layout.drift[k] = std::pow(static_cast<double>(k) * mesh, alpha);
  }
  return layout;
}

void fill_maxima(const std::vector<double>& field, std::size_t stride, double& cont_max,
                 double& grid_max) {
  cont_max = *std::max_element(field.begin(), field.end());
  if (stride == 0) {
    grid_max = cont_max;
    return;
  }
  grid_max = field[0];
  for (std::size_t k = stride; k < field.size(); k += stride) {
    grid_max = std::max(grid_max, field[k]);
  }
}

} // namespace

std::string_view to_string(PickandsKind kind) {
  switch (kind) {
  case PickandsKind::Continuous:
    return "continuous";
  case PickandsKind::Grid:
    return "grid";
  case PickandsKind::TwoIndex:
    return "two_index";
  }
  return "unknown";
}

std::string_view to_string(PickandsEstimator estimator) {
  return estimator == PickandsEstimator::Plain ? "plain" : "tilted";
}

PickandsEstimator pickands_estimator_from_string(std::string_view name) {
  if (name == "plain") return PickandsEstimator::Plain;
  if (name == "tilted") return PickandsEstimator::Tilted;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

PickandsSettings PickandsSettings::defaults_for(double alpha) {
  PickandsSettings s;
  if (alpha > 1.0) {
    s.lambda = 20.0;
    s.mesh = 0.01;
  }
  return s;
}

double pickands_h2() { return 1.0 / std::sqrt(std::numbers::pi); }

DriftedFieldSample sample_drifted_field(double alpha, double lambda, double mesh, double D,
                                        RngStream& rng) {
  if (!(D >= mesh * (1.0 - 1e-9))) {
    throw GridFinerThanMesh("grid spacing D is finer than the lattice mesh");
  }
  const auto layout = make_layout(alpha, lambda, mesh, D);
  const FbmSampler fbm(alpha / 2.0, layout.lattice.n_points, mesh);
  auto field = fbm.sample(rng).values;
  for (std::size_t k = 0; k < field.size(); ++k) {
    field[k] = std::numbers::sqrt2 * field[k] - layout.drift[k];
  }
  DriftedFieldSample out{lambda, mesh, 0.0, 0.0};
  fill_maxima(field, layout.stride, out.cont_max, out.grid_max);
  return out;
}

DriftedFieldEnsemble DriftedFieldEnsemble::simulate(double alpha, double D,
                                                    const PickandsSettings& settings,
                                                    std::uint64_t seed) {
  if (settings.n_rep < 1) {
    throw DomainError("Pickands estimation needs at least one replication");
  }
  const auto layout = make_layout(alpha, settings.lambda, settings.mesh, D);
  const FbmSampler fbm(alpha / 2.0, layout.lattice.n_points, settings.mesh);
  const std::size_t n = layout.lattice.n_points;
  const double log_n = std::log(static_cast<double>(n));
  const bool tilted = settings.estimator == PickandsEstimator::Tilted;

  DriftedFieldEnsemble ens;
  ens.alpha_ = alpha;
  ens.D_ = layout.stride == 0 ? 0.0 : static_cast<double>(layout.stride) * settings.mesh;
  ens.settings_ = settings;
  ens.draws_.resize(settings.n_rep);

  const std::size_t n_pairs = (settings.n_rep + 1) / 2;
  parallel_for(n_pairs, settings.workers, [&](std::size_t p) {
    auto rng = RngStream::for_replication(seed, p);
    auto [first, second] = fbm.sample_pair(rng);
    std::vector<double> field(n);
    for (std::size_t half = 0; half < 2; ++half) {
      const std::size_t slot = 2 * p + half;
      if (slot >= settings.n_rep) {
        break;
      }
      const auto& b = half == 0 ? first.values : second.values;
      Draw d{0.0, 0.0, 0.0};
      if (tilted) {
        const std::size_t j = rng.below(n);
        double top = -INFINITY;
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t lag = k > j ? k - j : j - k;
          field[k] = std::numbers::sqrt2 * b[k] + layout.drift[j] - layout.drift[lag];
          top = std::max(top, field[k]);
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          sum += std::exp(field[k] - top);
        }
        d.log_weight = log_n - (top + std::log(sum));
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          field[k] = std::numbers::sqrt2 * b[k] - layout.drift[k];
        }
      }
      fill_maxima(field, layout.stride, d.cont_max, d.grid_max);
      ens.draws_[slot] = d;
    }
  });
  return ens;
}

template <typename Term>
PickandsEstimate DriftedFieldEnsemble::summarize(PickandsKind kind, Term&& term) const {
  std::vector<double> terms(draws_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < draws_.size(); ++i) {
    terms[i] = term(draws_[i]);
    sum += terms[i];
  }
  const double n = static_cast<double>(terms.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double t : terms) {
    ss += (t - mean) * (t - mean);
  }
  PickandsEstimate est;
  est.value = mean;
  est.std_error = terms.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  est.lambda = settings_.lambda;
  est.mesh = settings_.mesh;
  est.n_rep = terms.size();
  est.kind = kind;
  est.estimator = settings_.estimator;
  est.D = D_;
  const auto q = static_cast<std::size_t>(std::ceil(0.999 * n)) - 1;
  std::nth_element(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(q), terms.end());
  est.quantile_999 = terms[q];
  return est;
}

PickandsEstimate DriftedFieldEnsemble::continuous() const {
  const double lambda = settings_.lambda;
  return summarize(PickandsKind::Continuous,
                   [&](const Draw& d) { return std::exp(d.cont_max + d.log_weight) / lambda; });
}

PickandsEstimate DriftedFieldEnsemble::grid() const {
  if (D_ <= 0.0) {
    throw DomainError("ensemble was simulated without a grid");
  }
  const double lambda = settings_.lambda;
  return summarize(PickandsKind::Grid,
                   [&](const Draw& d) { return std::exp(d.grid_max + d.log_weight) / lambda; });
}

PickandsEstimate DriftedFieldEnsemble::two_index(double x, double y, std::size_t m) const {
  if (D_ <= 0.0) {
    throw DomainError("ensemble was simulated without a grid");
  }
  if (m < 1) {
    throw DomainError("two-index constant needs m >= 1");
  }
  const double lambda = settings_.lambda;
  // exp(min(A - x, B - y)) is the s-integral of e^s 1{A > s + x, B > s + y}.
  const double log_factor = static_cast<double>(m - 1) * std::log(pickands_h2());
  return summarize(PickandsKind::TwoIndex, [&](const Draw& d) {
    return std::exp(std::min(d.cont_max - x, d.grid_max - y) + d.log_weight + log_factor) / lambda;
  });
}

PickandsEstimate DriftedFieldEnsemble::pickands_term(double x, double y, std::size_t m,
                                                     double H_alpha, double H_D_alpha) const {
  if (!(H_alpha > 0.0) || !(H_D_alpha > 0.0)) {
    throw DomainError("Pickands constants must be positive");
  }
  auto est = two_index(std::log(H_alpha) + x, std::log(H_D_alpha) + y, m);
  const double scale = std::pow(std::numbers::pi, 0.5 * static_cast<double>(m - 1));
  est.value *= scale;
  est.std_error *= scale;
  est.quantile_999 *= scale;
  return est;
}

namespace {

void require_replications(const PickandsSettings& settings) {
  if (settings.n_rep < kMinPickandsReplications) {
    throw DomainError("Pickands estimation needs at least " + std::to_string(kMinPickandsReplications) +
                      " replications");
  }
}

} // namespace

PickandsEstimate estimate_H(double alpha, const PickandsSettings& settings, std::optional<double> D,
                            std::uint64_t seed) {
  require_replications(settings);
  if (!D) {
    return DriftedFieldEnsemble::simulate(alpha, 0.0, settings, seed).continuous();
  }
  if (!(*D > 0.0)) {
    throw DomainError("grid spacing D must be positive");
  }
  return DriftedFieldEnsemble::simulate(alpha, *D, settings, seed).grid();
}

PickandsEstimate estimate_two_index(double x, double y, double alpha, std::size_t m, double D,
                                    const PickandsSettings& settings, std::uint64_t seed) {
  require_replications(settings);
  if (!(D > 0.0)) {
    throw DomainError("grid spacing D must be positive");
  }
  return DriftedFieldEnsemble::simulate(alpha, D, settings, seed).two_index(x, y, m);
}

} // namespace chigrid
