#include "chigrid/gaussim.hpp"

#include "chigrid/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace chigrid {

namespace {

constexpr double kMaxClippedFraction = 1e-8;
constexpr int kMaxDoublings = 3;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 2;
  while (p < n) {
    p <<= 1;
  }
  return p;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("alpha must lie in (0, 2], got " + std::to_string(alpha));
  }
}

} // namespace

CorrelationModel CorrelationModel::exp_power(double alpha) {
  require_alpha(alpha);
  return CorrelationModel{CorrelationFamily::ExpPower, alpha, 0.0, 0.0};
}

CorrelationModel CorrelationModel::strong_mixture(double alpha, double r, double horizon) {
  require_alpha(alpha);
  if (!(horizon > 1.0)) {
    throw DomainError("strong mixture needs horizon > 1");
  }
  if (!(r >= 0.0) || !(r / std::log(horizon) < 1.0)) {
    throw DomainError("strong mixture needs 0 <= r < ln(horizon)");
  }
  return CorrelationModel{CorrelationFamily::StrongMixture, alpha, r, horizon};
}

double CorrelationModel::rho() const {
  if (family == CorrelationFamily::ExpPower) {
    return 0.0;
  }
  return r / std::log(horizon);
}

double eval_correlation(const CorrelationModel& model, double t) {
  const double local = std::exp(-std::pow(std::abs(t), model.alpha));
  if (model.family == CorrelationFamily::ExpPower) {
    return local;
  }
  const double rho = model.rho();
  return (1.0 - rho) * local + rho;
}

LatticeSpec LatticeSpec::covering(double horizon, double mesh) {
  if (!(mesh > 0.0) || !(horizon >= 0.0)) {
    throw DomainError("lattice needs mesh > 0 and horizon >= 0");
  }
  // Tolerate round-off so that horizon = k * mesh gives exactly k steps.
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / mesh - 1e-9));
  return LatticeSpec{mesh, std::max<std::size_t>(steps, 1) + 1};
}

void LatticeSpec::validate() const {
  if (!(mesh > 0.0) || n_points < 2) {
    throw DomainError("lattice needs mesh > 0 and at least two points");
  }
}

SpectralEmbedding SpectralEmbedding::from_covariance(
    const std::function<double(std::size_t)>& covariance_at_lag, std::size_t n_points) {
  if (n_points < 1) {
    throw DomainError("embedding needs at least one point");
  }
  std::size_t size = next_pow2(2 * (n_points - 1));
  double fraction = 0.0;
  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, size *= 2) {
    auto dft = detail::forward_dft(size);
    detail::ComplexBuffer row(size), spectrum(size);
    for (std::size_t j = 0; j <= size / 2; ++j) {
      const double c = covariance_at_lag(j);
      row[j] = c;
      if (j > 0 && j < size / 2) {
        row[size - j] = c;
      }
    }
    dft->execute(row, spectrum);

    SpectralEmbedding out;
    out.n_points_ = n_points;
    out.eigenvalues_.resize(size);
    double negative = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      const double ev = spectrum[k].real();
      total += std::abs(ev);
      if (ev < 0.0) {
        negative -= ev;
        out.eigenvalues_[k] = 0.0;
      } else {
        out.eigenvalues_[k] = ev;
      }
    }
    fraction = total > 0.0 ? negative / total : 0.0;
    if (fraction <= kMaxClippedFraction) {
      out.clipped_mass_ = negative;
      out.amplitudes_.resize(size);
      for (std::size_t k = 0; k < size; ++k) {
        out.amplitudes_[k] = std::sqrt(out.eigenvalues_[k] / static_cast<double>(size));
      }
      out.dft_ = std::move(dft);
      return out;
    }
  }
  throw EmbeddingNotPSD("circulant embedding of " + std::to_string(n_points) +
                        " points is not nonnegative definite (clipped fraction " +
                        std::to_string(fraction) + ")");
}

std::pair<std::vector<double>, std::vector<double>> SpectralEmbedding::sample_pair(RngStream& rng) const {
  const std::size_t size = eigenvalues_.size();
  detail::ComplexBuffer in(size), out(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    in[k] = {amplitudes_[k] * re, amplitudes_[k] * im};
  }
  dft_->execute(in, out);
  std::pair<std::vector<double>, std::vector<double>> paths;
  paths.first.resize(n_points_);
  paths.second.resize(n_points_);
  for (std::size_t k = 0; k < n_points_; ++k) {
    paths.first[k] = out[k].real();
    paths.second[k] = out[k].imag();
  }
  return paths;
}

SpectralEmbedding build_embedding(const CorrelationModel& model, const LatticeSpec& spec) {
  spec.validate();
  return SpectralEmbedding::from_covariance(
      [&](std::size_t lag) { return eval_correlation(model, static_cast<double>(lag) * spec.mesh); },
      spec.n_points);
}

LatticePath sample_path(const SpectralEmbedding& embedding, const LatticeSpec& spec, RngStream& rng) {
  if (embedding.n_points() != spec.n_points) {
    throw DomainError("embedding was built for a different lattice");
  }
  return LatticePath{spec, embedding.sample_pair(rng).first};
}

VectorChiSampler::VectorChiSampler(const CorrelationModel& model, const LatticeSpec& spec, std::size_t m)
    : model_(model), spec_(spec), m_(m), embedding_(build_embedding(model.base(), spec)) {
  if (m < 1) {
    throw DomainError("vector chi input needs m >= 1");
  }
}

VectorChiInput VectorChiSampler::sample(RngStream& rng) const {
  VectorChiInput input;
  input.m = m_;
  input.components.reserve(m_ + 1);
  while (input.components.size() < m_) {
    auto [a, b] = embedding_.sample_pair(rng);
    input.components.push_back(LatticePath{spec_, std::move(a)});
    input.components.push_back(LatticePath{spec_, std::move(b)});
  }
  input.components.resize(m_);

  if (model_.family == CorrelationFamily::StrongMixture) {
    const double rho = model_.rho();
    const double keep = std::sqrt(1.0 - rho);
    const double shared = std::sqrt(rho);
    std::vector<double> z(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      z[i] = rng.normal();
      for (double& v : input.components[i].values) {
        v = keep * v + shared * z[i];
      }
    }
    input.shared_z = std::move(z);
  }
  return input;
}

VectorChiInput sample_vector_chi_input(const CorrelationModel& model, const LatticeSpec& spec,
                                       std::size_t m, RngStream& rng) {
  return VectorChiSampler(model, spec, m).sample(rng);
}

double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  if (k == 0) {
    return 1.0;
  }
  return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + std::pow(kd - 1.0, h2));
}

FbmSampler::FbmSampler(double hurst, std::size_t n_points, double mesh)
    : hurst_(hurst), spec_{mesh, n_points} {
  if (!(hurst > 0.0 && hurst <= 1.0)) {
    throw DomainError("hurst index must lie in (0, 1]");
  }
  spec_.validate();
  if (hurst < 1.0) {
    noise_ = SpectralEmbedding::from_covariance(
        [hurst](std::size_t k) { return fgn_autocovariance(hurst, k); }, n_points - 1);
  }
}

std::pair<LatticePath, LatticePath> FbmSampler::sample_pair(RngStream& rng) const {
  std::pair<LatticePath, LatticePath> paths{LatticePath{spec_, std::vector<double>(spec_.n_points, 0.0)},
                                            LatticePath{spec_, std::vector<double>(spec_.n_points, 0.0)}};
  if (!noise_) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    for (std::size_t k = 0; k < spec_.n_points; ++k) {
      const double t = static_cast<double>(k) * spec_.mesh;
      paths.first.values[k] = t * z1;
      paths.second.values[k] = t * z2;
    }
    return paths;
  }
  const auto [a, b] = noise_->sample_pair(rng);
  const double scale = std::pow(spec_.mesh, hurst_);
  double acc_a = 0.0;
  double acc_b = 0.0;
  for (std::size_t k = 1; k < spec_.n_points; ++k) {
    acc_a += a[k - 1];
    acc_b += b[k - 1];
    paths.first.values[k] = scale * acc_a;
    paths.second.values[k] = scale * acc_b;
  }
  return paths;
}

LatticePath FbmSampler::sample(RngStream& rng) const { return sample_pair(rng).first; }

LatticePath sample_fbm(double hurst, std::size_t n_points, double mesh, RngStream& rng) {
  return FbmSampler(hurst, n_points, mesh).sample(rng);
}

} // namespace chigrid
