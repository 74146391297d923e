#pragma once

// Exact synthesis of stationary Gaussian lattice paths by circulant
// embedding, fractional Brownian motion, and the strongly dependent
// vector construction used for long-range correlated chi-processes.

#include "chigrid/rng.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace chigrid {

namespace detail {
class ForwardDft;
}

enum class CorrelationFamily {
  ExpPower,      // r(t) = exp(-|t|^alpha)
  StrongMixture, // r(t) = (1 - rho) exp(-|t|^alpha) + rho,  rho = r / ln(horizon)
};

/// Stationary correlation family with local exponent `alpha` and, for the
/// mixture family, a long-range level `r` tied to the horizon `horizon`.
struct CorrelationModel {
  CorrelationFamily family = CorrelationFamily::ExpPower;
  double alpha = 1.0;
  double r = 0.0;
  double horizon = 0.0;

  static CorrelationModel exp_power(double alpha);
  /// Throws DomainError unless 0 <= r / ln(horizon) < 1 and horizon > 1.
  static CorrelationModel strong_mixture(double alpha, double r, double horizon);

  /// Mixing weight of the constant component (0 for ExpPower).
  double rho() const;
  /// The ExpPower model with the same local exponent.
  CorrelationModel base() const { return exp_power(alpha); }
};

double eval_correlation(const CorrelationModel& model, double t);

/// Uniform lattice {0, mesh, ..., (n_points - 1) mesh}.
struct LatticeSpec {
  double mesh = 1.0;
  std::size_t n_points = 2;

  double span() const { return mesh * static_cast<double>(n_points - 1); }
  /// Smallest lattice with the given mesh whose span reaches `horizon`.
  static LatticeSpec covering(double horizon, double mesh);
  /// Throws DomainError if mesh <= 0 or n_points < 2.
  void validate() const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

struct LatticePath {
  LatticeSpec spec;
  std::vector<double> values;
};

/// Nonnegative spectrum of a circulant embedding of a stationary
/// covariance sequence, ready for FFT sampling.
class SpectralEmbedding {
public:
  /// Embeds lags 0..n_points-1 of `covariance_at_lag` (lag in lattice
  /// steps). The circulant size starts at the smallest power of two
  /// >= 2 (n_points - 1) and is doubled up to three times if the negative
  /// spectral mass exceeds 1e-8 of the total; then EmbeddingNotPSD.
  static SpectralEmbedding from_covariance(const std::function<double(std::size_t)>& covariance_at_lag,
                                           std::size_t n_points);

  std::size_t circulant_size() const { return eigenvalues_.size(); }
  std::size_t n_points() const { return n_points_; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double clipped_mass() const { return clipped_mass_; }

  /// Two independent stationary sequences of length n_points (real and
  /// imaginary part of one complex FFT).
  std::pair<std::vector<double>, std::vector<double>> sample_pair(RngStream& rng) const;

private:
  SpectralEmbedding() = default;

  std::size_t n_points_ = 0;
  std::vector<double> eigenvalues_;
  std::vector<double> amplitudes_; // sqrt(eigenvalue / size)
  double clipped_mass_ = 0.0;
  std::shared_ptr<const detail::ForwardDft> dft_;
};

SpectralEmbedding build_embedding(const CorrelationModel& model, const LatticeSpec& spec);

LatticePath sample_path(const SpectralEmbedding& embedding, const LatticeSpec& spec, RngStream& rng);

/// Components X_1..X_m on a common lattice. For the mixture family
/// `shared_z` holds the m common normal draws.
struct VectorChiInput {
  std::vector<LatticePath> components;
  std::size_t m = 0;
  std::optional<std::vector<double>> shared_z;

  const LatticeSpec& spec() const { return components.front().spec; }
};

/// Reusable sampler for VectorChiInput; holds the embedding of the base
/// (ExpPower) correlation and is shareable across threads.
class VectorChiSampler {
public:
  VectorChiSampler(const CorrelationModel& model, const LatticeSpec& spec, std::size_t m);

  VectorChiInput sample(RngStream& rng) const;

  const CorrelationModel& model() const { return model_; }
  const LatticeSpec& spec() const { return spec_; }
  std::size_t m() const { return m_; }
  const SpectralEmbedding& embedding() const { return embedding_; }

private:
  CorrelationModel model_;
  LatticeSpec spec_;
  std::size_t m_;
  SpectralEmbedding embedding_;
};

VectorChiInput sample_vector_chi_input(const CorrelationModel& model, const LatticeSpec& spec,
                                       std::size_t m, RngStream& rng);

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

/// Fractional Brownian motion B_H on {0, mesh, ...}; B_H(0) = 0.
class FbmSampler {
public:
  FbmSampler(double hurst, std::size_t n_points, double mesh);

  LatticePath sample(RngStream& rng) const;
  /// Two independent paths from one FFT.
  std::pair<LatticePath, LatticePath> sample_pair(RngStream& rng) const;

  double hurst() const { return hurst_; }
  const LatticeSpec& spec() const { return spec_; }

private:
  double hurst_;
  LatticeSpec spec_;
  std::optional<SpectralEmbedding> noise_; // absent for hurst == 1 or a single increment
};

LatticePath sample_fbm(double hurst, std::size_t n_points, double mesh, RngStream& rng);

} // namespace chigrid
