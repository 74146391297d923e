#pragma once

// Chi-process paths, continuous/grid maxima and the three grid regimes.

#include "chigrid/gaussim.hpp"
#include "chigrid/rng.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace chigrid {

struct ChiPath {
  LatticeSpec spec;
  std::vector<double> values;
  std::size_t m = 0;
};

/// Pointwise Euclidean norm of the components.
ChiPath chi_path(const VectorChiInput& input);

enum class GridKind { Sparse, Pickands, Dense };

std::string_view to_string(GridKind kind);
/// Throws std::invalid_argument for unknown names.
GridKind grid_kind_from_string(std::string_view name);

/// Observation grid {k delta(T)}.
///   Sparse:   delta = delta0
///   Pickands: delta = D (2 ln T)^(-1/alpha)
///   Dense:    delta = (2 ln T)^(-2/alpha)
struct GridSpec {
  GridKind kind = GridKind::Sparse;
  double D = 1.0;
  double delta0 = 1.0;

  static GridSpec sparse(double delta0 = 1.0) { return {GridKind::Sparse, 1.0, delta0}; }
  static GridSpec pickands(double D) { return {GridKind::Pickands, D, 1.0}; }
  static GridSpec dense() { return {GridKind::Dense, 1.0, 1.0}; }

  /// Requires T > e.
  double nominal_spacing(double T, double alpha) const;
};

struct GridSpacing {
  double nominal = 0.0;
  double delta_used = 0.0;
  std::size_t stride = 1;
};

/// Snaps the nominal spacing to the nearest positive multiple of `mesh`.
/// Throws GridFinerThanMesh if the nominal spacing is below the mesh and
/// DomainError if T <= e.
GridSpacing grid_spacing(const GridSpec& grid, double T, double alpha, double mesh);

struct MaximaPair {
  double m_cont = 0.0;
  double m_grid = 0.0;
  double delta_used = 0.0;
  double T = 0.0;
};

/// Maxima over lattice points in [0, T] and over every `stride`-th point.
MaximaPair maxima_pair(const ChiPath& chi, std::size_t stride, double T);
MaximaPair maxima_pair(const ChiPath& chi, const GridSpec& grid, double T, double alpha);

struct SphereProbe {
  double lhs = 0.0;            // chi value at the lattice point
  double rhs_probe_max = 0.0;  // max of <X, v> over the probe set incl. X/|X|
  double random_probe_max = 0.0;
};

/// Checks sup_v <X(k), v> over the unit sphere against |X(k)|.
/// Throws DegenerateZeroVector if X(k) = 0.
SphereProbe sphere_oracle(const VectorChiInput& input, std::size_t k, int probes, RngStream& rng);

} // namespace chigrid
