#include "chigrid/chiproc.hpp"

#include "chigrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chigrid {

ChiPath chi_path(const VectorChiInput& input) {
  if (input.components.empty()) {
    throw DomainError("chi path needs at least one component");
  }
  const auto& spec = input.spec();
  ChiPath chi{spec, std::vector<double>(spec.n_points, 0.0), input.components.size()};
  for (const auto& c : input.components) {
    if (c.values.size() != spec.n_points) {
      throw DomainError("components do not share one lattice");
    }
    for (std::size_t k = 0; k < spec.n_points; ++k) {
      chi.values[k] += c.values[k] * c.values[k];
    }
  }
  if (chi.m == 1) {
    for (std::size_t k = 0; k < spec.n_points; ++k) {
      chi.values[k] = std::abs(input.components[0].values[k]);
    }
  } else {
    for (double& v : chi.values) {
      v = std::sqrt(v);
    }
  }
  return chi;
}

std::string_view to_string(GridKind kind) {
  switch (kind) {
  case GridKind::Sparse:
    return "sparse";
  case GridKind::Pickands:
    return "pickands";
  case GridKind::Dense:
    return "dense";
  }
  return "unknown";
}

GridKind grid_kind_from_string(std::string_view name) {
  if (name == "sparse") return GridKind::Sparse;
  if (name == "pickands") return GridKind::Pickands;
  if (name == "dense") return GridKind::Dense;
  throw std::invalid_argument("unknown grid kind '" + std::string(name) + "'");
}

double GridSpec::nominal_spacing(double T, double alpha) const {
  if (!(T > std::numbers::e)) {
    throw DomainError("grid spacing needs T > e");
  }
  const double two_log_t = 2.0 * std::log(T);
  switch (kind) {
  case GridKind::Sparse:
    return delta0;
  case GridKind::Pickands:
    return D * std::pow(two_log_t, -1.0 / alpha);
  case GridKind::Dense:
    return std::pow(two_log_t, -2.0 / alpha);
  }
  return delta0;
}

GridSpacing grid_spacing(const GridSpec& grid, double T, double alpha, double mesh) {
  GridSpacing out;
  out.nominal = grid.nominal_spacing(T, alpha);
  if (!(mesh > 0.0)) {
    throw DomainError("mesh must be positive");
  }
  // Relative slack so that nominal == mesh up to round-off is accepted.
  if (out.nominal < mesh * (1.0 - 1e-9)) {
    throw GridFinerThanMesh("grid spacing " + std::to_string(out.nominal) +
                            " is finer than the lattice mesh " + std::to_string(mesh));
  }
  out.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(out.nominal / mesh)));
  out.delta_used = static_cast<double>(out.stride) * mesh;
  return out;
}

MaximaPair maxima_pair(const ChiPath& chi, std::size_t stride, double T) {
  if (chi.values.empty() || stride == 0) {
    throw DomainError("maxima need a nonempty path and a positive stride");
  }
  const auto last_in_window = static_cast<std::size_t>(std::floor(T / chi.spec.mesh + 1e-9));
  const std::size_t end = std::min(chi.values.size(), last_in_window + 1);
  MaximaPair out;
  out.T = T;
  out.delta_used = static_cast<double>(stride) * chi.spec.mesh;
  out.m_cont = *std::max_element(chi.values.begin(), chi.values.begin() + static_cast<std::ptrdiff_t>(end));
  out.m_grid = chi.values[0];
  for (std::size_t k = stride; k < end; k += stride) {
    out.m_grid = std::max(out.m_grid, chi.values[k]);
  }
  return out;
}

MaximaPair maxima_pair(const ChiPath& chi, const GridSpec& grid, double T, double alpha) {
  return maxima_pair(chi, grid_spacing(grid, T, alpha, chi.spec.mesh).stride, T);
}

SphereProbe sphere_oracle(const VectorChiInput& input, std::size_t k, int probes, RngStream& rng) {
  if (probes < 1) {
    throw DomainError("sphere oracle needs at least one probe");
  }
  const std::size_t m = input.components.size();
  std::vector<double> x(m);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = input.components[i].values.at(k);
    norm2 += x[i] * x[i];
  }
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) {
    throw DegenerateZeroVector("zero vector at lattice index " + std::to_string(k));
  }

  SphereProbe out;
  out.lhs = norm;
  double attained = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    attained += x[i] * (x[i] / norm);
  }
  out.random_probe_max = -norm;
  std::vector<double> v(m);
  for (int p = 0; p < probes; ++p) {
    double vn = 0.0;
    do {
      vn = 0.0;
      for (double& vi : v) {
        vi = rng.normal();
        vn += vi * vi;
      }
    } while (vn == 0.0);
    vn = std::sqrt(vn);
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dot += x[i] * v[i] / vn;
    }
    out.random_probe_max = std::max(out.random_probe_max, dot);
  }
  out.rhs_probe_max = std::max(attained, out.random_probe_max);
  return out;
}

} // namespace chigrid
