#include "chigrid/chiproc.hpp"
#include "chigrid/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace chigrid;

namespace {

VectorChiInput make_input(std::vector<std::vector<double>> comps, double mesh = 0.1) {
  VectorChiInput in;
  in.m = comps.size();
  for (auto& c : comps) {
    LatticeSpec spec{mesh, c.size()};
    in.components.push_back(LatticePath{spec, std::move(c)});
  }
  return in;
}

} // namespace

TEST(ChiPath, Norms) {
  EXPECT_EQ(chi_path(make_input({{-2.0, 3.0}})).values, (std::vector<double>{2.0, 3.0}));
  EXPECT_DOUBLE_EQ(chi_path(make_input({{3.0, 0.0}, {4.0, 0.0}})).values[0], 5.0);
  const auto zero = chi_path(make_input({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}));
  EXPECT_EQ(zero.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(zero.m, 3u);
}

TEST(ChiPath, RotationInvariant) {
  const LatticeSpec spec{0.05, 400};
  RngStream rng(12);
  const auto in = sample_vector_chi_input(CorrelationModel::exp_power(1.0), spec, 2, rng);
  const double c = std::cos(0.5235987755982988);
  const double s = std::sin(0.5235987755982988);
  auto rotated = in;
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    const double x = in.components[0].values[k];
    const double y = in.components[1].values[k];
    rotated.components[0].values[k] = c * x - s * y;
    rotated.components[1].values[k] = s * x + c * y;
  }
  const auto a = chi_path(in);
  const auto b = chi_path(rotated);
  for (std::size_t k = 0; k < spec.n_points; ++k) {
    EXPECT_NEAR(a.values[k], b.values[k], 1e-12);
    EXPECT_GE(a.values[k], 0.0);
  }
}

TEST(GridSpacing, PickandsNominal) {
  const double T = std::exp(50.0);
  const auto g = grid_spacing(GridSpec::pickands(1.0), T, 2.0, 0.01);
  EXPECT_NEAR(g.nominal, 0.1, 1e-15);
  EXPECT_EQ(g.stride, 10u);
}

TEST(GridSpacing, SparseSnapping) {
  const auto g = grid_spacing(GridSpec::sparse(1.0), 500.0, 1.0, 0.004);
  EXPECT_DOUBLE_EQ(g.delta_used, 1.0);
  EXPECT_EQ(g.stride, 250u);
}

TEST(GridSpacing, DenseNominal) {
  const double T = std::exp(50.0);
  EXPECT_NEAR(GridSpec::dense().nominal_spacing(T, 1.0), 1e-4, 1e-18);
  EXPECT_THROW(grid_spacing(GridSpec::dense(), T, 1.0, 1e-3), GridFinerThanMesh);
}

TEST(GridSpacing, SnapsToNearestMultiple) {
  const auto g = grid_spacing(GridSpec::sparse(0.26), 100.0, 1.0, 0.1);
  EXPECT_EQ(g.stride, 3u);
  EXPECT_NEAR(g.delta_used, 0.3, 1e-15);
}

TEST(GridSpacing, NeedsTAboveE) {
  EXPECT_THROW(grid_spacing(GridSpec::sparse(), 2.0, 1.0, 0.01), DomainError);
}

TEST(MaximaPair, StrideOneIsContinuous) {
  RngStream rng(4);
  const auto in = sample_vector_chi_input(CorrelationModel::exp_power(1.0), LatticeSpec{0.01, 1001}, 2, rng);
  const auto chi = chi_path(in);
  const auto p = maxima_pair(chi, 1, 10.0);
  EXPECT_EQ(p.m_grid, p.m_cont);
  EXPECT_DOUBLE_EQ(p.delta_used, 0.01);
}

TEST(MaximaPair, SinglePoint) {
  const ChiPath chi{LatticeSpec{0.1, 1}, {2.5}, 1};
  const auto p = maxima_pair(chi, 7, 0.0);
  EXPECT_EQ(p.m_cont, 2.5);
  EXPECT_EQ(p.m_grid, 2.5);
}

TEST(MaximaPair, PlantedOffGridPeak) {
  ChiPath chi{LatticeSpec{0.1, 101}, std::vector<double>(101, 0.0), 1};
  for (std::size_t k = 0; k < 101; ++k) {
    chi.values[k] = 1.0 + 0.1 * std::sin(0.3 * k) * std::sin(0.3 * k);
  }
  chi.values[37] = 9.0; // not a multiple of the stride
  const auto p = maxima_pair(chi, 5, 10.0);
  double grid_scan = 0.0;
  double all_scan = 0.0;
  for (std::size_t k = 0; k < 101; ++k) {
    all_scan = std::max(all_scan, chi.values[k]);
    if (k % 5 == 0) grid_scan = std::max(grid_scan, chi.values[k]);
  }
  EXPECT_EQ(p.m_cont, all_scan);
  EXPECT_EQ(p.m_grid, grid_scan);
  EXPECT_LT(p.m_grid, p.m_cont);
}

TEST(MaximaPair, IgnoresPointsBeyondHorizon) {
  ChiPath chi{LatticeSpec{0.5, 5}, {1.0, 2.0, 3.0, 4.0, 10.0}, 1};
  const auto p = maxima_pair(chi, 2, 1.5);
  EXPECT_EQ(p.m_cont, 4.0);
  EXPECT_EQ(p.m_grid, 3.0);
}

TEST(MaximaPair, GridNeverExceedsContinuous) {
  const LatticeSpec spec{0.02, 2001};
  const VectorChiSampler sampler(CorrelationModel::exp_power(0.8), spec, 3);
  for (int rep = 0; rep < 50; ++rep) {
    auto rng = RngStream::for_replication(8, rep);
    const auto chi = chi_path(sampler.sample(rng));
    for (std::size_t stride : {1u, 3u, 17u, 50u}) {
      const auto p = maxima_pair(chi, stride, 40.0);
      EXPECT_LE(p.m_grid, p.m_cont);
    }
  }
}

TEST(MaximaPair, RefinedCopyNeverDecreases) {
  RngStream rng(99);
  const auto chi = chi_path(sample_vector_chi_input(CorrelationModel::exp_power(1.0), LatticeSpec{0.1, 101}, 2, rng));
  ChiPath fine{LatticeSpec{0.05, 201}, std::vector<double>(201), 2};
  for (std::size_t k = 0; k < 201; ++k) {
    fine.values[k] = chi.values[k / 2];
  }
  EXPECT_GE(maxima_pair(fine, 1, 10.0).m_cont, maxima_pair(chi, 1, 10.0).m_cont);
}

TEST(MaximaPair, GridSpecOverload) {
  RngStream rng(5);
  const auto chi = chi_path(sample_vector_chi_input(CorrelationModel::exp_power(1.0), LatticeSpec{0.004, 5001}, 2, rng));
  const auto p = maxima_pair(chi, GridSpec::sparse(1.0), 20.0, 1.0);
  EXPECT_DOUBLE_EQ(p.delta_used, 1.0);
  double scan = 0.0;
  for (std::size_t k = 0; k <= 5000; k += 250) scan = std::max(scan, chi.values[k]);
  EXPECT_EQ(p.m_grid, scan);
}

TEST(SphereOracle, ThreeFourFive) {
  const auto in = make_input({{3.0}, {4.0}});
  RngStream rng(1);
  const auto probe = sphere_oracle(in, 0, 100, rng);
  EXPECT_DOUBLE_EQ(probe.lhs, 5.0);
  EXPECT_NEAR(probe.rhs_probe_max, 5.0, 1e-12);
  EXPECT_LE(probe.random_probe_max, probe.lhs);
  EXPECT_NEAR(3.0 * 0.6 + 4.0 * 0.8, 5.0, 1e-15);
}

TEST(SphereOracle, OneDimensional) {
  const auto in = make_input({{-1.7}});
  RngStream rng(2);
  const auto probe = sphere_oracle(in, 0, 20, rng);
  EXPECT_DOUBLE_EQ(probe.lhs, 1.7);
  // With m = 1 random unit vectors are +-1, so some probe attains |X|.
  EXPECT_DOUBLE_EQ(probe.random_probe_max, 1.7);
}

TEST(SphereOracle, EqualityOnSampledPaths) {
  const LatticeSpec spec{0.05, 300};
  for (std::size_t m : {2u, 3u, 5u}) {
    RngStream rng(m);
    const auto in = sample_vector_chi_input(CorrelationModel::exp_power(1.2), spec, m, rng);
    for (std::size_t k = 0; k < spec.n_points; k += 7) {
      const auto probe = sphere_oracle(in, k, 50, rng);
      EXPECT_NEAR(probe.rhs_probe_max, probe.lhs, 1e-12);
      EXPECT_LE(probe.random_probe_max, probe.lhs + 1e-12);
    }
  }
}

TEST(SphereOracle, ZeroVector) {
  const auto in = make_input({{0.0}, {0.0}});
  RngStream rng(3);
  EXPECT_THROW(sphere_oracle(in, 0, 5, rng), DegenerateZeroVector);
}
