// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: chigrid_acceptance [criterion numbers...]   (default: all)

#include "chigrid/config.hpp"
#include "chigrid/experiment.hpp"
#include "chigrid/gaussim.hpp"
#include "chigrid/outputs.hpp"
#include "chigrid/parallel.hpp"
#include "chigrid/pickands.hpp"
#include "chigrid/stats.hpp"
#include "chigrid/theory.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace chigrid;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Clock {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

const unsigned kWorkers = default_workers();

ExperimentConfig weak_config(double T, const std::string& grid, double r = 0.0, double eta = 0.05) {
  std::ostringstream doc;
  doc.precision(17);
  doc << R"({"m": 2, "alpha": 1, "r": )" << r << R"(, "T": )" << T << R"(, "grid": )" << grid
      << R"(, "eta": )" << eta << R"(, "n_rep": 2000, "master_seed": 42})";
  return parse_config(doc.str());
}

const std::string kSparse = R"({"kind": "sparse", "delta0": 1})";

// Experiments shared between criteria, computed on first use.
struct Runs {
  std::map<std::string, std::shared_ptr<ExperimentResult>> cache;
  std::map<std::string, double> seconds;

  const ExperimentResult& get(const std::string& key, const ExperimentConfig& config) {
    auto& slot = cache[key];
    if (!slot) {
      Clock clock;
      slot = std::make_shared<ExperimentResult>(run_experiment(config, kWorkers));
      seconds[key] = clock.seconds();
      std::printf("  [run %s: %.1f s, sup %.4f, ks_cont %.4f, ks_grid %.4f]\n", key.c_str(),
                  seconds[key], slot->report.sup_distance, slot->report.marginal_ks_cont,
                  slot->report.marginal_ks_grid);
      std::fflush(stdout);
    }
    return *slot;
  }
};

Runs runs;

std::vector<double> column(const ExperimentResult& r, bool grid) {
  std::vector<double> out;
  for (const auto& rep : r.replications) out.push_back(grid ? rep.normalized.grid : rep.normalized.cont);
  return out;
}

double empirical_cdf(const std::vector<double>& xs, double x) {
  return static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double v) { return v <= x; })) /
         static_cast<double>(xs.size());
}

// -----------------------------------------------------------------------------

Verdict covariance_fidelity() {
  Clock clock;
  const double mesh = 0.05;
  const std::size_t n = 4096;
  const std::size_t max_lag = static_cast<std::size_t>(std::floor(3.0 / mesh + 1e-9));
  const auto embedding = build_embedding(CorrelationModel::exp_power(1.0), LatticeSpec{mesh, n});
  std::vector<double> sums(max_lag + 1, 0.0);
  std::size_t paths = 0;
  for (std::uint64_t p = 0; p < 1000; ++p) {
    auto rng = RngStream::for_replication(1, p);
    const auto [a, b] = embedding.sample_pair(rng);
    for (const auto* x : {&a, &b}) {
      for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += (*x)[i] * (*x)[i + k];
        sums[k] += s / static_cast<double>(n - k);
      }
      ++paths;
    }
  }
  double worst = 0.0;
  for (std::size_t k = 0; k <= max_lag; ++k) {
    worst = std::max(worst, std::abs(sums[k] / paths - std::exp(-static_cast<double>(k) * mesh)));
  }
  const double secs = clock.seconds();
  return {worst <= 0.03 && secs <= 60.0,
          fmt("%zu paths x %zu points, max |r_hat - r| = %.4g over lags <= 3 (tol 0.03), %.1f s (limit 60 s)",
              paths, n, worst, secs)};
}

Verdict marginal_gumbel() {
  const auto& t100 = runs.get("T100", weak_config(100.0, kSparse));
  const auto& t500 = runs.get("T500", weak_config(500.0, kSparse));
  const double ks100 = t100.report.marginal_ks_cont;
  const double ks500 = t500.report.marginal_ks_cont;
  const double secs = runs.seconds["T500"];
  return {ks500 <= 0.08 && ks500 <= ks100 && secs <= 600.0,
          fmt("KS(T=500) = %.4f (tol 0.08), KS(T=100) = %.4f, non-increasing: %s, T=500 run %.1f s (limit 600 s)",
              ks500, ks100, ks500 <= ks100 ? "yes" : "no", secs)};
}

Verdict sparse_independence() {
  const auto& r = runs.get("T500", weak_config(500.0, kSparse));
  const auto cont = column(r, false);
  const auto grid = column(r, true);
  double gumbel_sup = 0.0;
  double product_sup = 0.0;
  std::pair<double, double> worst_point;
  for (std::size_t i = 0; i < r.report.eval_points.size(); ++i) {
    const auto [x, y] = r.report.eval_points[i];
    const double f = r.report.empirical[i];
    gumbel_sup = std::max(gumbel_sup, std::abs(f - std::exp(-std::exp(-x) - std::exp(-y))));
    const double gap = std::abs(f - empirical_cdf(cont, x) * empirical_cdf(grid, y));
    if (gap > product_sup) {
      product_sup = gap;
      worst_point = {x, y};
    }
  }
  return {gumbel_sup <= 0.08 && product_sup <= 0.05,
          fmt("sup |F - Gumbel x Gumbel| = %.4f (tol 0.08), sup |F - F1 F2| = %.4f at (%g, %g) (tol 0.05)",
              gumbel_sup, product_sup, worst_point.first, worst_point.second)};
}

Verdict dense_dependence() {
  const auto& r = runs.get("dense", weak_config(500.0, R"({"kind": "dense"})"));
  double sup = 0.0;
  for (std::size_t i = 0; i < r.report.eval_points.size(); ++i) {
    const auto [x, y] = r.report.eval_points[i];
    sup = std::max(sup, std::abs(r.report.empirical[i] - limit_marginal(std::min(x, y), 0.0, 2)));
  }
  return {sup <= 0.08, fmt("sup |F - marginal(min)| = %.4f (tol 0.08), stride %zu, delta_used %.5g",
                           sup, r.layout.spacing.stride, r.layout.spacing.delta_used)};
}

Verdict strong_dependence() {
  const auto& strong = runs.get("r0.5", weak_config(500.0, kSparse, 0.5));
  const auto& weak = runs.get("T500", weak_config(500.0, kSparse));
  const double ks = strong.report.marginal_ks_cont;
  const auto a = column(strong, false);
  const auto b = column(weak, false);
  const double d = ks_two_sample_distance(a, b);
  const double p = ks_two_sample_pvalue(d, a.size(), b.size());
  return {ks <= 0.10 && p < 0.01,
          fmt("KS vs mixed Gumbel = %.4f (tol 0.10), two-sample KS vs r=0: D = %.4f, p = %.3g (need < 0.01)",
              ks, d, p)};
}

Verdict mesh_bias() {
  const auto& coarse = runs.get("T500", weak_config(500.0, kSparse));
  const auto& fine = runs.get("T500-fine", weak_config(500.0, kSparse, 0.0, 0.025));
  const auto a = column(coarse, false);
  const auto b = column(fine, false);
  std::set<double> xs;
  for (const auto& [x, y] : coarse.config.eval_points) {
    xs.insert(x);
    xs.insert(y);
  }
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(empirical_cdf(a, x) - empirical_cdf(b, x)));
  return {worst <= 0.02, fmt("max |F_eta(x) - F_eta/2(x)| over eval points = %.4f (tol 0.02)", worst)};
}

Verdict pickands_constants() {
  auto gauss = PickandsSettings::defaults_for(2.0);
  gauss.lambda = 20.0;
  gauss.n_rep = 100000;
  gauss.workers = kWorkers;
  const auto g = DriftedFieldEnsemble::simulate(2.0, 0.5, gauss, 7001);
  const auto g_cont = g.continuous();
  const auto g_grid = g.grid();
  const auto lattice = [](double step, double lambda) {
    std::vector<double> t;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(std::floor(lambda / step + 1e-9)); ++k) t.push_back(k * step);
    return t;
  };
  const double oracle_cont = oracle::alpha2_expected_exp_max(lattice(gauss.mesh, 20.0)) / 20.0;
  const double oracle_grid = oracle::alpha2_expected_exp_max(lattice(0.5, 20.0)) / 20.0;
  const bool gauss_ok = std::abs(g_cont.value - oracle_cont) <= 3.0 * g_cont.std_error &&
                        std::abs(g_grid.value - oracle_grid) <= 3.0 * g_grid.std_error;

  PickandsSettings expo;
  expo.lambda = 50.0;
  expo.mesh = 0.02;
  expo.n_rep = 100000;
  expo.workers = kWorkers;
  const auto e1 = DriftedFieldEnsemble::simulate(1.0, 0.5, expo, 7002);
  const auto e2 = DriftedFieldEnsemble::simulate(1.0, 1.0, expo, 7002);
  const auto h1 = e1.continuous();
  const bool expo_ok = h1.value >= 0.85 && h1.value <= 1.15;
  const double hd_fine = e1.grid().value;
  const double hd_coarse = e2.grid().value;
  const double hd_g_coarse = DriftedFieldEnsemble::simulate(2.0, 1.0, gauss, 7001).grid().value;
  const bool monotone = hd_fine >= hd_coarse && g_grid.value >= hd_g_coarse;

  return {gauss_ok && expo_ok && monotone,
          fmt("alpha=2 cont %.5f +- %.5f vs %.5f, D=0.5 %.5f +- %.5f vs %.5f (3 se); "
              "alpha=1 H = %.4f +- %.4f in [0.85, 1.15]; H_D monotone: alpha=1 %.4f >= %.4f, alpha=2 %.4f >= %.4f",
              g_cont.value, g_cont.std_error, oracle_cont, g_grid.value, g_grid.std_error, oracle_grid,
              h1.value, h1.std_error, hd_fine, hd_coarse, g_grid.value, hd_g_coarse)};
}

Verdict two_index_consistency() {
  const auto config = weak_config(500.0, R"({"kind": "pickands", "D": 1})");
  const auto layout = experiment_layout(config);
  auto settings = config.pickands;
  settings.workers = kWorkers;
  const auto ens = DriftedFieldEnsemble::simulate(config.alpha, layout.D_effective, settings,
                                                  constants_seed(config.master_seed));
  const double H = ens.continuous().value;
  const double HD = ens.grid().value;
  bool pass = true;
  double worst_excess = -INFINITY;
  double worst_lower = INFINITY;
  double worst_upper = INFINITY;
  for (const auto& [x, y] : config.eval_points) {
    const auto c = ens.pickands_term(x, y, config.m, H, HD);
    const double bound = std::min(std::exp(-x), std::exp(-y));
    worst_excess = std::max(worst_excess, c.value - bound - 3.0 * c.std_error);
    if (c.value < 0.0 || c.value > bound + 3.0 * c.std_error) pass = false;
    LimitSpec spec{config.m, config.r, GridKind::Pickands, std::min(c.value, bound)};
    const double f = limit_joint(x, y, spec);
    const double f1 = limit_marginal(x, config.r, config.m);
    const double f2 = limit_marginal(y, config.r, config.m);
    const double lower = std::max(f1 * f2, std::max(f1 + f2 - 1.0, 0.0));
    const double upper = std::min(f1, f2);
    worst_lower = std::min(worst_lower, f - lower);
    worst_upper = std::min(worst_upper, upper - f);
    if (f < lower - 1e-12 || f > upper + 1e-12) pass = false;
  }
  return {pass, fmt("D_eff = %.4g, H = %.4f, H_D = %.4f; max (C - min(e^-x, e^-y) - 3 se) = %.3g; "
                    "min (F - lower) = %.3g, min (upper - F) = %.3g",
                    layout.D_effective, H, HD, worst_excess, worst_lower, worst_upper)};
}

Verdict limit_cross_check() {
  const int draws = 1000000;
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (double g : {0.5, 1.0, 2.0}) {
    for (double r : {0.1, 0.5, 1.0}) {
      for (int m : {1, 2, 3}) {
        RngStream rng(stream_seed(9, stream++));
        double sum = 0.0;
        for (int i = 0; i < draws; ++i) {
          double z2 = 0.0;
          for (int j = 0; j < m; ++j) {
            const double z = rng.normal();
            z2 += z * z;
          }
          sum += std::exp(-g * std::exp(-r + std::sqrt(2.0 * r * z2)));
        }
        worst = std::max(worst, std::abs(mixture_expectation(g, r, m) - sum / draws));
      }
    }
  }
  double exact_gap = 0.0;
  for (double g : {0.0, 0.5, 1.0, 2.0, 7.5}) {
    for (int m : {1, 2, 3}) {
      exact_gap = std::max(exact_gap, std::abs(mixture_expectation(g, 0.0, m) - std::exp(-g)));
    }
  }
  return {worst <= 2e-3 && exact_gap <= 1e-12,
          fmt("max |quadrature - MC| over 27 (g, r, m) = %.3g (tol 2e-3), r=0 max gap = %.3g (tol 1e-12)",
              worst, exact_gap)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Independent reader: recomputes sup |F_hat - theory| from samples.csv and cdf.csv.
double reread_sup(const fs::path& dir) {
  std::vector<std::pair<double, double>> s;
  std::ifstream samples(dir / "samples.csv");
  std::string line;
  std::getline(samples, line);
  while (std::getline(samples, line)) {
    std::vector<double> f;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) f.push_back(std::stod(cell));
    s.emplace_back(f[3], f[4]);
  }
  std::ifstream cdf(dir / "cdf.csv");
  std::getline(cdf, line);
  double sup = 0.0;
  while (std::getline(cdf, line)) {
    double x, y, emp, theory;
    std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &emp, &theory);
    const auto hits = std::count_if(s.begin(), s.end(), [&](auto& p) { return p.first <= x && p.second <= y; });
    sup = std::max(sup, std::abs(static_cast<double>(hits) / s.size() - theory));
  }
  return sup;
}

Verdict determinism() {
  auto config = parse_config(R"({"m": 3, "alpha": 1.5, "r": 0.3, "T": 100,
    "grid": {"kind": "pickands", "D": 1}, "n_rep": 300, "master_seed": 2718,
    "pickands": {"lambda": 20, "mesh": 0.02, "n_rep": 4000}})");
  const auto base = fs::temp_directory_path() / "chigrid_acceptance";
  fs::remove_all(base);
  const std::vector<std::pair<std::string, unsigned>> variants{{"a", 1}, {"b", 1}, {"c", 3}};
  double reported = 0.0;
  for (const auto& [name, workers] : variants) {
    const auto result = run_experiment(config, workers);
    write_outputs(result, base / name, false);
    reported = result.report.sup_distance;
  }
  bool identical = true;
  for (const char* file : {"manifest.json", "samples.csv", "cdf.csv", "summary.json"}) {
    const auto ref = slurp(base / "a" / file);
    identical = identical && !ref.empty() && ref == slurp(base / "b" / file) && ref == slurp(base / "c" / file);
  }
  const double reread = reread_sup(base / "a");
  fs::remove_all(base);
  return {identical && std::abs(reread - reported) <= 1e-12,
          fmt("outputs byte-identical over 2 runs and 1 vs 3 workers: %s; reread sup %.6f vs reported %.6f",
              identical ? "yes" : "no", reread, reported)};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, covariance_fidelity}, {2, marginal_gumbel},    {3, sparse_independence},
      {4, dense_dependence},    {5, strong_dependence},  {6, mesh_bias},
      {7, pickands_constants},  {8, two_index_consistency}, {9, limit_cross_check},
      {10, determinism}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Clock clock;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("criterion %2d: %s  %s  (%.1f s)\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(),
                clock.seconds());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
