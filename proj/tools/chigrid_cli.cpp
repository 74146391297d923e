// chigrid: simulate chi-process maxima on continuous time and grids, and
// compare them with their joint limit laws.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 IO error.

#include "chigrid/config.hpp"
#include "chigrid/errors.hpp"
#include "chigrid/experiment.hpp"
#include "chigrid/outputs.hpp"
#include "chigrid/parallel.hpp"
#include "chigrid/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace chigrid;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  bool force = false;
  std::string samples_path;
  std::uint64_t replication = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const Options& opt) {
  auto config = parse_config(read_file(opt.config_path));
  if (opt.seed) {
    config.master_seed = *opt.seed;
  }
  return config;
}

unsigned workers(const Options& opt) { return opt.workers > 0 ? opt.workers : default_workers(); }

// Writes `text` as `name` under --out, or to stdout without --out.
void emit(const Options& opt, const std::string& name, const std::string& text) {
  if (opt.out_dir.empty()) {
    std::cout << text;
    return;
  }
  prepare_output_directory(opt.out_dir, opt.force);
  write_text(fs::path(opt.out_dir) / name, text);
}

int cmd_experiment(const Options& opt) {
  const auto config = load_config(opt);
  const auto result = run_experiment(config, workers(opt));
  if (opt.out_dir.empty()) {
    throw IoError("experiment needs --out");
  }
  write_outputs(result, opt.out_dir, opt.force);
  std::cout << summary_json(result).dump(2) << "\n";
  return 0;
}

int cmd_simulate(const Options& opt) {
  const auto config = load_config(opt);
  const auto layout = experiment_layout(config);
  const VectorChiSampler sampler(layout.model, layout.lattice, config.m);
  auto rng = RngStream::for_replication(config.master_seed, opt.replication);
  const auto input = sampler.sample(rng);
  const auto chi = chi_path(input);
  const auto pair = maxima_pair(chi, layout.spacing.stride, config.T);

  std::string csv = "t";
  for (std::size_t i = 0; i < config.m; ++i) {
    csv += ",x" + std::to_string(i + 1);
  }
  csv += ",chi,on_grid\n";
  for (std::size_t k = 0; k < layout.lattice.n_points; ++k) {
    csv += format_double(static_cast<double>(k) * layout.lattice.mesh);
    for (const auto& c : input.components) {
      csv += ',' + format_double(c.values[k]);
    }
    csv += ',' + format_double(chi.values[k]);
    csv += (k % layout.spacing.stride == 0) ? ",1\n" : ",0\n";
  }

  nlohmann::ordered_json j;
  j["replication_index"] = opt.replication;
  j["mesh"] = layout.lattice.mesh;
  j["n_points"] = layout.lattice.n_points;
  j["delta_used"] = layout.spacing.delta_used;
  j["stride"] = layout.spacing.stride;
  j["m_cont"] = pair.m_cont;
  j["m_grid"] = pair.m_grid;
  if (input.shared_z) {
    j["shared_z"] = *input.shared_z;
  }
  if (opt.out_dir.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  prepare_output_directory(opt.out_dir, opt.force);
  write_text(fs::path(opt.out_dir) / "paths.csv", csv);
  write_text(fs::path(opt.out_dir) / "maxima.json", j.dump(2) + "\n");
  return 0;
}

int cmd_pickands(const Options& opt) {
  const auto config = load_config(opt);
  const auto layout = experiment_layout(config);
  auto settings = config.pickands;
  settings.workers = workers(opt);
  const bool pickands_grid = config.grid.kind == GridKind::Pickands;
  const double D = pickands_grid ? layout.D_effective : 0.0;
  const auto seed = constants_seed(config.master_seed);

  nlohmann::ordered_json j;
  j["alpha"] = config.alpha;
  j["m"] = config.m;
  if (pickands_grid) {
    j["D"] = D;
  }
  // Finite-lambda estimates at lambda and 2 lambda; their gap is a bias proxy.
  auto estimates = nlohmann::ordered_json::array();
  std::optional<DriftedFieldEnsemble> primary;
  for (double factor : {1.0, 2.0}) {
    auto s = settings;
    s.lambda = settings.lambda * factor;
    auto ens = DriftedFieldEnsemble::simulate(config.alpha, D, s, seed);
    nlohmann::ordered_json e;
    e["H_alpha"] = estimate_json(ens.continuous());
    if (pickands_grid) {
      e["H_D_alpha"] = estimate_json(ens.grid());
    }
    estimates.push_back(e);
    if (!primary) {
      primary = std::move(ens);
    }
  }
  j["estimates"] = estimates;
  j["lambda_gap_H_alpha"] =
      estimates[1]["H_alpha"]["value"].get<double>() - estimates[0]["H_alpha"]["value"].get<double>();

  if (pickands_grid) {
    const double H = primary->continuous().value;
    const double HD = primary->grid().value;
    auto table = nlohmann::ordered_json::array();
    for (const auto& [x, y] : config.eval_points) {
      const auto term = primary->pickands_term(x, y, config.m, H, HD);
      table.push_back({{"x", x}, {"y", y}, {"value", term.value}, {"stderr", term.std_error}});
    }
    j["pickands_term"] = table;
  }
  emit(opt, "constants.json", j.dump(2) + "\n");
  return 0;
}

int cmd_limits(const Options& opt) {
  const auto config = load_config(opt);
  const auto layout = experiment_layout(config);
  const auto constants = resolve_constants(config, layout, workers(opt));
  std::string csv = "x,y,theoretical,marginal_x,marginal_y\n";
  for (std::size_t i = 0; i < config.eval_points.size(); ++i) {
    const auto [x, y] = config.eval_points[i];
    csv += format_double(x) + ',' + format_double(y) + ',' +
           format_double(limit_joint(x, y, limit_spec_at(config, constants, i))) + ',' +
           format_double(limit_marginal(x, config.r, config.m)) + ',' +
           format_double(limit_marginal(y, config.r, config.m)) + '\n';
  }
  emit(opt, "limits.csv", csv);
  return 0;
}

std::vector<NormalizedPair> read_samples(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "replication_index,m_cont,m_grid,norm_cont,norm_grid") {
    throw IoError(path + ": unexpected samples.csv header");
  }
  std::vector<NormalizedPair> samples;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) {
      values.push_back(std::stod(field));
    }
    if (values.size() != 5) {
      throw IoError(path + ": malformed row '" + line + "'");
    }
    samples.push_back({values[3], values[4]});
  }
  return samples;
}

int cmd_compare(const Options& opt) {
  const auto config = load_config(opt);
  if (config.grid.kind == GridKind::Pickands && config.constants_source != ConstantsSource::Provided) {
    throw ValidationError("constants_source: compare needs provided constants for a Pickands grid");
  }
  const auto layout = experiment_layout(config);
  const auto constants = resolve_constants(config, layout, workers(opt));
  const auto report = compare(read_samples(opt.samples_path), config, constants);
  nlohmann::ordered_json summary;
  summary["sup_distance"] = report.sup_distance;
  summary["marginal_ks_cont"] = report.marginal_ks_cont;
  summary["marginal_ks_grid"] = report.marginal_ks_grid;
  if (opt.out_dir.empty()) {
    std::cout << cdf_csv(report) << summary.dump(2) << "\n";
    return 0;
  }
  prepare_output_directory(opt.out_dir, opt.force);
  write_text(fs::path(opt.out_dir) / "cdf.csv", cdf_csv(report));
  write_text(fs::path(opt.out_dir) / "summary.json", summary.dump(2) + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"chigrid: maxima of chi-processes on continuous time and uniform grids"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub, bool with_out_required) {
    sub->add_option("--config", opt.config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    auto* out = sub->add_option("--out", opt.out_dir, "output directory");
    if (with_out_required) {
      out->required();
    }
    sub->add_option("--seed", opt.seed, "override master_seed");
    sub->add_option("--workers", opt.workers, "worker threads (default CHIGRID_WORKERS or all cores)");
    sub->add_flag("--force", opt.force, "allow writing into a non-empty directory");
  };

  auto* experiment = app.add_subcommand("experiment", "full pipeline: simulate, estimate constants, compare");
  common(experiment, true);
  auto* simulate = app.add_subcommand("simulate", "one replication, dumping the paths");
  common(simulate, false);
  simulate->add_option("--replication", opt.replication, "replication index (default 0)");
  auto* pickands = app.add_subcommand("pickands", "estimate the Pickands-type constants");
  common(pickands, false);
  auto* limits = app.add_subcommand("limits", "tabulate the limiting joint CDF");
  common(limits, false);
  auto* cmp = app.add_subcommand("compare", "compare a samples.csv against the limit");
  common(cmp, false);
  cmp->add_option("--samples", opt.samples_path, "samples.csv from a previous run")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*experiment) return cmd_experiment(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*pickands) return cmd_pickands(opt);
    if (*limits) return cmd_limits(opt);
    if (*cmp) return cmd_compare(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
