#include "chigrid/outputs.hpp"

#include "chigrid/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace chigrid {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw NumericalError("non-finite value in output");
  }
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw NumericalError("cannot format number");
  }
  return std::string(buf, end);
}

nlohmann::ordered_json estimate_json(const PickandsEstimate& e) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(e.kind));
  j["value"] = e.value;
  j["stderr"] = e.std_error;
  j["lambda"] = e.lambda;
  j["mesh"] = e.mesh;
  j["n_rep"] = e.n_rep;
  j["estimator"] = std::string(to_string(e.estimator));
  if (e.kind != PickandsKind::Continuous) {
    j["D"] = e.D;
  }
  j["quantile_999"] = e.quantile_999;
  return j;
}

nlohmann::ordered_json constants_json(const ConstantsRecord& c) {
  nlohmann::ordered_json j;
  j["source"] = c.source == ConstantsSource::Estimate ? "estimate" : "provided";
  j["a_T"] = c.norm.a_T;
  j["b_T"] = c.norm.b_T;
  j["b_delta_T"] = c.norm.b_delta_T;
  j["H_alpha"] = c.norm.H_alpha;
  if (c.norm.grid_kind == GridKind::Pickands) {
    j["H_D_alpha"] = c.norm.H_D_alpha;
  }
  if (c.H_alpha_estimate) {
    j["H_alpha_estimate"] = estimate_json(*c.H_alpha_estimate);
  }
  if (c.H_D_alpha_estimate) {
    j["H_D_alpha_estimate"] = estimate_json(*c.H_D_alpha_estimate);
  }
  if (!c.pickands_terms.empty()) {
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : c.pickands_terms) {
      terms.push_back({{"value", t.value}, {"stderr", t.std_error}});
    }
    j["pickands_terms"] = terms;
    j["clamped_points"] = c.clamped_points;
  }
  return j;
}

nlohmann::ordered_json manifest_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["tool"] = "chigrid";
  j["version"] = CHIGRID_VERSION;
  j["config"] = to_json(r.config);
  j["master_seed"] = r.config.master_seed;
  j["correlation"] = {{"family", r.layout.model.family == CorrelationFamily::ExpPower ? "exp_power"
                                                                                     : "strong_mixture"},
                      {"alpha", r.layout.model.alpha},
                      {"rho", r.layout.model.rho()}};
  j["lattice"] = {{"mesh", r.layout.lattice.mesh}, {"n_points", r.layout.lattice.n_points}};
  j["grid"] = {{"kind", std::string(to_string(r.config.grid.kind))},
               {"nominal_spacing", r.layout.spacing.nominal},
               {"delta_used", r.layout.spacing.delta_used},
               {"stride", r.layout.spacing.stride},
               {"D_effective", r.layout.D_effective}};
  j["constants"] = constants_json(r.constants);
  j["files"] = {"manifest.json", "samples.csv", "cdf.csv", "summary.json", "timing.json"};
  return j;
}

nlohmann::ordered_json summary_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["n_rep"] = r.replications.size();
  j["sup_distance"] = r.report.sup_distance;
  j["marginal_ks_cont"] = r.report.marginal_ks_cont;
  j["marginal_ks_grid"] = r.report.marginal_ks_grid;
  j["n_eval_points"] = r.report.eval_points.size();
  return j;
}

std::string samples_csv(const std::vector<ReplicationResult>& replications) {
  std::string out = "replication_index,m_cont,m_grid,norm_cont,norm_grid\n";
  for (std::size_t i = 0; i < replications.size(); ++i) {
    const auto& r = replications[i];
    out += std::to_string(i);
    for (double v : {r.pair.m_cont, r.pair.m_grid, r.normalized.cont, r.normalized.grid}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string cdf_csv(const ComparisonReport& report) {
  std::string out = "x,y,empirical,theoretical,diff\n";
  for (std::size_t i = 0; i < report.eval_points.size(); ++i) {
    out += format_double(report.eval_points[i].first) + ',' +
           format_double(report.eval_points[i].second) + ',' + format_double(report.empirical[i]) +
           ',' + format_double(report.theoretical[i]) + ',' + format_double(report.per_point[i]) +
           '\n';
  }
  return out;
}

void prepare_output_directory(const fs::path& directory, bool force) {
  std::error_code ec;
  if (fs::exists(directory, ec)) {
    if (!fs::is_directory(directory, ec)) {
      throw IoError(directory.string() + " exists and is not a directory");
    }
    if (!force && !fs::is_empty(directory, ec)) {
      throw IoError(directory.string() + " is not empty; pass --force to overwrite");
    }
    return;
  }
  if (!fs::create_directories(directory, ec) || ec) {
    throw IoError("cannot create " + directory.string() + ": " + ec.message());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

Manifest write_outputs(const ExperimentResult& result, const fs::path& directory, bool force) {
  if (result.report.eval_points.empty()) {
    throw IoError("refusing to write a report without eval points");
  }
  prepare_output_directory(directory, force);
  Manifest manifest{directory, {}};
  const auto put = [&](const char* name, const std::string& text) {
    write_text(directory / name, text);
    manifest.files.push_back(directory / name);
  };
  put("manifest.json", manifest_json(result).dump(2) + "\n");
  put("samples.csv", samples_csv(result.replications));
  put("cdf.csv", cdf_csv(result.report));
  put("summary.json", summary_json(result).dump(2) + "\n");
  nlohmann::ordered_json timing;
  timing["constants_seconds"] = result.constants_seconds;
  timing["replication_seconds"] = result.replication_seconds;
  put("timing.json", timing.dump(2) + "\n");
  return manifest;
}

} // namespace chigrid
