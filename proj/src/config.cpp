#include "chigrid/config.hpp"

#include "chigrid/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace chigrid {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void reject_unknown(const json& object, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      invalid(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

double get_number(const json& object, const std::string& key, const std::string& path) {
  const auto& v = object.at(key);
  if (!v.is_number()) {
    invalid(path, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    invalid(path, "expected a finite number");
  }
  return d;
}

std::uint64_t get_unsigned(const json& object, const std::string& key, const std::string& path) {
  const auto& v = object.at(key);
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number_integer()) {
    invalid(path, "expected a nonnegative integer");
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 9.007199254740992e15) {
      return static_cast<std::uint64_t>(d);
    }
  }
  invalid(path, "expected a nonnegative integer");
}

std::pair<double, double> get_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    invalid(path, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json parse_strict(std::string_view document) {
  // Tracks the keys seen in each open object to reject duplicates.
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  json::parser_callback_t callback = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
    case json::parse_event_t::object_start:
      open_objects.emplace_back();
      break;
    case json::parse_event_t::object_end:
      if (!open_objects.empty()) open_objects.pop_back();
      break;
    case json::parse_event_t::key:
      if (!open_objects.empty() && !open_objects.back().insert(parsed.get<std::string>()).second &&
          duplicate.empty()) {
        duplicate = parsed.get<std::string>();
      }
      break;
    default:
      break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(document.begin(), document.end(), callback);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!duplicate.empty()) {
    throw ParseError("duplicate key '" + duplicate + "'");
  }
  if (!doc.is_object()) {
    throw ParseError("config must be a JSON object");
  }
  return doc;
}

GridSpec parse_grid(const json& g) {
  if (!g.is_object()) {
    invalid("grid", "expected an object");
  }
  if (!g.contains("kind") || !g["kind"].is_string()) {
    invalid("grid.kind", "expected one of sparse, pickands, dense");
  }
  GridSpec grid;
  try {
    grid.kind = grid_kind_from_string(g["kind"].get<std::string>());
  } catch (const std::invalid_argument&) {
    invalid("grid.kind", "expected one of sparse, pickands, dense");
  }
  switch (grid.kind) {
  case GridKind::Sparse:
    reject_unknown(g, "grid", {"kind", "delta0"});
    if (g.contains("delta0")) {
      grid.delta0 = get_number(g, "delta0", "grid.delta0");
    }
    if (!(grid.delta0 > 0.0)) invalid("grid.delta0", "must be > 0");
    break;
  case GridKind::Pickands:
    reject_unknown(g, "grid", {"kind", "D"});
    if (!g.contains("D")) invalid("grid.D", "required for a Pickands grid");
    grid.D = get_number(g, "D", "grid.D");
    if (!(grid.D > 0.0)) invalid("grid.D", "must be > 0");
    break;
  case GridKind::Dense:
    reject_unknown(g, "grid", {"kind"});
    break;
  }
  return grid;
}

} // namespace

std::vector<std::pair<double, double>> default_eval_points() {
  std::vector<std::pair<double, double>> points;
  for (int x = -2; x <= 3; ++x) {
    for (int y = -2; y <= 3; ++y) {
      points.emplace_back(x, y);
    }
  }
  return points;
}

ExperimentConfig parse_config(std::string_view document) {
  const json doc = parse_strict(document);
  reject_unknown(doc, "",
                 {"m", "alpha", "r", "T", "grid", "eta", "n_rep", "master_seed", "eval_points",
                  "constants_source", "H_alpha", "H_D_alpha", "pickands_term", "pickands"});
  for (const char* key : {"m", "alpha", "r", "T", "grid", "n_rep", "master_seed"}) {
    if (!doc.contains(key)) {
      invalid(key, "required");
    }
  }

  ExperimentConfig c;
  c.m = get_unsigned(doc, "m", "m");
  if (c.m < 1) invalid("m", "must be >= 1");
  c.alpha = get_number(doc, "alpha", "alpha");
  if (!(c.alpha > 0.0 && c.alpha <= 2.0)) invalid("alpha", "must lie in (0, 2]");
  c.T = get_number(doc, "T", "T");
  if (!(c.T > std::numbers::e)) invalid("T", "must exceed e");
  c.r = get_number(doc, "r", "r");
  if (!(c.r >= 0.0)) invalid("r", "must be >= 0");
  if (!(c.r < std::log(c.T))) invalid("r", "must be below ln T so that rho = r / ln T < 1");
  c.grid = parse_grid(doc["grid"]);
  if (doc.contains("eta")) {
    c.eta = get_number(doc, "eta", "eta");
  }
  if (!(c.eta > 0.0)) invalid("eta", "must be > 0");
  c.n_rep = get_unsigned(doc, "n_rep", "n_rep");
  if (c.n_rep < 1) invalid("n_rep", "must be >= 1");
  c.master_seed = get_unsigned(doc, "master_seed", "master_seed");

  if (doc.contains("eval_points")) {
    const auto& pts = doc["eval_points"];
    if (!pts.is_array()) invalid("eval_points", "expected an array of [x, y]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      c.eval_points.push_back(get_point(pts[i], "eval_points[" + std::to_string(i) + "]"));
    }
    if (c.eval_points.empty()) invalid("eval_points", "must be nonempty");
  } else {
    c.eval_points = default_eval_points();
  }

  if (doc.contains("constants_source")) {
    const auto& s = doc["constants_source"];
    if (s == "estimate") {
      c.constants_source = ConstantsSource::Estimate;
    } else if (s == "provided") {
      c.constants_source = ConstantsSource::Provided;
    } else {
      invalid("constants_source", "expected estimate or provided");
    }
  }
  if (doc.contains("H_alpha")) {
    c.H_alpha = get_number(doc, "H_alpha", "H_alpha");
    if (!(*c.H_alpha > 0.0)) invalid("H_alpha", "must be > 0");
  }
  if (doc.contains("H_D_alpha")) {
    c.H_D_alpha = get_number(doc, "H_D_alpha", "H_D_alpha");
    if (!(*c.H_D_alpha > 0.0)) invalid("H_D_alpha", "must be > 0");
  }
  if (doc.contains("pickands_term")) {
    const auto& t = doc["pickands_term"];
    if (!t.is_array()) invalid("pickands_term", "expected an array of [x, y, value]");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto path = "pickands_term[" + std::to_string(i) + "]";
      const auto& e = t[i];
      if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() ||
          !e[2].is_number()) {
        invalid(path, "expected [x, y, value]");
      }
      PickandsTermEntry entry{e[0].get<double>(), e[1].get<double>(), e[2].get<double>()};
      if (!(entry.value >= 0.0)) invalid(path, "value must be >= 0");
      c.pickands_term.push_back(entry);
    }
  }
  if (c.constants_source == ConstantsSource::Provided) {
    if (!c.H_alpha) invalid("H_alpha", "required when constants_source is provided");
    if (c.grid.kind == GridKind::Pickands) {
      if (!c.H_D_alpha) invalid("H_D_alpha", "required for a Pickands grid with provided constants");
      for (std::size_t i = 0; i < c.eval_points.size(); ++i) {
        const auto [x, y] = c.eval_points[i];
        bool found = false;
        for (const auto& e : c.pickands_term) {
          found = found || (e.x == x && e.y == y);
        }
        if (!found) {
          invalid("pickands_term", "no entry for eval_points[" + std::to_string(i) + "]");
        }
      }
    }
  }

  c.pickands = PickandsSettings::defaults_for(c.alpha);
  if (doc.contains("pickands")) {
    const auto& p = doc["pickands"];
    if (!p.is_object()) invalid("pickands", "expected an object");
    reject_unknown(p, "pickands", {"lambda", "mesh", "n_rep", "estimator"});
    if (p.contains("lambda")) c.pickands.lambda = get_number(p, "lambda", "pickands.lambda");
    if (p.contains("mesh")) c.pickands.mesh = get_number(p, "mesh", "pickands.mesh");
    if (p.contains("n_rep")) c.pickands.n_rep = get_unsigned(p, "n_rep", "pickands.n_rep");
    if (p.contains("estimator")) {
      if (!p["estimator"].is_string()) invalid("pickands.estimator", "expected plain or tilted");
      try {
        c.pickands.estimator = pickands_estimator_from_string(p["estimator"].get<std::string>());
      } catch (const std::invalid_argument&) {
        invalid("pickands.estimator", "expected plain or tilted");
      }
    }
  }
  if (!(c.pickands.lambda > 0.0)) invalid("pickands.lambda", "must be > 0");
  if (!(c.pickands.mesh > 0.0 && c.pickands.mesh <= c.pickands.lambda)) {
    invalid("pickands.mesh", "must lie in (0, lambda]");
  }
  if (c.pickands.n_rep < kMinPickandsReplications) {
    invalid("pickands.n_rep", "must be >= " + std::to_string(kMinPickandsReplications));
  }
  return c;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["alpha"] = c.alpha;
  j["r"] = c.r;
  j["T"] = c.T;
  nlohmann::ordered_json grid;
  grid["kind"] = std::string(to_string(c.grid.kind));
  if (c.grid.kind == GridKind::Sparse) grid["delta0"] = c.grid.delta0;
  if (c.grid.kind == GridKind::Pickands) grid["D"] = c.grid.D;
  j["grid"] = grid;
  j["eta"] = c.eta;
  j["n_rep"] = c.n_rep;
  j["master_seed"] = c.master_seed;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& [x, y] : c.eval_points) {
    pts.push_back({x, y});
  }
  j["eval_points"] = pts;
  j["constants_source"] = c.constants_source == ConstantsSource::Estimate ? "estimate" : "provided";
  if (c.H_alpha) j["H_alpha"] = *c.H_alpha;
  if (c.H_D_alpha) j["H_D_alpha"] = *c.H_D_alpha;
  if (!c.pickands_term.empty()) {
    auto terms = nlohmann::ordered_json::array();
    for (const auto& e : c.pickands_term) {
      terms.push_back({e.x, e.y, e.value});
    }
    j["pickands_term"] = terms;
  }
  j["pickands"] = {{"lambda", c.pickands.lambda},
                   {"mesh", c.pickands.mesh},
                   {"n_rep", c.pickands.n_rep},
                   {"estimator", std::string(to_string(c.pickands.estimator))}};
  return j;
}

} // namespace chigrid
