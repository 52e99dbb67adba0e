#include "telegraph/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "telegraph/errors.hpp"
#include "telegraph/io.hpp"

namespace telegraph {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
}

double get_num(const json& j, const std::string& where, const std::string& key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("config: " + where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

long get_int(const json& j, const std::string& where, const std::string& key,
             long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError("config: " + where + "." + key + " must be an integer");
  return j.at(key).get<long>();
}

std::string get_str(const json& j, const std::string& where, const std::string& key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ConfigError("config: " + where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return from_json(j, io::sha256_hex(bytes));
}

ScenarioConfig ScenarioConfig::from_json(const json& j, std::string hash) {
  ScenarioConfig cfg;
  cfg.config_hash = std::move(hash);
  reject_unknown(j, "top level",
                 {"physical", "forcing", "constraint", "drive", "solver", "output",
                  "seed", "spectrum", "widths", "decay"});

  if (j.contains("physical")) {
    const json& p = j.at("physical");
    reject_unknown(p, "physical", {"nu", "kappa"});
    cfg.params = PhysicalParams(get_num(p, "physical", "nu", 1.0),
                                get_num(p, "physical", "kappa", 1.0));
  }

  cfg.forcing_desc = json{{"name", "monomial"}, {"power", 2}};
  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    reject_unknown(f, "forcing", {"name", "power"});
    const std::string name = get_str(f, "forcing", "name", "monomial");
    if (name != "monomial" && name != "identity" && name != "sinh" &&
        name != "bvp_composition" && name != "zero")
      throw ConfigError("config: unknown forcing '" + name + "'");
    cfg.forcing_desc = f;
    if (!f.contains("name")) cfg.forcing_desc["name"] = name;
  }

  cfg.constraint_desc = json{{"name", "affine"}, {"offset", 1.0}};
  if (j.contains("constraint")) {
    const json& c = j.at("constraint");
    reject_unknown(c, "constraint", {"name", "offset", "alpha", "samples"});
    const std::string name = get_str(c, "constraint", "name", "affine");
    if (name != "affine") throw ConfigError("config: unknown constraint '" + name + "'");
    cfg.constraint_desc = c;
    cfg.solve.alpha = get_num(c, "constraint", "alpha", cfg.solve.alpha);
    const long samples =
        get_int(c, "constraint", "samples", static_cast<long>(cfg.solve.constraint_samples));
    if (samples < 2) throw ConfigError("config: constraint.samples must be >= 2");
    cfg.solve.constraint_samples = static_cast<std::size_t>(samples);
  }

  cfg.drive_desc = json{{"name", "none"}};
  if (j.contains("drive")) {
    const json& d = j.at("drive");
    reject_unknown(d, "drive", {"name", "mode", "amplitude", "omega"});
    const std::string name = get_str(d, "drive", "name", "none");
    if (name != "none" && name != "constant" && name != "cosine")
      throw ConfigError("config: unknown drive '" + name + "'");
    cfg.drive_desc = d;
    if (!d.contains("name")) cfg.drive_desc["name"] = name;
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, "solver",
                   {"n", "capacity", "ball_radius", "forcing_bound", "omega", "cells",
                    "gauss_order", "fp_tol", "fp_max_iter", "relaxation", "k_test",
                    "equicontinuity_delta", "ball_validation_samples"});
    cfg.solve.n = static_cast<int>(get_int(s, "solver", "n", cfg.solve.n));
    cfg.solve.capacity = static_cast<std::size_t>(
        get_int(s, "solver", "capacity", static_cast<long>(cfg.solve.capacity)));
    cfg.solve.ball_radius = get_num(s, "solver", "ball_radius", cfg.solve.ball_radius);
    if (s.contains("forcing_bound"))
      cfg.solve.forcing_bound = get_num(s, "solver", "forcing_bound", 0.0);
    if (s.contains("omega")) cfg.solve.omega = get_num(s, "solver", "omega", 0.0);
    cfg.solve.cells = static_cast<std::size_t>(
        get_int(s, "solver", "cells", static_cast<long>(cfg.solve.cells)));
    cfg.solve.gauss_order =
        static_cast<int>(get_int(s, "solver", "gauss_order", cfg.solve.gauss_order));
    cfg.solve.fp_tol = get_num(s, "solver", "fp_tol", cfg.solve.fp_tol);
    cfg.solve.fp_max_iter =
        static_cast<int>(get_int(s, "solver", "fp_max_iter", cfg.solve.fp_max_iter));
    cfg.solve.relaxation = get_num(s, "solver", "relaxation", cfg.solve.relaxation);
    cfg.solve.k_test = static_cast<int>(get_int(s, "solver", "k_test", cfg.solve.k_test));
    cfg.solve.equicontinuity_delta =
        get_num(s, "solver", "equicontinuity_delta", cfg.solve.equicontinuity_delta);
    cfg.solve.ball_validation_samples = static_cast<std::size_t>(
        get_int(s, "solver", "ball_validation_samples",
                static_cast<long>(cfg.solve.ball_validation_samples)));
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, "output", {"dir"});
    cfg.out_dir = get_str(o, "output", "dir", cfg.out_dir);
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("config: seed must be an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.solve.seed = cfg.seed;

  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    reject_unknown(s, "spectrum", {"n_max"});
    cfg.spectrum_n_max = static_cast<int>(get_int(s, "spectrum", "n_max", 16));
  }
  if (j.contains("widths")) {
    const json& w = j.at("widths");
    reject_unknown(w, "widths", {"b", "n_max"});
    cfg.widths_b = get_num(w, "widths", "b", 1.0);
    cfg.widths_n_max = static_cast<int>(get_int(w, "widths", "n_max", 16));
  }
  if (j.contains("decay")) {
    const json& d = j.at("decay");
    reject_unknown(d, "decay", {"t_max", "points", "n_max"});
    cfg.decay_t_max = get_num(d, "decay", "t_max", 20.0);
    cfg.decay_points = static_cast<int>(get_int(d, "decay", "points", 2001));
    cfg.decay_n_max = static_cast<int>(get_int(d, "decay", "n_max", 0));
  }
  return cfg;
}

std::unique_ptr<ForcingOperator> ScenarioConfig::make_forcing() const {
  const std::string name = forcing_desc.value("name", "monomial");
  const std::size_t M = solve.capacity;
  if (name == "monomial") {
    const int power = forcing_desc.value("power", 2);
    return std::make_unique<PointwiseForcing>(
        PointwiseForcing::monomial(power, M, params));
  }
  if (name == "identity")
    return std::make_unique<PointwiseForcing>(PointwiseForcing::monomial(1, M, params));
  if (name == "sinh")
    return std::make_unique<PointwiseForcing>(PointwiseForcing::sinh_forcing(M, params));
  if (name == "bvp_composition")
    return std::make_unique<BvpCompositionForcing>(M, params);
  if (name == "zero") return std::make_unique<ZeroForcing>(M);
  throw ConfigError("config: unknown forcing '" + name + "'");
}

std::unique_ptr<ConstraintOperator> ScenarioConfig::make_constraint() const {
  const double offset = constraint_desc.value("offset", 1.0);
  return std::make_unique<AffineConstraint>(offset, solve.constraint_samples);
}

DriveTerm ScenarioConfig::make_drive() const {
  const std::string name = drive_desc.value("name", "none");
  const std::size_t M = solve.capacity;
  if (name == "none") return DriveTerm::none(M);
  const int mode = drive_desc.value("mode", 1);
  const double amp = drive_desc.value("amplitude", 1.0);
  if (name == "constant") return DriveTerm::constant(M, mode, amp);
  if (name == "cosine")
    return DriveTerm::cosine(M, mode, amp, drive_desc.value("omega", 1.0));
  throw ConfigError("config: unknown drive '" + name + "'");
}

}  // namespace telegraph
