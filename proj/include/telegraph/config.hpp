#pragma once
// Scenario configuration: a single JSON file with nested sections.  The
// schema is strict: unknown keys are rejected at every level, types are
// checked, and every default is documented in the README.

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "telegraph/forcing.hpp"
#include "telegraph/solver.hpp"

namespace telegraph {

struct ScenarioConfig {
  PhysicalParams params{1.0, 1.0};
  nlohmann::json forcing_desc;
  nlohmann::json constraint_desc;
  nlohmann::json drive_desc;
  SolveOptions solve;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  int spectrum_n_max = 16;
  double widths_b = 1.0;
  int widths_n_max = 16;
  double decay_t_max = 20.0;
  int decay_points = 2001;
  int decay_n_max = 0;  // 0 = solver capacity

  std::string config_hash;  // sha256 of the config file bytes

  static ScenarioConfig load(const std::string& path);
  static ScenarioConfig from_json(const nlohmann::json& j, std::string hash);

  std::unique_ptr<ForcingOperator> make_forcing() const;
  std::unique_ptr<ConstraintOperator> make_constraint() const;
  DriveTerm make_drive() const;
};

}  // namespace telegraph
