#pragma once
// Output writers.  Every file carries a header block with the artifact
// version and the config hash; floats are serialized with 17 significant
// digits so identical runs produce byte-identical files.

#include <string>
#include <vector>

#include <json.hpp>

#include "telegraph/semigroup.hpp"
#include "telegraph/solver.hpp"

namespace telegraph::io {

std::string sha256_hex(const std::string& bytes);

// shortest round-trip-exact decimal (17 significant digits)
std::string fmt_double(double x);

struct FileHeader {
  std::string kind;
  std::string config_hash;
};

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t capacity, const FileHeader& header);
void write_constraint_csv(const std::string& path, const Trajectory& traj,
                          const FileHeader& header);
void write_residuals_csv(const std::string& path, const Trajectory& traj,
                         const FileHeader& header);
void write_summary_json(const std::string& path, const nlohmann::json& summary);

void write_spectrum_csv(const std::string& path, const SpectralSummary& summary,
                        const FileHeader& header);
void write_widths_csv(const std::string& path, const std::vector<int>& ns,
                      const std::vector<double>& widths, double b,
                      const FileHeader& header);
void write_decay_csv(const std::string& path, const DuNormBound& bound,
                     const FileHeader& header);

}  // namespace telegraph::io
