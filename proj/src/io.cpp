#include "telegraph/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "telegraph/errors.hpp"
#include "telegraph/version.hpp"

namespace telegraph::io {

// ---------------------------------------------------------------------------
// SHA-256 (self-contained; used only to fingerprint config files)

namespace {

struct Sha256 {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::uint64_t total = 0;
  unsigned char buf[64];
  std::size_t fill = 0;

  static std::uint32_t rotr(std::uint32_t x, int n) {
    return (x >> n) | (x << (32 - n));
  }

  void block(const unsigned char* p) {
    static const std::uint32_t K[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 =
          rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 =
          rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5],
                  g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + S1 + ch + K[i] + w[i];
      const std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = S0 + maj;
      hh = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }

  void update(const unsigned char* p, std::size_t n) {
    total += n;
    while (n > 0) {
      const std::size_t take = std::min<std::size_t>(n, 64 - fill);
      std::memcpy(buf + fill, p, take);
      fill += take;
      p += take;
      n -= take;
      if (fill == 64) {
        block(buf);
        fill = 0;
      }
    }
  }

  std::string finish() {
    const std::uint64_t bits = total * 8;
    unsigned char pad = 0x80;
    update(&pad, 1);
    const unsigned char zero = 0;
    while (fill != 56) update(&zero, 1);
    unsigned char len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len, 8);
    char hex[65];
    for (int i = 0; i < 8; ++i) std::snprintf(hex + 8 * i, 9, "%08x", h[i]);
    return std::string(hex, 64);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  return out;
}

void write_header(std::ofstream& out, const FileHeader& header) {
  out << "# telegraph " << header.kind << " v" << kVersion << "\n";
  out << "# config_sha256: " << header.config_hash << "\n";
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 s;
  s.update(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  return s.finish();
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t capacity, const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "t";
  for (std::size_t k = 1; k <= capacity; ++k) out << ",u_" << k;
  for (std::size_t k = 1; k <= capacity; ++k) out << ",v_" << k;
  out << ",h_norm,du_norm\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt_double(traj.times[i]);
    const StateVector& st = traj.states[i];
    for (std::size_t k = 0; k < capacity; ++k) out << "," << fmt_double(st.u.raw()[k]);
    for (std::size_t k = 0; k < capacity; ++k) out << "," << fmt_double(st.v.raw()[k]);
    out << "," << fmt_double(traj.h_norms[i]) << "," << fmt_double(traj.du_norms[i])
        << "\n";
  }
}

void write_constraint_csv(const std::string& path, const Trajectory& traj,
                          const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "t,inf_value,certified_lower_bound,argmin_x\n";
  for (const ConstraintSample& s : traj.constraint_report)
    out << fmt_double(s.t) << "," << fmt_double(s.inf_value) << ","
        << fmt_double(s.certified_lower_bound) << "," << fmt_double(s.argmin_x) << "\n";
}

void write_residuals_csv(const std::string& path, const Trajectory& traj,
                         const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "k,t,weak_residual\n";
  for (std::size_t ki = 0; ki < traj.residual_modes.size(); ++ki)
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      out << traj.residual_modes[ki] << "," << fmt_double(traj.times[i]) << ","
          << fmt_double(traj.weak_residuals[ki][i]) << "\n";
}

void write_summary_json(const std::string& path, const nlohmann::json& summary) {
  std::ofstream out = open_out(path);
  out << summary.dump(2) << "\n";
}

void write_spectrum_csv(const std::string& path, const SpectralSummary& summary,
                        const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "# theta: " << fmt_double(summary.theta) << "\n";
  out << "# branch: "
      << (summary.branch == AbscissaBranch::all_nonnegative ? "all_nonnegative"
                                                            : "overdamped_max")
      << "\n";
  out << "n,theta_n,regime,omega_n,rho_n\n";
  for (const ModeRegime& r : summary.per_mode) {
    const char* kind = r.kind == RegimeKind::underdamped ? "underdamped"
                       : r.kind == RegimeKind::critical  ? "critical"
                                                         : "overdamped";
    out << r.n << "," << fmt_double(r.theta_n) << "," << kind << ","
        << fmt_double(r.omega_n) << "," << fmt_double(r.rho_n) << "\n";
  }
}

void write_widths_csv(const std::string& path, const std::vector<int>& ns,
                      const std::vector<double>& widths, double b,
                      const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "# ball_radius_h10: " << fmt_double(b) << "\n";
  out << "n,d_n\n";
  for (std::size_t i = 0; i < ns.size(); ++i)
    out << ns[i] << "," << fmt_double(widths[i]) << "\n";
}

void write_decay_csv(const std::string& path, const DuNormBound& bound,
                     const FileHeader& header) {
  std::ofstream out = open_out(path);
  write_header(out, header);
  out << "# omega: " << fmt_double(bound.omega) << "\n";
  out << "# omega_raw: " << fmt_double(bound.omega_raw) << "\n";
  out << "t,du_profile\n";
  for (std::size_t i = 0; i < bound.times.size(); ++i)
    out << fmt_double(bound.times[i]) << "," << fmt_double(bound.profile[i]) << "\n";
}

}  // namespace telegraph::io
