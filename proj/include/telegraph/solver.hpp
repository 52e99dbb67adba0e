#pragma once
// The constructive pipeline: terminal time T0 = C/(omega c), the projected
// ball B_n, the map K(z) = P_n F(u_z), relaxed Picard iteration toward a
// fixed point of K, constraint monitoring, and the weak-residual check.
//
// Ball conventions: the enforced ball is B_n (the iterate z, measured in
// C(J, H10), bound c).  The induced bound |u|_{C(J, D(U))} <= T0 omega c = C
// holds for drive-free sources and is audited on every solve; with a nonzero
// drive it is reported (u_ball_ratio) but not enforced, since the drive term
// sits outside the invariance argument.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "telegraph/forcing.hpp"
#include "telegraph/modal.hpp"
#include "telegraph/semigroup.hpp"
#include "telegraph/timegrid.hpp"

namespace telegraph {

// T0 = C / (omega c)
double terminal_time(double ball_radius, double omega, double forcing_bound);

struct SolveOptions {
  int n = 8;                     // projection order
  std::size_t capacity = 32;     // internal mode capacity M >= n
  double ball_radius = 1.0;      // C, in the D(U) norm
  std::optional<double> forcing_bound;  // c; default F.local_bound(C)
  std::optional<double> omega;          // default: du_norm_bound scan
  std::size_t cells = 200;
  int gauss_order = 6;
  double fp_tol = 1e-9;
  int fp_max_iter = 60;
  double relaxation = 1.0;  // in (0, 1]; auto-halves on residual increase
  double alpha = 0.5;       // constraint admissibility level
  int k_test = 0;           // weak-residual modes; 0 = min(2n, capacity)
  double equicontinuity_delta = 0.0;  // 0 = T0/20
  std::size_t constraint_samples = 8192;
  std::uint64_t seed = 1;
  std::size_t ball_validation_samples = 64;
};

struct SolveConfig {
  PhysicalParams params;
  int n;
  std::size_t capacity;
  double ball_radius;   // C
  double forcing_bound; // c
  double omega;
  double T0;            // C / (omega c), exactly
  TimeGrid grid;
  double fp_tol;
  int fp_max_iter;
  double relaxation;
  double alpha;
  int k_test;
  double equicontinuity_delta;
  std::size_t constraint_samples;
  std::uint64_t seed;
  std::size_t ball_validation_samples;
};

// Resolves defaults (omega scan over [0, max(10/nu, 1)], c from the forcing)
// and derives T0 and the time grid.
SolveConfig build_solve_config(const PhysicalParams& params, const ForcingOperator& F,
                               const SolveOptions& options);

struct KAudit {
  double u_du_max = 0.0;         // |u|_{C(J, D(U))} for this application
  double output_ball_norm = 0.0; // |K(z)|_{C(J, H10)}
};

// One application of K.  Preconditions: z lives in P_n (modes above n are
// zero) and |z|_{C(J,H10)} <= c; violations throw ArgumentError /
// InvarianceError with the measured norm.
ModalSeries apply_K(const ModalSeries& z, const SolveConfig& config,
                    const ForcingOperator& F, const DriveTerm& drive,
                    KAudit* audit = nullptr);

struct FixedPointState {
  ModalSeries z;          // the iterate, in P_n
  StateSeries v_of_z;     // Duhamel state for source (0, z + g); u = first comp
  double residual;        // |z - K(z)|_{C(J, H10)}
  int iterations;
  std::vector<double> residual_history;
  double u_du_max;        // max over samples of |u|_{D(U)}
  double z_ball_norm;     // |z|_{C(J, H10)}
};

// Relaxed Picard iteration z <- (1 - r) z + r K(z) from z0 = P_n F(u_drive).
// Throws NonconvergenceError (with the residual history) at the iteration
// cap and InvarianceError if an iterate leaves B_n.
FixedPointState fixed_point_solve(const SolveConfig& config, const ForcingOperator& F,
                                  const DriveTerm& drive);

struct ConstraintSample {
  double t;
  double inf_value;
  double certified_lower_bound;
  double argmin_x;
};

struct ViolationInfo {
  double time;       // first grid time with certified bound below alpha
  double location;   // argmin estimate at that time
  double certified;  // the failing bound
  double alpha;
};

struct Trajectory {
  std::vector<double> times;        // grid nodes
  std::vector<StateVector> states;  // (u, v) at the nodes
  std::vector<double> h_norms;      // |(u,v)|_H at the nodes
  std::vector<double> du_norms;     // |u|_{D(U)} at the nodes
  std::vector<ConstraintSample> constraint_report;
  std::vector<int> residual_modes;                 // k = 1..k_test
  std::vector<std::vector<double>> weak_residuals; // [mode index][node index]
  bool admissible = true;
  std::optional<ViolationInfo> violation;
  double equicontinuity_modulus = 0.0;
  double u_ball_ratio = 0.0;  // |u|_{C(J,D(U))} / C
  double fp_residual = 0.0;
  int fp_iterations = 0;
  bool ball_alpha_validated = true;  // sampling check of inf G >= alpha on the C-ball
  double alpha = 0.0;
};

class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, Trajectory traj, ViolationInfo info)
      : std::runtime_error(what), trajectory(std::move(traj)), violation(info) {}
  Trajectory trajectory;
  ViolationInfo violation;
};

// Sampling check (refutation only) of "inf_I G(u) >= alpha on the D(U)-ball
// of radius C": random sphere samples; returns the smallest sampled inf.
struct BallAlphaReport {
  bool validated;
  double min_inf;
};
BallAlphaReport validate_constraint_ball(const ConstraintOperator& G, double ball_radius,
                                         double alpha, const PhysicalParams& params,
                                         std::size_t capacity, std::size_t samples,
                                         std::uint64_t seed);

// Full pipeline: fixed point, then the per-time constraint report.  Throws
// AdmissibilityError (carrying the trajectory) if any certified bound drops
// below alpha; the error names the first violating time and location.
Trajectory constrained_solve(const SolveConfig& config, const ForcingOperator& F,
                             const ConstraintOperator& G, const DriveTerm& drive);

// Weak residuals r_k(t) = (u_tt, phi_k) + nu (u_t, phi_k)
//   + kappa (u_x, phi_k') - (F(u) + g, phi_k) at the grid nodes, with u_tt
// taken from the modal evolution equation (exact per mode).  Returns
// [k-1][node] for k = 1..k_test.
std::vector<std::vector<double>> weak_residual(const FixedPointState& state,
                                               const SolveConfig& config,
                                               const ForcingOperator& F,
                                               const DriveTerm& drive, int k_test);

}  // namespace telegraph
