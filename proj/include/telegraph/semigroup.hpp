#pragma once
// The linear solution operator T(t) of u_tt = -nu u_t + kappa u_xx, acting
// mode by mode, together with the Duhamel convolution, the resolvent, the
// spectral abscissa dichotomy and the D(U)-norm bound.
//
// Per mode n the coefficient pair (a, b) of (u, v) obeys
//     a' = b,   b' = -kappa (n pi)^2 a - nu b,
// and T(t) restricted to the mode is an explicit 2x2 matrix whose form
// depends on the sign of theta_n = 4 (n pi)^2 kappa - nu^2:
//   theta_n > 0 (underdamped):  damped cos/sin at frequency
//                               omega_n = sqrt(theta_n)/2,
//   theta_n = 0 (critical):     exp(-nu t/2) and t exp(-nu t/2),
//   theta_n < 0 (overdamped):   exponentials at rates -nu/2 +- rho_n,
//                               rho_n = sqrt(-theta_n)/2.
// Classification uses |theta_n| <= 1e-12 * max(4 (n pi)^2 kappa, nu^2) to
// route to the critical formulas, since the other two branches divide by
// omega_n or rho_n.

#include <cstddef>
#include <functional>
#include <vector>

#include "telegraph/modal.hpp"
#include "telegraph/timegrid.hpp"

namespace telegraph {

enum class RegimeKind { underdamped, critical, overdamped };

struct ModeRegime {
  int n;
  double theta_n;  // 4 (n pi)^2 kappa - nu^2
  RegimeKind kind;
  double omega_n;  // sqrt(theta_n)/2 when underdamped, else 0
  double rho_n;    // sqrt(-theta_n)/2 when overdamped, else 0
};

// Exact 2x2 matrix sending mode-n coefficients (a, b) at time 0 to time t.
struct ModePropagator {
  int n;
  double t;
  double m11, m12, m21, m22;
  RegimeKind kind;
  double det() const { return m11 * m22 - m12 * m21; }
};

enum class AbscissaBranch { all_nonnegative, overdamped_max };

struct SpectralSummary {
  double theta;  // resolvent set contains { Re lambda > theta }
  AbscissaBranch branch;
  std::vector<ModeRegime> per_mode;  // n = 1 .. n_max
};

ModeRegime classify_mode(int n, const PhysicalParams& params);

// theta = -nu/2 when every theta_n >= 0, otherwise the max of
// -nu/2 + rho_n over the (finite) set of overdamped modes.  Requires
// theta_{n_max} >= 0 so the listing provably covers that set.
SpectralSummary spectral_abscissa(const PhysicalParams& params, int n_max);

ModePropagator propagate_mode(int n, double t, const PhysicalParams& params);

// 2x2 propagator of a'' + nu a' + stiffness a = 0 for arbitrary positive
// stiffness (mode propagation uses stiffness = kappa (n pi)^2; the solver's
// linear closed forms shift it).
ModePropagator damped_oscillator_matrix(double stiffness, double nu, double t);

// T(t) applied to a finite modal state.
StateVector apply_semigroup(const StateVector& state, double t,
                            const PhysicalParams& params);

// (U f, f)_H = -nu |v|_{L2}^2
double energy_rate(const StateVector& state, const PhysicalParams& params);

// R(lambda, U) f for real lambda > 0, mode-wise:
//   u_n = (z_n + (lambda + nu) w_n) / (kappa (n pi)^2 + lambda (lambda + nu))
//   v_n = lambda u_n - w_n
StateVector resolvent_apply(double lambda, const StateVector& rhs,
                            const PhysicalParams& params);

// (lambda I - U) f, the inverse direction, for round-trip checks.
StateVector shifted_generator_apply(double lambda, const StateVector& f,
                                    const PhysicalParams& params);

struct DuNormBound {
  double omega;                 // 1.05 * sup over grid and modes (safety factor)
  double omega_raw;             // the grid sup itself
  std::vector<double> times;    // copy of the scan grid
  std::vector<double> profile;  // sup over modes of the weighted matrix norm
};

// Per mode the D(U)-operator norm of T(t) is |W M(t) W^{-1}|_2 with
// W = diag(sqrt((n pi)^4 + kappa (n pi)^2), sqrt(kappa (n pi)^2)); the bound
// omega is the sup over the scan grid and modes 1..n_max.
DuNormBound du_norm_bound(const PhysicalParams& params,
                          const std::vector<double>& t_grid, int n_max);

// ---------------------------------------------------------------------------
// Duhamel convolution  V(t) = int_0^t T(t-s) F1(s) ds,  V(0) = 0.
//
// Per cell of the grid both the node update and every interior Gauss sample
// are computed with the exact per-mode propagator under Gauss quadrature in
// s; sampled sources are interpolated inside cells by the Lagrange
// polynomial through the cell's Gauss points.

// source evaluable at arbitrary t (exact quadrature path)
StateSeries duhamel(const std::function<StateVector(double)>& f1, const TimeGrid& grid,
                    std::size_t capacity, const PhysicalParams& params);

// velocity-slot source F1 = (0, f) with f given as a sampled series
StateSeries duhamel_velocity(const ModalSeries& f, const PhysicalParams& params);

}  // namespace telegraph
