#pragma once
// Independent reference implementations used by tests, the verify suites and
// cross-method acceptance checks:
//   - an adaptive Dormand-Prince 5(4) integrator for 2d systems,
//   - closed-form solutions of the constant-coefficient modal ODE,
//   - a method-of-lines finite-difference solver on a uniform grid.
//
// None of this calls into the semigroup module; the closed forms are derived
// from the characteristic roots directly so that agreement with the
// propagator formulas is evidence, not tautology.

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "telegraph/modal.hpp"

namespace telegraph::oracle {

// y' = f(t, y) for y in R^2; returns y at each requested time (increasing,
// first >= t0).  Adaptive Dormand-Prince 5(4) with PI-free step control.
std::vector<std::array<double, 2>> dp54_integrate(
    const std::function<std::array<double, 2>(double, const std::array<double, 2>&)>& f,
    double t0, const std::array<double, 2>& y0, const std::vector<double>& t_out,
    double rtol = 1e-13, double atol = 1e-300);

// Exact solution (a, b) = (a, a') of
//   a'' + nu a' + (kappa (n pi)^2 + shift) a = drive_coeff,  a(0) = a'(0) = 0,
// by the characteristic-root case analysis.  Requires positive effective
// stiffness.
std::array<double, 2> modal_ode_closed_form(int n, const PhysicalParams& params,
                                            double shift, double drive_coeff, double t);

// exp(t A) for A = [[0, 1], [-stiffness, -nu]], computed by a scaled Taylor
// series with repeated squaring.  Row-major {e11, e12, e21, e22}.  This is
// the precision reference for the linear propagator: no trigonometry and no
// regime case analysis enter, so agreement with the closed forms is
// independent evidence at the 1e-12 level even after hundreds of radians of
// accumulated phase.
std::array<double, 4> damped_mode_expm(double stiffness, double nu, double t);

// RK4 blow-up guard tripped (time step too large for the grid).
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Uniform interior grid on (-1, 1): m points, spacing h = 2/(m+1).
struct FDGrid {
  int m;
  double h;
  std::vector<double> points;
  explicit FDGrid(int m_);
};

struct FdTrajectory {
  FDGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> u;  // [time][grid point]
  std::vector<std::vector<double>> v;

  // composite (trapezoid with zero boundary values) L2 norm of a grid row
  double l2_norm(const std::vector<double>& row) const;
};

// Method-of-lines RK4 solve of
//   u_tt = -nu u_t + kappa D_h u + f(u) + g(t, x),   zero initial data,
// with f applied pointwise on grid values (no projection) and fixed step at
// 0.8x the linear stability limit of the explicit scheme.
FdTrajectory fd_solve(const PhysicalParams& params,
                      const std::function<double(double)>& pointwise_f,  // may be null
                      const std::function<double(double, double)>& drive,  // may be null
                      const std::vector<double>& t_out, int m);

// Eigenvalue of the second-difference matrix on the discrete sine vector
// sin(n pi x_j) (the odd-symmetric family), for the eigenstructure checks.
double fd_sine_eigenvalue(int n, int m);

}  // namespace telegraph::oracle
