#include "telegraph/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/errors.hpp"

namespace telegraph::oracle {

namespace {

using Vec2 = std::array<double, 2>;

Vec2 add_scaled(const Vec2& y, double h, const Vec2& k) {
  return {y[0] + h * k[0], y[1] + h * k[1]};
}

}  // namespace

std::vector<Vec2> dp54_integrate(
    const std::function<Vec2(double, const Vec2&)>& f, double t0, const Vec2& y0,
    const std::vector<double>& t_out, double rtol, double atol) {
  std::vector<Vec2> out;
  out.reserve(t_out.size());
  double t = t0;
  Vec2 y = y0;
  Vec2 comp{0.0, 0.0};  // Kahan compensation for the state accumulation
  Vec2 k1 = f(t, y);
  double h = 1e-4;

  auto step_to = [&](double t_target) {
    while (t < t_target) {
      if (t + h > t_target) h = t_target - t;
      // Dormand-Prince tableau
      const Vec2 k2 = f(t + h / 5.0, add_scaled(y, h / 5.0, k1));
      Vec2 ytmp = {y[0] + h * (3.0 / 40.0 * k1[0] + 9.0 / 40.0 * k2[0]),
                   y[1] + h * (3.0 / 40.0 * k1[1] + 9.0 / 40.0 * k2[1])};
      const Vec2 k3 = f(t + 3.0 * h / 10.0, ytmp);
      ytmp = {y[0] + h * (44.0 / 45.0 * k1[0] - 56.0 / 15.0 * k2[0] + 32.0 / 9.0 * k3[0]),
              y[1] + h * (44.0 / 45.0 * k1[1] - 56.0 / 15.0 * k2[1] + 32.0 / 9.0 * k3[1])};
      const Vec2 k4 = f(t + 4.0 * h / 5.0, ytmp);
      ytmp = {y[0] + h * (19372.0 / 6561.0 * k1[0] - 25360.0 / 2187.0 * k2[0] +
                          64448.0 / 6561.0 * k3[0] - 212.0 / 729.0 * k4[0]),
              y[1] + h * (19372.0 / 6561.0 * k1[1] - 25360.0 / 2187.0 * k2[1] +
                          64448.0 / 6561.0 * k3[1] - 212.0 / 729.0 * k4[1])};
      const Vec2 k5 = f(t + 8.0 * h / 9.0, ytmp);
      ytmp = {y[0] + h * (9017.0 / 3168.0 * k1[0] - 355.0 / 33.0 * k2[0] +
                          46732.0 / 5247.0 * k3[0] + 49.0 / 176.0 * k4[0] -
                          5103.0 / 18656.0 * k5[0]),
              y[1] + h * (9017.0 / 3168.0 * k1[1] - 355.0 / 33.0 * k2[1] +
                          46732.0 / 5247.0 * k3[1] + 49.0 / 176.0 * k4[1] -
                          5103.0 / 18656.0 * k5[1])};
      const Vec2 k6 = f(t + h, ytmp);
      const Vec2 delta = {h * (35.0 / 384.0 * k1[0] + 500.0 / 1113.0 * k3[0] +
                               125.0 / 192.0 * k4[0] - 2187.0 / 6784.0 * k5[0] +
                               11.0 / 84.0 * k6[0]),
                          h * (35.0 / 384.0 * k1[1] + 500.0 / 1113.0 * k3[1] +
                               125.0 / 192.0 * k4[1] - 2187.0 / 6784.0 * k5[1] +
                               11.0 / 84.0 * k6[1])};
      const Vec2 y5 = {y[0] + delta[0], y[1] + delta[1]};
      const Vec2 k7 = f(t + h, y5);
      // embedded error estimate, controlled relative to the state norm so
      // that accuracy follows strongly decaying solutions all the way down
      const double ynorm =
          std::max(std::max(std::abs(y[0]), std::abs(y[1])),
                   std::max(std::abs(y5[0]), std::abs(y5[1])));
      const double scale = atol + rtol * ynorm;
      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double e = h * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] +
                              71.0 / 1920.0 * k4[i] - 17253.0 / 339200.0 * k5[i] +
                              22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
        err = std::max(err, std::abs(e) / scale);
      }
      if (err <= 1.0) {
        t += h;
        // compensated state update; the plain y5 only seeded k7, and the
        // eps-level difference is below the error estimate's resolution
        for (int i = 0; i < 2; ++i) {
          const double add = delta[i] + comp[i];
          const double ynew = y[i] + add;
          comp[i] = add - (ynew - y[i]);
          y[i] = ynew;
        }
        k1 = k7;  // FSAL
      }
      const double factor =
          std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
      h = std::min(h * factor, 1.0);
      if (h < 1e-14)
        throw ArgumentError("dp54_integrate: step size underflow");
    }
  };

  for (double tq : t_out) {
    if (tq < t - 1e-15) throw ArgumentError("dp54_integrate: times must be increasing");
    step_to(tq);
    out.push_back(y);
  }
  return out;
}

std::array<double, 2> modal_ode_closed_form(int n, const PhysicalParams& params,
                                            double shift, double drive_coeff,
                                            double t) {
  const double npi = static_cast<double>(n) * kPi;
  const double s = params.kappa * npi * npi + shift;
  if (!(s > 0.0))
    throw ArgumentError("modal_ode_closed_form: effective stiffness must be positive");
  if (drive_coeff == 0.0) return {0.0, 0.0};
  const double nu = params.nu;
  const double steady = drive_coeff / s;
  const double disc = nu * nu - 4.0 * s;
  const double tol = 1e-12 * std::max(nu * nu, 4.0 * s);
  const double env = std::exp(-0.5 * nu * t);
  if (disc < -tol) {
    const double wd = 0.5 * std::sqrt(-disc);
    const double a = steady * (1.0 - env * (std::cos(wd * t) +
                                            nu / (2.0 * wd) * std::sin(wd * t)));
    const double b = (drive_coeff / wd) * env * std::sin(wd * t);
    return {a, b};
  }
  if (disc > tol) {
    const double R = std::sqrt(disc);
    const double lp = 0.5 * (-nu + R);
    const double lm = 0.5 * (-nu - R);
    const double a =
        steady * (1.0 + (lm * std::exp(lp * t) - lp * std::exp(lm * t)) / R);
    const double b = (drive_coeff / R) * (std::exp(lp * t) - std::exp(lm * t));
    return {a, b};
  }
  const double a = steady * (1.0 - env * (1.0 + 0.5 * nu * t));
  const double b = steady * 0.25 * nu * nu * t * env;
  return {a, b};
}

std::array<double, 4> damped_mode_expm(double stiffness, double nu, double t) {
  if (t < 0.0) throw ArgumentError("damped_mode_expm: t >= 0 required");
  // scale so the 1-norm of B = A t / 2^k is at most 1/4
  const double norm1 = t * std::max(stiffness + nu, 1.0);
  int k = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.25 && k < 80) {
    scale *= 0.5;
    ++k;
  }
  const double b11 = 0.0, b12 = t * scale;
  const double b21 = -stiffness * t * scale, b22 = -nu * t * scale;

  // Taylor sum of exp(B): term_{m+1} = term_m * B / (m+1)
  double e11 = 1.0, e12 = 0.0, e21 = 0.0, e22 = 1.0;
  double t11 = 1.0, t12 = 0.0, t21 = 0.0, t22 = 1.0;
  for (int m = 1; m <= 40; ++m) {
    const double n11 = (t11 * b11 + t12 * b21) / m;
    const double n12 = (t11 * b12 + t12 * b22) / m;
    const double n21 = (t21 * b11 + t22 * b21) / m;
    const double n22 = (t21 * b12 + t22 * b22) / m;
    t11 = n11; t12 = n12; t21 = n21; t22 = n22;
    e11 += t11; e12 += t12; e21 += t21; e22 += t22;
    const double tn = std::abs(t11) + std::abs(t12) + std::abs(t21) + std::abs(t22);
    if (tn < 1e-20 * (std::abs(e11) + std::abs(e12) + std::abs(e21) + std::abs(e22)))
      break;
  }
  // undo the scaling by squaring k times
  for (int i = 0; i < k; ++i) {
    const double s11 = e11 * e11 + e12 * e21;
    const double s12 = e11 * e12 + e12 * e22;
    const double s21 = e21 * e11 + e22 * e21;
    const double s22 = e21 * e12 + e22 * e22;
    e11 = s11; e12 = s12; e21 = s21; e22 = s22;
  }
  return {e11, e12, e21, e22};
}

FDGrid::FDGrid(int m_) : m(m_) {
  if (m < 3) throw ArgumentError("FDGrid: need at least 3 interior points");
  h = 2.0 / (m + 1);
  points.resize(m);
  for (int j = 0; j < m; ++j) points[j] = -1.0 + (j + 1) * h;
}

double FdTrajectory::l2_norm(const std::vector<double>& row) const {
  double s = 0.0;
  for (double v : row) s += v * v;
  return std::sqrt(grid.h * s);
}

FdTrajectory fd_solve(const PhysicalParams& params,
                      const std::function<double(double)>& pointwise_f,
                      const std::function<double(double, double)>& drive,
                      const std::vector<double>& t_out, int m) {
  if (m < 16) throw ArgumentError("fd_solve: m >= 16 required");
  if (t_out.empty() || t_out.front() != 0.0)
    throw ArgumentError("fd_solve: output times must start at 0");
  FdTrajectory traj{FDGrid(m), t_out, {}, {}};
  const double h = traj.grid.h;
  const double kap_h2 = params.kappa / (h * h);
  const double nu = params.nu;

  std::vector<double> u(m, 0.0), v(m, 0.0);
  auto rhs_v = [&](const std::vector<double>& uu, const std::vector<double>& vv,
                   double t, std::vector<double>& out) {
    for (int j = 0; j < m; ++j) {
      const double left = (j > 0) ? uu[j - 1] : 0.0;
      const double right = (j + 1 < m) ? uu[j + 1] : 0.0;
      double a = kap_h2 * (left - 2.0 * uu[j] + right) - nu * vv[j];
      if (pointwise_f) a += pointwise_f(uu[j]);
      if (drive) a += drive(t, traj.grid.points[j]);
      out[j] = a;
    }
  };

  // fixed step at 0.8x the explicit stability limit (imaginary-axis radius
  // 2*sqrt(2) for RK4, fastest discrete frequency 2 sqrt(kappa)/h)
  const double dt_stable = 0.8 * std::sqrt(2.0) * h / std::sqrt(params.kappa);

  std::vector<double> k1u(m), k1v(m), k2u(m), k2v(m), k3u(m), k3v(m), k4u(m), k4v(m);
  std::vector<double> tu(m), tv(m);

  double t = 0.0;
  for (double tq : t_out) {
    if (tq < t - 1e-15) throw ArgumentError("fd_solve: times must be increasing");
    const double span = tq - t;
    const int steps = span > 0.0 ? static_cast<int>(std::ceil(span / dt_stable)) : 0;
    const double dt = steps > 0 ? span / steps : 0.0;
    for (int sidx = 0; sidx < steps; ++sidx) {
      // classical RK4
      k1u = v;
      rhs_v(u, v, t, k1v);
      for (int j = 0; j < m; ++j) {
        tu[j] = u[j] + 0.5 * dt * k1u[j];
        tv[j] = v[j] + 0.5 * dt * k1v[j];
      }
      k2u = tv;
      rhs_v(tu, tv, t + 0.5 * dt, k2v);
      for (int j = 0; j < m; ++j) {
        tu[j] = u[j] + 0.5 * dt * k2u[j];
        tv[j] = v[j] + 0.5 * dt * k2v[j];
      }
      k3u = tv;
      rhs_v(tu, tv, t + 0.5 * dt, k3v);
      for (int j = 0; j < m; ++j) {
        tu[j] = u[j] + dt * k3u[j];
        tv[j] = v[j] + dt * k3v[j];
      }
      k4u = tv;
      rhs_v(tu, tv, t + dt, k4v);
      for (int j = 0; j < m; ++j) {
        u[j] += dt / 6.0 * (k1u[j] + 2.0 * k2u[j] + 2.0 * k3u[j] + k4u[j]);
        v[j] += dt / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
      }
      t += dt;
    }
    t = tq;
    bool bad = false;
    for (int j = 0; j < m && !bad; ++j)
      bad = !std::isfinite(u[j]) || std::abs(u[j]) >= 1e12;
    if (bad) throw InstabilityError("fd_solve: norm blow-up, step size too large");
    traj.u.push_back(u);
    traj.v.push_back(v);
  }
  return traj;
}

double fd_sine_eigenvalue(int n, int m) {
  const double h = 2.0 / (m + 1);
  const double s = std::sin(0.5 * static_cast<double>(n) * kPi * h);
  return -4.0 / (h * h) * s * s;
}

}  // namespace telegraph::oracle
