#include "telegraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "telegraph/errors.hpp"
#include "telegraph/rng.hpp"
#include "telegraph/spectral.hpp"

namespace telegraph {

double terminal_time(double ball_radius, double omega, double forcing_bound) {
  if (!(ball_radius > 0.0) || !(omega > 0.0) || !(forcing_bound > 0.0))
    throw ArgumentError("terminal_time: C, omega and c must all be positive");
  return ball_radius / (omega * forcing_bound);
}

SolveConfig build_solve_config(const PhysicalParams& params, const ForcingOperator& F,
                               const SolveOptions& o) {
  if (o.n < 1 || static_cast<std::size_t>(o.n) > o.capacity)
    throw ConfigError("solve config: need 1 <= n <= capacity");
  if (F.capacity() != o.capacity)
    throw ConfigError("solve config: forcing capacity must match solver capacity");
  if (!(o.ball_radius > 0.0)) throw ConfigError("solve config: ball_radius must be > 0");
  if (!(o.fp_tol > 0.0) || o.fp_max_iter < 1)
    throw ConfigError("solve config: fp_tol > 0 and fp_max_iter >= 1 required");
  if (!(o.relaxation > 0.0) || o.relaxation > 1.0)
    throw ConfigError("solve config: relaxation must lie in (0, 1]");

  double omega;
  if (o.omega) {
    omega = *o.omega;
    if (!(omega > 0.0)) throw ConfigError("solve config: omega must be > 0");
  } else {
    // sup of the decaying profile is reached early; scan a horizon of 10/nu
    const double t_max = std::max(10.0 / params.nu, 1.0);
    std::vector<double> scan(2001);
    for (std::size_t i = 0; i < scan.size(); ++i)
      scan[i] = t_max * static_cast<double>(i) / (scan.size() - 1.0);
    omega = du_norm_bound(params, scan, static_cast<int>(o.capacity)).omega;
  }

  const double c = o.forcing_bound ? *o.forcing_bound : F.local_bound(o.ball_radius);
  if (!(c > 0.0))
    throw ConfigError(
        "solve config: forcing bound c is not positive; a zero forcing needs an "
        "explicit forcing_bound override");

  const double T0 = terminal_time(o.ball_radius, omega, c);
  const int k_test = o.k_test > 0
                         ? o.k_test
                         : static_cast<int>(std::min<std::size_t>(2 * o.n, o.capacity));
  if (static_cast<std::size_t>(k_test) > o.capacity)
    throw ConfigError("solve config: k_test exceeds capacity");

  SolveConfig cfg{params,
                  o.n,
                  o.capacity,
                  o.ball_radius,
                  c,
                  omega,
                  T0,
                  TimeGrid(T0, o.cells, o.gauss_order),
                  o.fp_tol,
                  o.fp_max_iter,
                  o.relaxation,
                  o.alpha,
                  k_test,
                  o.equicontinuity_delta > 0.0 ? o.equicontinuity_delta : T0 / 20.0,
                  o.constraint_samples,
                  o.seed,
                  o.ball_validation_samples};
  return cfg;
}

namespace {

ModalSeries sample_drive(const DriveTerm& drive, const TimeGrid& grid,
                         std::size_t capacity) {
  ModalSeries g(grid, capacity);
  for (std::size_t j = 0; j < grid.nodes().size(); ++j)
    g.at_node(j) = drive.evaluate(grid.nodes()[j]).resized(capacity);
  for (std::size_t j = 0; j < grid.cells(); ++j)
    for (int gg = 0; gg < grid.gauss_order(); ++gg)
      g.at_gauss(j, gg) = drive.evaluate(grid.gauss_time(j, gg)).resized(capacity);
  return g;
}

ModalSeries forcing_on_series(const ForcingOperator& F, const ModalSeries& u) {
  ModalSeries out = u;
  out.transform([&F](ModalVector& v) { v = F.evaluate(v); });
  return out;
}

double series_h10_max(const ModalSeries& s, const PhysicalParams& p) {
  return s.max_over_samples([&p](const ModalVector& v) { return v.h10_norm(p); });
}

void check_in_pn(const ModalSeries& z, int n) {
  const double above = z.max_over_samples([n](const ModalVector& v) {
    double m = 0.0;
    for (std::size_t k = static_cast<std::size_t>(n); k < v.capacity(); ++k)
      m = std::max(m, std::abs(v.raw()[k]));
    return m;
  });
  if (above != 0.0)
    throw ArgumentError("apply_K: iterate has nonzero coefficients above n");
}

// one K application; shared by apply_K and the Picard loop
struct KStep {
  ModalSeries kz;
  StateSeries v;
  double u_du_max;
};

KStep k_step(const ModalSeries& z, const ModalSeries& g, const SolveConfig& cfg,
             const ForcingOperator& F) {
  ModalSeries src = z;
  src.combine(1.0, 1.0, g);
  KStep out{ModalSeries(), duhamel_velocity(src, cfg.params), 0.0};
  const ModalSeries u = out.v.first_components();
  out.u_du_max =
      u.max_over_samples([&](const ModalVector& w) { return w.du_norm(cfg.params); });
  out.kz = project_P(forcing_on_series(F, u), cfg.n);
  return out;
}

}  // namespace

ModalSeries apply_K(const ModalSeries& z, const SolveConfig& config,
                    const ForcingOperator& F, const DriveTerm& drive, KAudit* audit) {
  check_in_pn(z, config.n);
  const double zn = series_h10_max(z, config.params);
  if (zn > config.forcing_bound * (1.0 + 1e-9))
    throw InvarianceError("apply_K: input outside the ball B_n", zn,
                          config.forcing_bound);
  const ModalSeries g = sample_drive(drive, z.grid(), config.capacity);
  const KStep step = k_step(z, g, config, F);
  if (audit) {
    audit->u_du_max = step.u_du_max;
    audit->output_ball_norm = series_h10_max(step.kz, config.params);
  }
  return step.kz;
}

FixedPointState fixed_point_solve(const SolveConfig& config, const ForcingOperator& F,
                                  const DriveTerm& drive) {
  const ModalSeries g = sample_drive(drive, config.grid, config.capacity);

  // z0 = P_n F(u of the drive-only solve); zero when there is no drive
  ModalSeries z(config.grid, config.capacity);
  if (!drive.is_zero()) {
    const StateSeries v_drive = duhamel_velocity(g, config.params);
    z = project_P(forcing_on_series(F, v_drive.first_components()), config.n);
  }

  const double c = config.forcing_bound;
  {
    const double zn = series_h10_max(z, config.params);
    if (zn > c * (1.0 + 1e-9))
      throw InvarianceError("fixed_point_solve: initial iterate outside B_n", zn, c);
  }

  double relax = config.relaxation;
  const double relax_floor = config.relaxation / 64.0;
  double prev_resid = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  history.reserve(config.fp_max_iter);
  double u_du_global = 0.0;

  for (int it = 1; it <= config.fp_max_iter; ++it) {
    KStep step = k_step(z, g, config, F);
    u_du_global = std::max(u_du_global, step.u_du_max);

    ModalSeries diff = z;
    diff.combine(1.0, -1.0, step.kz);
    const double resid = series_h10_max(diff, config.params);
    history.push_back(resid);

    if (resid <= config.fp_tol) {
      FixedPointState out{std::move(z),         std::move(step.v), resid, it,
                          std::move(history), u_du_global,        0.0};
      out.z_ball_norm = series_h10_max(out.z, config.params);
      return out;
    }

    const double kn = series_h10_max(step.kz, config.params);
    if (kn > c * (1.0 + 1e-9))
      throw InvarianceError("fixed_point_solve: K(z) left the ball B_n mid-iteration",
                            kn, c);
    if (resid > prev_resid) relax = std::max(0.5 * relax, relax_floor);
    prev_resid = resid;
    z.combine(1.0 - relax, relax, step.kz);
  }
  const std::string msg = "fixed_point_solve: residual " +
                          std::to_string(history.back()) + " above tol " +
                          std::to_string(config.fp_tol) + " after " +
                          std::to_string(config.fp_max_iter) + " iterations";
  throw NonconvergenceError(msg, std::move(history));
}

BallAlphaReport validate_constraint_ball(const ConstraintOperator& G, double ball_radius,
                                         double alpha, const PhysicalParams& params,
                                         std::size_t capacity, std::size_t samples,
                                         std::uint64_t seed) {
  Rng rng(seed);
  double min_inf = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    ModalVector u(capacity);
    for (std::size_t k = 0; k < capacity; ++k) u.raw()[k] = rng.normal();
    const double norm = u.du_norm(params);
    if (norm == 0.0) continue;
    u *= ball_radius / norm;  // project to the sphere |u|_{D(U)} = C
    min_inf = std::min(min_inf, G.evaluate_inf(u).inf_value);
  }
  return {min_inf >= alpha, min_inf};
}

Trajectory constrained_solve(const SolveConfig& config, const ForcingOperator& F,
                             const ConstraintOperator& G, const DriveTerm& drive) {
  {
    const ConstraintEvaluation g0 = G.evaluate_inf(ModalVector(config.capacity));
    if (!(g0.inf_value > 0.0))
      throw ArgumentError("constrained_solve: inf G(0) must be positive");
  }
  const BallAlphaReport ball_report =
      validate_constraint_ball(G, config.ball_radius, config.alpha, config.params,
                               config.capacity, config.ball_validation_samples,
                               config.seed);

  FixedPointState fps = fixed_point_solve(config, F, drive);

  Trajectory traj;
  traj.alpha = config.alpha;
  traj.ball_alpha_validated = ball_report.validated;
  traj.fp_residual = fps.residual;
  traj.fp_iterations = fps.iterations;
  traj.u_ball_ratio = fps.u_du_max / config.ball_radius;
  traj.times = config.grid.nodes();
  traj.states.reserve(traj.times.size());
  traj.h_norms.reserve(traj.times.size());
  traj.du_norms.reserve(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    traj.states.push_back(fps.v_of_z.at_node(j));
    traj.h_norms.push_back(traj.states.back().h_norm(config.params));
    traj.du_norms.push_back(traj.states.back().u.du_norm(config.params));
  }

  traj.constraint_report.reserve(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const ConstraintEvaluation e =
        G.evaluate_inf(traj.states[j].u, config.constraint_samples);
    traj.constraint_report.push_back(
        {traj.times[j], e.inf_value, e.certified_lower_bound, e.argmin_x});
    if (e.certified_lower_bound < config.alpha && traj.admissible) {
      traj.admissible = false;
      traj.violation =
          ViolationInfo{traj.times[j], e.argmin_x, e.certified_lower_bound, config.alpha};
    }
  }

  traj.residual_modes.resize(config.k_test);
  for (int k = 1; k <= config.k_test; ++k) traj.residual_modes[k - 1] = k;
  traj.weak_residuals = weak_residual(fps, config, F, drive, config.k_test);

  // equicontinuity diagnostic over node pairs within delta
  double modulus = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    for (std::size_t j = i + 1; j < traj.times.size(); ++j) {
      if (traj.times[j] - traj.times[i] > config.equicontinuity_delta) break;
      modulus = std::max(modulus,
                         (traj.states[j].u - traj.states[i].u).h10_norm(config.params));
    }
  traj.equicontinuity_modulus = modulus;

  if (!traj.admissible) {
    const ViolationInfo v = *traj.violation;
    throw AdmissibilityError(
        "constrained_solve: certified inf G(u) = " + std::to_string(v.certified) +
            " dropped below alpha = " + std::to_string(v.alpha) + " at t = " +
            std::to_string(v.time) + " near x = " + std::to_string(v.location),
        std::move(traj), v);
  }
  return traj;
}

std::vector<std::vector<double>> weak_residual(const FixedPointState& state,
                                               const SolveConfig& config,
                                               const ForcingOperator& F,
                                               const DriveTerm& drive, int k_test) {
  if (k_test < 1 || static_cast<std::size_t>(k_test) > config.capacity)
    throw ArgumentError("weak_residual: k_test out of range");
  const auto& nodes = config.grid.nodes();
  std::vector<std::vector<double>> r(static_cast<std::size_t>(k_test),
                                     std::vector<double>(nodes.size(), 0.0));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const StateVector& st = state.v_of_z.at_node(j);
    const ModalVector fu = F.evaluate(st.u);
    const ModalVector g = drive.evaluate(nodes[j]).resized(config.capacity);
    const ModalVector& z = state.z.at_node(j);
    for (int k = 1; k <= k_test; ++k) {
      const double kpi = static_cast<double>(k) * kPi;
      const double stiff = config.params.kappa * kpi * kpi;
      const double uk = st.u.coeff(k);
      const double vk = st.v.coeff(k);
      // u_tt from the evolution equation, modal and exact
      const double utt = -stiff * uk - config.params.nu * vk + z.coeff(k) + g.coeff(k);
      r[static_cast<std::size_t>(k - 1)][j] =
          utt + config.params.nu * vk + stiff * uk - fu.coeff(k) - g.coeff(k);
    }
  }
  return r;
}

}  // namespace telegraph
