// solver pipeline: T0, the map K, Picard iteration, constraint monitoring,
// weak residuals.

#include <doctest.h>

#include <array>
#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/oracle.hpp"
#include "telegraph/solver.hpp"
#include "telegraph/spectral.hpp"

using namespace telegraph;

namespace {

const PhysicalParams kP(1.0, 1.0);

// identity forcing, constant mode-1 drive: the converged solution solves
// a'' + nu a' + (kappa pi^2 - 1) a = amp with zero data
SolveConfig linear_scenario(const PointwiseForcing& F, std::size_t cells = 200) {
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.ball_radius = 2.0;
  o.cells = cells;
  o.gauss_order = 6;
  o.fp_tol = 1e-9;
  o.fp_max_iter = 150;
  return build_solve_config(kP, F, o);
}

}  // namespace

TEST_CASE("terminal time formula") {
  CHECK(terminal_time(1.0, 1.0, 1.0) == 1.0);
  CHECK(terminal_time(2.0, 1.05, 4.0) ==
        doctest::Approx(0.47619047619047616).epsilon(1e-16));
  // doubling c halves T0
  CHECK(terminal_time(3.0, 1.2, 2.0) ==
        doctest::Approx(2.0 * terminal_time(3.0, 1.2, 4.0)).epsilon(1e-15));
  CHECK_THROWS_AS(terminal_time(0.0, 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(terminal_time(1.0, 1.0, 0.0), ArgumentError);
}

TEST_CASE("solve config validation") {
  SolveOptions o;
  o.n = 10;
  o.capacity = 8;
  const PointwiseForcing F = PointwiseForcing::monomial(2, 8, kP);
  CHECK_THROWS_AS(build_solve_config(kP, F, o), ConfigError);

  SolveOptions o2;
  o2.capacity = 8;
  o2.n = 4;
  CHECK_THROWS_AS(build_solve_config(kP, ZeroForcing(8), o2), ConfigError);
  o2.forcing_bound = 1.0;  // explicit c makes the zero forcing usable
  CHECK_NOTHROW(build_solve_config(kP, ZeroForcing(8), o2));

  SolveOptions o3;
  o3.capacity = 8;
  o3.relaxation = 1.5;
  CHECK_THROWS_AS(build_solve_config(kP, PointwiseForcing::monomial(2, 8, kP), o3),
                  ConfigError);

  // T0 = C/(omega c) exactly
  SolveOptions o4;
  o4.n = 2;
  o4.capacity = 8;
  o4.ball_radius = 1.7;
  o4.forcing_bound = 0.9;
  o4.omega = 1.3;
  const SolveConfig cfg = build_solve_config(kP, PointwiseForcing::monomial(2, 8, kP), o4);
  CHECK(cfg.T0 == 1.7 / (1.3 * 0.9));
  CHECK(cfg.grid.t_end() == cfg.T0);
}

TEST_CASE("apply_K: zero fixed point and preconditions") {
  const PointwiseForcing F = PointwiseForcing::monomial(2, 8, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.cells = 30;
  o.gauss_order = 4;
  const SolveConfig cfg = build_solve_config(kP, F, o);

  const ModalSeries z(cfg.grid, cfg.capacity);
  const ModalSeries kz = apply_K(z, cfg, F, DriveTerm::none(cfg.capacity));
  CHECK(kz.max_over_samples([](const ModalVector& v) { return v.l2_norm(); }) == 0.0);

  // a mode above n violates membership in P_n
  ModalSeries bad(cfg.grid, cfg.capacity);
  bad.at_node(1).set_coeff(5, 1e-3);
  CHECK_THROWS_AS(apply_K(bad, cfg, F, DriveTerm::none(cfg.capacity)), ArgumentError);

  // a ball violation reports the measured norm
  ModalSeries big(cfg.grid, cfg.capacity);
  big.transform([&](ModalVector& v) { v.set_coeff(1, 10.0 * cfg.forcing_bound); });
  try {
    apply_K(big, cfg, F, DriveTerm::none(cfg.capacity));
    CHECK(false);
  } catch (const InvarianceError& e) {
    CHECK(e.measured_norm > e.bound_value);
  }
}

TEST_CASE("apply_K matches the diagonal closed form for linear F") {
  // bvp composition forcing, drive phi_1, z = beta phi_2 constant in t
  const std::size_t M = 8;
  const BvpCompositionForcing F(M, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = M;
  o.ball_radius = 1.0;
  o.forcing_bound = 1.0;  // roomy override so the test iterate fits the ball
  o.cells = 80;
  o.gauss_order = 6;
  const SolveConfig cfg = build_solve_config(kP, F, o);

  const double beta = 0.1;
  ModalSeries z(cfg.grid, M);
  z.transform([&](ModalVector& v) { v.set_coeff(2, beta); });

  const ModalSeries kz = apply_K(z, cfg, F, DriveTerm::constant(M, 1, 1.0));

  double worst = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j) {
    const double t = cfg.grid.nodes()[j];
    const double a1 = oracle::modal_ode_closed_form(1, kP, 0.0, 1.0, t)[0];
    const double a2 = oracle::modal_ode_closed_form(2, kP, 0.0, beta, t)[0];
    worst = std::max(worst,
                     std::abs(kz.at_node(j).coeff(1) - a1 / (kPi * kPi + 1.0)));
    worst = std::max(worst,
                     std::abs(kz.at_node(j).coeff(2) - a2 / (4.0 * kPi * kPi + 1.0)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("fixed point: no drive converges immediately to zero") {
  const PointwiseForcing F = PointwiseForcing::sinh_forcing(8, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.cells = 20;
  o.gauss_order = 4;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const FixedPointState st = fixed_point_solve(cfg, F, DriveTerm::none(8));
  CHECK(st.iterations == 1);
  CHECK(st.residual == 0.0);
  CHECK(st.v_of_z.max_over_samples([&](const StateVector& s) { return s.h_norm(kP); }) ==
        0.0);
}

TEST_CASE("linear identity forcing matches the modal closed form to 1e-7") {
  const PointwiseForcing F = PointwiseForcing::monomial(1, 8, kP);
  const SolveConfig cfg = linear_scenario(F);
  const DriveTerm drive = DriveTerm::constant(8, 1, 1.0);
  const FixedPointState st = fixed_point_solve(cfg, F, drive);
  CHECK(st.residual <= cfg.fp_tol);

  double worst = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j) {
    const double a =
        oracle::modal_ode_closed_form(1, kP, -1.0, 1.0, cfg.grid.nodes()[j])[0];
    // modes 2.. are zero, so |u - a phi_1|_{L2} = sqrt((u_1-a)^2 + tail^2)
    double tail2 = 0.0;
    for (int k = 2; k <= 8; ++k) {
      const double c = st.v_of_z.at_node(j).u.coeff(k);
      tail2 += c * c;
    }
    const double d = st.v_of_z.at_node(j).u.coeff(1) - a;
    worst = std::max(worst, std::sqrt(d * d + tail2));
  }
  CHECK(worst < 1e-7);

  // re-applying K moves the iterate by no more than 2 fp_tol
  const ModalSeries kz = apply_K(st.z, cfg, F, drive);
  ModalSeries diff = st.z;
  diff.combine(1.0, -1.0, kz);
  CHECK(diff.max_over_samples([&](const ModalVector& v) { return v.h10_norm(kP); }) <=
        2.0 * cfg.fp_tol);

  // weak residuals for the test modes below n stay at the linear-case level
  const auto wr = weak_residual(st, cfg, F, drive, cfg.n);
  for (const auto& row : wr)
    for (double v : row) CHECK(std::abs(v) <= 1e-8);

  // the trajectory starts quiescent, exactly
  CHECK(st.v_of_z.at_node(0).u.l2_norm() == 0.0);
  CHECK(st.v_of_z.at_node(0).v.l2_norm() == 0.0);

  // modes above n are exactly zero (mode confinement)
  double above = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j)
    for (int k = cfg.n + 1; k <= 8; ++k)
      above = std::max(above, std::abs(st.v_of_z.at_node(j).u.coeff(k)));
  CHECK(above == 0.0);
}

TEST_CASE("monomial(2) small drive: fast convergence, tiny weak residual") {
  const std::size_t M = 16;
  const PointwiseForcing F = PointwiseForcing::monomial(2, M, kP);
  SolveOptions o;
  o.n = 8;
  o.capacity = M;
  o.ball_radius = 1.0;
  o.cells = 120;
  o.gauss_order = 6;
  o.fp_tol = 1e-9;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const DriveTerm drive = DriveTerm::constant(M, 1, 1e-2);
  const FixedPointState st = fixed_point_solve(cfg, F, drive);
  CHECK(st.iterations <= 25);
  CHECK(st.residual <= cfg.fp_tol);

  const auto r = weak_residual(st, cfg, F, drive, cfg.n);
  double worst = 0.0;
  for (const auto& row : r)
    for (double v : row) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-6);
}

TEST_CASE("sinh forcing: driven solve converges with tiny weak residual") {
  const std::size_t M = 16;
  const PointwiseForcing F = PointwiseForcing::sinh_forcing(M, kP);
  SolveOptions o;
  o.n = 8;
  o.capacity = M;
  o.ball_radius = 2.0;
  o.cells = 100;
  o.gauss_order = 6;
  o.fp_tol = 1e-10;
  o.fp_max_iter = 60;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const DriveTerm drive = DriveTerm::constant(M, 1, 0.5);
  const FixedPointState st = fixed_point_solve(cfg, F, drive);
  CHECK(st.residual <= cfg.fp_tol);
  CHECK(st.iterations <= 30);
  CHECK(st.u_du_max < cfg.ball_radius);
  CHECK(st.z_ball_norm <= cfg.forcing_bound);

  const auto r = weak_residual(st, cfg, F, drive, cfg.n);
  double worst = 0.0;
  for (const auto& row : r)
    for (double v : row) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-6);

  // sinh couples odd modes: the solution is not confined to mode 1
  double mode3 = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j)
    mode3 = std::max(mode3, std::abs(st.v_of_z.at_node(j).u.coeff(3)));
  CHECK(mode3 > 1e-8);
}

TEST_CASE("cosine drive through the fixed point matches a direct ODE oracle") {
  // bvp forcing is diagonal, so mode 1 of the converged solution obeys
  //   a'' + nu a' + kappa pi^2 a = a/(pi^2+1) + A cos(w t)
  const std::size_t M = 8;
  const BvpCompositionForcing F(M, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = M;
  o.ball_radius = 1.0;
  o.forcing_bound = 0.5;
  o.cells = 200;
  o.gauss_order = 6;
  o.fp_tol = 1e-11;
  o.fp_max_iter = 60;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const double amp = 0.8;
  const double w = 2.5;
  const DriveTerm drive = DriveTerm::cosine(M, 1, amp, w);
  const FixedPointState st = fixed_point_solve(cfg, F, drive);

  const double stiff = kP.kappa * kPi * kPi;
  auto rhs = [&](double t, const std::array<double, 2>& y) {
    return std::array<double, 2>{
        y[1], -stiff * y[0] - kP.nu * y[1] + y[0] / (kPi * kPi + 1.0) +
                  amp * std::cos(w * t)};
  };
  const auto exact =
      oracle::dp54_integrate(rhs, 0.0, {0.0, 0.0}, cfg.grid.nodes(), 1e-13, 1e-15);
  double worst = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j) {
    worst = std::max(worst, std::abs(st.v_of_z.at_node(j).u.coeff(1) - exact[j][0]));
    worst = std::max(worst, std::abs(st.v_of_z.at_node(j).v.coeff(1) - exact[j][1]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("weak residual above n equals the unprojected forcing tail") {
  const std::size_t M = 16;
  const PointwiseForcing F = PointwiseForcing::monomial(3, M, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = M;
  o.ball_radius = 6.0;
  o.forcing_bound = 5.0;
  o.cells = 40;
  o.gauss_order = 5;
  o.fp_tol = 1e-10;
  o.fp_max_iter = 120;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const DriveTerm drive = DriveTerm::constant(M, 1, 3.0);
  const FixedPointState st = fixed_point_solve(cfg, F, drive);

  const auto r = weak_residual(st, cfg, F, drive, 12);
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j) {
    const ModalVector fu = F.evaluate(st.v_of_z.at_node(j).u);
    for (int k = cfg.n + 1; k <= 12; ++k)
      CHECK(r[static_cast<std::size_t>(k - 1)][j] ==
            doctest::Approx(-fu.coeff(k)).epsilon(1e-13));
  }
}

TEST_CASE("constrained solve: quiescent scenario is admissible") {
  const PointwiseForcing F = PointwiseForcing::monomial(2, 8, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.cells = 20;
  o.gauss_order = 4;
  o.alpha = 0.5;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const AffineConstraint G(1.0, 4096);
  const Trajectory traj = constrained_solve(cfg, F, G, DriveTerm::none(8));
  CHECK(traj.admissible);
  CHECK(traj.ball_alpha_validated);
  CHECK(traj.fp_residual == 0.0);
  for (const ConstraintSample& s : traj.constraint_report) {
    CHECK(s.inf_value == 1.0);
    CHECK(s.certified_lower_bound == 1.0);
  }
  for (const StateVector& s : traj.states) CHECK(s.h_norm(kP) == 0.0);
  CHECK(traj.times.front() == 0.0);
}

TEST_CASE("engineered crossing is flagged at the analytic time") {
  const std::size_t M = 8;
  const BvpCompositionForcing F(M, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = M;
  o.ball_radius = 1.0;
  o.forcing_bound = 0.1;  // user override lengthens T0 past the crossing
  o.cells = 400;
  o.gauss_order = 5;
  o.alpha = 0.9;
  o.constraint_samples = 65536;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const DriveTerm drive = DriveTerm::constant(M, 1, -2.0);
  const AffineConstraint G(1.0, o.constraint_samples);

  // analytic crossing: |a(t*)| = 1 - alpha with the bvp-shifted stiffness
  const double shift = -1.0 / (kPi * kPi + 1.0);
  auto amp = [&](double t) {
    return -oracle::modal_ode_closed_form(1, kP, shift, -2.0, t)[0];
  };
  double lo = 0.0, hi = 2.0;
  REQUIRE(amp(hi) > 0.1);
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (amp(mid) < 0.1 ? lo : hi) = mid;
  }
  const double t_star = 0.5 * (lo + hi);

  try {
    constrained_solve(cfg, F, G, drive);
    CHECK(false);
  } catch (const AdmissibilityError& e) {
    const double cell = cfg.T0 / static_cast<double>(o.cells);
    CHECK(std::abs(e.violation.time - t_star) <= 1.5 * cell);
    CHECK(e.violation.alpha == 0.9);
    CHECK(e.violation.location == doctest::Approx(0.5).epsilon(0.05));
    CHECK_FALSE(e.trajectory.admissible);
    CHECK(e.trajectory.violation.has_value());
  }
}

TEST_CASE("ball-alpha sampling validation refutes an infeasible level") {
  // every odd u has inf u <= 0, so inf (0.05 + u) <= 0.05 < 0.5 at any sample
  const AffineConstraint G(0.05, 4096);
  const BallAlphaReport rep = validate_constraint_ball(G, 1.0, 0.5, kP, 8, 8, 1);
  CHECK_FALSE(rep.validated);
  CHECK(rep.min_inf <= 0.05 + 1e-12);

  // and accepts a comfortably feasible one
  const AffineConstraint G2(1.0, 4096);
  const BallAlphaReport rep2 = validate_constraint_ball(G2, 1.0, 0.5, kP, 8, 8, 1);
  CHECK(rep2.validated);
}

TEST_CASE("admissibility is stable under 2x grid refinement") {
  const PointwiseForcing F = PointwiseForcing::monomial(1, 8, kP);
  const DriveTerm drive = DriveTerm::constant(8, 1, 1.0);
  const AffineConstraint G(1.0, 32768);

  const SolveConfig coarse = linear_scenario(F, 150);
  const SolveConfig fine = linear_scenario(F, 300);
  const Trajectory a = constrained_solve(coarse, F, G, drive);
  const Trajectory b = constrained_solve(fine, F, G, drive);
  CHECK(a.admissible);
  CHECK(b.admissible);
  for (std::size_t j = 0; j < a.times.size(); ++j) {
    CHECK(a.times[j] == doctest::Approx(b.times[2 * j]).epsilon(1e-14));
    CHECK(std::abs(a.constraint_report[j].certified_lower_bound -
                   b.constraint_report[2 * j].certified_lower_bound) <= 1e-6);
  }
}

TEST_CASE("shrinking C never turns an admissible scenario inadmissible") {
  // same physics and drive, smaller ball: T0 shrinks, the shared time range
  // is a prefix of the larger run, and admissibility must carry over
  const PointwiseForcing F = PointwiseForcing::monomial(1, 8, kP);
  const DriveTerm drive = DriveTerm::constant(8, 1, 1.0);
  const AffineConstraint G(1.0, 8192);
  double prev_T0 = 1e300;
  for (double C : {2.0, 1.5, 1.0}) {
    SolveOptions o;
    o.n = 4;
    o.capacity = 8;
    o.ball_radius = C;
    o.forcing_bound = 0.61;  // fixed c, so T0 = C/(omega c) scales with C
    o.cells = 100;
    o.gauss_order = 5;
    o.fp_max_iter = 150;
    const SolveConfig cfg = build_solve_config(kP, F, o);
    CHECK(cfg.T0 < prev_T0);
    prev_T0 = cfg.T0;
    const Trajectory traj = constrained_solve(cfg, F, G, drive);
    CHECK(traj.admissible);
  }
}

TEST_CASE("equicontinuity modulus is reported and sane") {
  const PointwiseForcing F = PointwiseForcing::monomial(1, 8, kP);
  const SolveConfig cfg = linear_scenario(F, 100);
  const AffineConstraint G(1.0, 4096);
  const Trajectory traj =
      constrained_solve(cfg, F, G, DriveTerm::constant(8, 1, 1.0));
  CHECK(traj.equicontinuity_modulus > 0.0);
  double max_h10 = 0.0;
  for (const StateVector& s : traj.states)
    max_h10 = std::max(max_h10, s.u.h10_norm(kP));
  CHECK(traj.equicontinuity_modulus <= 2.0 * max_h10 + 1e-12);
}

TEST_CASE("scalar and avx2 kernel backends give matching solves") {
  if (!kernels::avx2_available()) return;
  const PointwiseForcing F = PointwiseForcing::monomial(3, 8, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.ball_radius = 2.0;
  o.cells = 40;
  o.gauss_order = 5;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  const DriveTerm drive = DriveTerm::constant(8, 1, 0.5);

  kernels::force_backend("scalar");
  const FixedPointState a = fixed_point_solve(cfg, F, drive);
  kernels::force_backend("avx2");
  const FixedPointState b = fixed_point_solve(cfg, F, drive);
  kernels::force_backend("auto");

  double worst = 0.0;
  for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j) {
    const StateVector d(a.v_of_z.at_node(j).u - b.v_of_z.at_node(j).u,
                        a.v_of_z.at_node(j).v - b.v_of_z.at_node(j).v);
    worst = std::max(worst, d.h_norm(kP));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("nonconvergence carries the residual history") {
  const PointwiseForcing F = PointwiseForcing::monomial(1, 8, kP);
  SolveOptions o;
  o.n = 4;
  o.capacity = 8;
  o.ball_radius = 2.0;
  o.cells = 60;
  o.gauss_order = 5;
  o.fp_tol = 1e-12;
  o.fp_max_iter = 3;
  const SolveConfig cfg = build_solve_config(kP, F, o);
  try {
    fixed_point_solve(cfg, F, DriveTerm::constant(8, 1, 1.0));
    CHECK(false);
  } catch (const NonconvergenceError& e) {
    CHECK(e.residual_history.size() == 3);
    CHECK(e.residual_history.back() > 1e-12);
  }
}
