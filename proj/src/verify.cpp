#include "telegraph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "telegraph/errors.hpp"
#include "telegraph/forcing.hpp"
#include "telegraph/rng.hpp"
#include "telegraph/semigroup.hpp"
#include "telegraph/solver.hpp"
#include "telegraph/spectral.hpp"

namespace telegraph::verify {

namespace {

StateVector random_state(Rng& rng, std::size_t M) {
  StateVector f = StateVector::zero(M);
  for (std::size_t k = 0; k < M; ++k) {
    const double decay = 1.0 / static_cast<double>(k + 1);
    f.u.raw()[k] = rng.normal() * decay;
    f.v.raw()[k] = rng.normal() * decay;
  }
  return f;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Check check_from_margin(std::string name, double margin, const std::string& detail) {
  return {std::move(name), margin >= 0.0, margin, detail};
}

SuiteResult suite_semigroup(std::uint64_t seed) {
  SuiteResult res{"semigroup", seed, true, {}};
  const PhysicalParams p(1.0, 1.0);
  const std::size_t M = 32;
  Rng rng(seed);

  // contraction: |T(t) f|_H <= |f|_H
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    const StateVector f = random_state(rng, M);
    const double t = rng.uniform(0.01, 20.0);
    const double before = f.h_norm(p);
    const double after = apply_semigroup(f, t, p).h_norm(p);
    worst_slack = std::min(worst_slack, before - after);
  }
  res.checks.push_back(check_from_margin("contraction", worst_slack,
                                         "min |f| - |T(t)f| = " + fmt(worst_slack)));

  // semigroup law: T(t+s) f = T(t) T(s) f
  double worst_comp = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector f = random_state(rng, M);
    const double t = rng.uniform(0.0, 10.0);
    const double s = rng.uniform(0.0, 10.0);
    const StateVector lhs = apply_semigroup(f, t + s, p);
    const StateVector rhs = apply_semigroup(apply_semigroup(f, s, p), t, p);
    const StateVector d(lhs.u - rhs.u, lhs.v - rhs.v);
    worst_comp = std::max(worst_comp, d.h_norm(p) / f.h_norm(p));
  }
  res.checks.push_back(check_from_margin("composition", 1e-12 - worst_comp,
                                         "max relative defect = " + fmt(worst_comp)));

  // Abel identity det = exp(-nu t), all three regimes
  double worst_det = 0.0;
  const PhysicalParams regimes[] = {PhysicalParams(1.0, 1.0),
                                    PhysicalParams(2.0 * kPi, 1.0),
                                    PhysicalParams(10.0, 0.1)};
  for (const auto& pr : regimes)
    for (int n = 1; n <= 8; ++n)
      for (int ti = 0; ti <= 20; ++ti) {
        const double t = 0.5 * ti;
        const ModePropagator m = propagate_mode(n, t, pr);
        worst_det = std::max(worst_det, std::abs(m.det() - std::exp(-pr.nu * t)));
      }
  res.checks.push_back(check_from_margin("abel_identity", 1e-12 - worst_det,
                                         "max |det - exp(-nu t)| = " + fmt(worst_det)));

  // energy identity: (Uf, f)_H = -nu |v|^2 and d/dt |T(t)f|^2 = 2 (U T f, T f)
  double worst_exact = 0.0;
  double worst_fd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector f = random_state(rng, M);
    // modal inner product (Uf, f)_H computed from the definition
    double ip = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      const double kpi = static_cast<double>(k + 1) * kPi;
      const double stiff = p.kappa * kpi * kpi;
      ip += p.kappa * kpi * kpi * f.v.raw()[k] * f.u.raw()[k];  // (v, u)_{H10}
      ip += (-stiff * f.u.raw()[k] - p.nu * f.v.raw()[k]) * f.v.raw()[k];
    }
    worst_exact = std::max(worst_exact, std::abs(ip - energy_rate(f, p)));

    const double t = rng.uniform(0.2, 2.0);
    const StateVector ft = apply_semigroup(f, t, p);
    const double expected = 2.0 * energy_rate(ft, p);
    if (std::abs(expected) < 1e-6 * f.h_norm_sq(p)) continue;
    const double h = 1e-7;
    const double plus = apply_semigroup(f, t + h, p).h_norm_sq(p);
    const double minus = apply_semigroup(f, t - h, p).h_norm_sq(p);
    const double fd = (plus - minus) / (2.0 * h);
    worst_fd = std::max(worst_fd, std::abs(fd - expected) / std::abs(expected));
  }
  res.checks.push_back(check_from_margin("energy_rate_exact", 1e-12 - worst_exact,
                                         "max defect = " + fmt(worst_exact)));
  res.checks.push_back(check_from_margin("energy_rate_fd", 1e-6 - worst_fd,
                                         "max relative fd defect = " + fmt(worst_fd)));

  for (const auto& c : res.checks) res.passed = res.passed && c.passed;
  return res;
}

SuiteResult suite_resolvent(std::uint64_t seed) {
  SuiteResult res{"resolvent", seed, true, {}};
  const PhysicalParams p(1.0, 1.0);
  const std::size_t M = 32;
  Rng rng(seed);
  double min_slack = std::numeric_limits<double>::infinity();
  double worst_round = 0.0;
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (int trial = 0; trial < 300; ++trial) {
      const StateVector f = random_state(rng, M);
      const StateVector rf = resolvent_apply(lambda, f, p);
      min_slack = std::min(min_slack, f.h_norm(p) / lambda - rf.h_norm(p));
      const StateVector back = shifted_generator_apply(lambda, rf, p);
      const StateVector d(back.u - f.u, back.v - f.v);
      worst_round = std::max(worst_round, d.h_norm(p) / f.h_norm(p));
    }
  }
  res.checks.push_back(check_from_margin(
      "bound", min_slack, "min (|f|/lambda - |R f|) = " + fmt(min_slack)));
  res.checks.push_back(check_from_margin("round_trip", 1e-12 - worst_round,
                                         "max relative defect = " + fmt(worst_round)));
  for (const auto& c : res.checks) res.passed = res.passed && c.passed;
  return res;
}

SuiteResult suite_widths(std::uint64_t seed) {
  SuiteResult res{"widths", seed, true, {}};
  const PhysicalParams p(1.0, 2.0);
  const std::size_t M = 48;
  const double b = 1.7;
  Rng rng(seed);

  double worst_extremal = 0.0;
  for (int n = 1; n <= 8; ++n) {
    // extremal element: e = b / (sqrt(kappa) (n+1) pi) phi_{n+1}
    const double coef =
        b / (std::sqrt(p.kappa) * static_cast<double>(n + 1) * kPi);
    const ModalVector e = ModalVector::unit(M, n + 1, coef);
    const ProjectionErrorReport rep = projection_error_bound_check(e, b, n, p);
    worst_extremal =
        std::max(worst_extremal, std::abs(rep.error - n_width(b, n, p)));
  }
  res.checks.push_back(check_from_margin(
      "extremal_equality", 1e-12 - worst_extremal,
      "max |error - d_n| = " + fmt(worst_extremal)));

  double min_gap = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    ModalVector h(M);
    for (std::size_t k = 0; k < M; ++k) h.raw()[k] = rng.normal();
    h *= b * rng.uniform(0.1, 1.0) / h.h10_norm(p);
    const int n = 1 + static_cast<int>(rng.uniform() * 8.0);
    const ProjectionErrorReport rep = projection_error_bound_check(h, b, n, p);
    min_gap = std::min(min_gap, rep.width_bound - rep.error);
  }
  res.checks.push_back(
      check_from_margin("random_ball", min_gap, "min d_n - error = " + fmt(min_gap)));

  double mono = std::numeric_limits<double>::infinity();
  for (int n = 1; n < 16; ++n)
    mono = std::min(mono, n_width(b, n, p) - n_width(b, n + 1, p));
  res.checks.push_back(
      check_from_margin("monotone_in_n", mono, "min d_n - d_{n+1} = " + fmt(mono)));

  const double lin =
      std::abs(n_width(2.0 * b, 3, p) - 2.0 * n_width(b, 3, p));
  res.checks.push_back(
      check_from_margin("linear_in_b", 1e-15 - lin, "defect = " + fmt(lin)));

  for (const auto& c : res.checks) res.passed = res.passed && c.passed;
  return res;
}

SuiteResult suite_invariance(std::uint64_t seed) {
  SuiteResult res{"invariance", seed, true, {}};
  const PhysicalParams p(1.0, 1.0);
  Rng rng(seed);

  SolveOptions opt;
  opt.n = 8;
  opt.capacity = 32;
  opt.ball_radius = 1.0;
  opt.cells = 40;
  opt.gauss_order = 5;
  const PointwiseForcing F = PointwiseForcing::monomial(2, opt.capacity, p);
  const SolveConfig cfg = build_solve_config(p, F, opt);
  const double c = cfg.forcing_bound;

  // random z in B_n: a few random temporal Fourier components per mode,
  // rescaled into the ball
  double min_u_slack = std::numeric_limits<double>::infinity();
  double min_k_slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    ModalSeries z(cfg.grid, cfg.capacity);
    std::vector<double> amp(static_cast<std::size_t>(cfg.n)), freq(amp.size()),
        phase(amp.size());
    for (std::size_t k = 0; k < amp.size(); ++k) {
      amp[k] = rng.normal() / static_cast<double>(k + 1);
      freq[k] = rng.uniform(0.0, 4.0) / cfg.T0;
      phase[k] = rng.uniform(0.0, 2.0 * kPi);
    }
    // fill samples (nodes and cell Gauss points)
    auto fill = [&](ModalVector& v, double t) {
      for (std::size_t k = 0; k < amp.size(); ++k)
        v.raw()[k] = amp[k] * std::cos(freq[k] * t + phase[k]);
    };
    for (std::size_t j = 0; j < cfg.grid.nodes().size(); ++j)
      fill(z.at_node(j), cfg.grid.nodes()[j]);
    for (std::size_t j = 0; j < cfg.grid.cells(); ++j)
      for (int g = 0; g < cfg.grid.gauss_order(); ++g)
        fill(z.at_gauss(j, g), cfg.grid.gauss_time(j, g));
    const double zn =
        z.max_over_samples([&](const ModalVector& v) { return v.h10_norm(p); });
    const double target = c * rng.uniform(0.2, 1.0);
    z.combine(target / zn, 0.0, z);

    KAudit audit;
    apply_K(z, cfg, F, DriveTerm::none(cfg.capacity), &audit);
    min_u_slack = std::min(min_u_slack, cfg.ball_radius - audit.u_du_max);
    min_k_slack = std::min(min_k_slack, c - audit.output_ball_norm);
  }
  res.checks.push_back(check_from_margin(
      "duhamel_ball", min_u_slack, "min C - |u|_{C(J,DU)} = " + fmt(min_u_slack)));
  res.checks.push_back(check_from_margin(
      "k_image_ball", min_k_slack, "min c - |K z| = " + fmt(min_k_slack)));
  for (const auto& c2 : res.checks) res.passed = res.passed && c2.passed;
  return res;
}

SuiteResult suite_convergence(std::uint64_t seed) {
  SuiteResult res{"convergence", seed, true, {}};
  const PhysicalParams p(1.0, 1.0);
  // fixed smooth scenario; the weak-residual tail above n must shrink as n
  // doubles
  std::vector<double> tails;
  for (int n : {4, 8, 16}) {
    SolveOptions opt;
    opt.n = n;
    opt.capacity = 32;
    opt.ball_radius = 6.0;
    opt.forcing_bound = 5.0;
    opt.cells = 60;
    opt.gauss_order = 5;
    opt.fp_tol = 1e-10;
    opt.fp_max_iter = 80;
    opt.k_test = 28;
    const PointwiseForcing F = PointwiseForcing::monomial(3, opt.capacity, p);
    const SolveConfig cfg = build_solve_config(p, F, opt);
    const DriveTerm drive = DriveTerm::constant(cfg.capacity, 1, 3.0);
    const FixedPointState st = fixed_point_solve(cfg, F, drive);
    const auto r = weak_residual(st, cfg, F, drive, opt.k_test);
    double tail = 0.0;
    for (int k = n + 1; k <= opt.k_test; ++k)
      for (double v : r[static_cast<std::size_t>(k - 1)])
        tail = std::max(tail, std::abs(v));
    tails.push_back(tail);
  }
  double min_ratio_slack = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  detail << "tails:";
  for (double t : tails) detail << " " << fmt(t);
  for (std::size_t i = 0; i + 1 < tails.size(); ++i)
    min_ratio_slack = std::min(min_ratio_slack, 1.05 * tails[i] - tails[i + 1]);
  res.checks.push_back(
      check_from_margin("tail_decreasing", min_ratio_slack, detail.str()));
  res.passed = res.checks.front().passed;
  return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"semigroup", "resolvent", "widths",
                                              "invariance", "convergence"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "semigroup") return suite_semigroup(seed);
  if (name == "resolvent") return suite_resolvent(seed);
  if (name == "widths") return suite_widths(seed);
  if (name == "invariance") return suite_invariance(seed);
  if (name == "convergence") return suite_convergence(seed);
  throw ArgumentError("unknown verify suite: " + name);
}

}  // namespace telegraph::verify
