#include "telegraph/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"
#include "telegraph/parallel.hpp"

namespace telegraph {

namespace {

double mode_stiffness(int n, const PhysicalParams& p) {
  const double npi = static_cast<double>(n) * kPi;
  return p.kappa * npi * npi;
}

}  // namespace

ModeRegime classify_mode(int n, const PhysicalParams& params) {
  if (n < 1) throw ArgumentError("classify_mode: n >= 1 required");
  const double s = mode_stiffness(n, params);
  const double theta = 4.0 * s - params.nu * params.nu;
  const double tol = 1e-12 * std::max(4.0 * s, params.nu * params.nu);
  ModeRegime r{n, theta, RegimeKind::critical, 0.0, 0.0};
  if (theta > tol) {
    r.kind = RegimeKind::underdamped;
    r.omega_n = 0.5 * std::sqrt(theta);
  } else if (theta < -tol) {
    r.kind = RegimeKind::overdamped;
    r.rho_n = 0.5 * std::sqrt(-theta);
  }
  return r;
}

SpectralSummary spectral_abscissa(const PhysicalParams& params, int n_max) {
  if (n_max < 1) throw ArgumentError("spectral_abscissa: n_max >= 1 required");
  SpectralSummary out;
  out.per_mode.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) out.per_mode.push_back(classify_mode(n, params));
  if (out.per_mode.back().theta_n < 0.0)
    throw ArgumentError(
        "spectral_abscissa: n_max too small, theta_{n_max} is still negative");
  if (out.per_mode.front().theta_n >= 0.0) {
    // theta_n is increasing in n, so every mode is covered by the first branch
    out.theta = -params.nu / 2.0;
    out.branch = AbscissaBranch::all_nonnegative;
    return out;
  }
  out.branch = AbscissaBranch::overdamped_max;
  double best = -params.nu / 2.0;
  for (const ModeRegime& r : out.per_mode)
    if (r.theta_n < 0.0) best = std::max(best, -params.nu / 2.0 + r.rho_n);
  out.theta = best;
  return out;
}

ModePropagator damped_oscillator_matrix(double stiffness, double nu, double t) {
  if (t < 0.0) throw ArgumentError("propagator: t >= 0 required");
  if (!(stiffness > 0.0)) throw ArgumentError("propagator: stiffness must be positive");
  const double theta = 4.0 * stiffness - nu * nu;
  const double tol = 1e-12 * std::max(4.0 * stiffness, nu * nu);
  const double env = std::exp(-0.5 * nu * t);
  ModePropagator m{0, t, 0.0, 0.0, 0.0, 0.0, RegimeKind::critical};
  if (theta > tol) {
    m.kind = RegimeKind::underdamped;
    const double w = 0.5 * std::sqrt(theta);
    const double C = env * std::cos(w * t);
    const double S = env * std::sin(w * t);
    const double r = nu / (2.0 * w);
    m.m11 = C + r * S;
    m.m12 = S / w;
    m.m21 = -(stiffness / w) * S;
    m.m22 = C - r * S;
  } else if (theta < -tol) {
    m.kind = RegimeKind::overdamped;
    const double rho = 0.5 * std::sqrt(-theta);
    const double D = std::exp((-0.5 * nu + rho) * t);
    const double E = std::exp((-0.5 * nu - rho) * t);
    const double r = nu / (2.0 * rho);
    m.m11 = 0.5 * ((1.0 + r) * D + (1.0 - r) * E);
    m.m12 = (D - E) / (2.0 * rho);
    m.m21 = -(stiffness / (2.0 * rho)) * (D - E);
    m.m22 = 0.5 * ((1.0 - r) * D + (1.0 + r) * E);
  } else {
    const double sn = t * env;
    m.m11 = env + 0.5 * nu * sn;
    m.m12 = sn;
    m.m21 = -stiffness * sn;
    m.m22 = env - 0.5 * nu * sn;
  }
  return m;
}

ModePropagator propagate_mode(int n, double t, const PhysicalParams& params) {
  if (n < 1) throw ArgumentError("propagate_mode: n >= 1 required");
  ModePropagator m = damped_oscillator_matrix(mode_stiffness(n, params), params.nu, t);
  m.n = n;
  return m;
}

namespace {

// four per-mode entry arrays for a batch application of T(t)
struct PropagatorArrays {
  std::vector<double> m11, m12, m21, m22;
  explicit PropagatorArrays(std::size_t capacity)
      : m11(capacity), m12(capacity), m21(capacity), m22(capacity) {}
};

PropagatorArrays propagator_arrays(std::size_t capacity, double t,
                                   const PhysicalParams& params) {
  PropagatorArrays a(capacity);
  for (std::size_t i = 0; i < capacity; ++i) {
    const ModePropagator m = propagate_mode(static_cast<int>(i + 1), t, params);
    a.m11[i] = m.m11;
    a.m12[i] = m.m12;
    a.m21[i] = m.m21;
    a.m22[i] = m.m22;
  }
  return a;
}

}  // namespace

StateVector apply_semigroup(const StateVector& state, double t,
                            const PhysicalParams& params) {
  if (t < 0.0) throw ArgumentError("apply_semigroup: t >= 0 required");
  const std::size_t M = state.capacity();
  const PropagatorArrays a = propagator_arrays(M, t, params);
  StateVector out = StateVector::zero(M);
  kernels::mode_apply(out.u.data(), out.v.data(), a.m11.data(), a.m12.data(),
                      a.m21.data(), a.m22.data(), state.u.data(), state.v.data(), M);
  return out;
}

double energy_rate(const StateVector& state, const PhysicalParams& params) {
  return -params.nu * state.v.l2_norm_sq();
}

StateVector resolvent_apply(double lambda, const StateVector& rhs,
                            const PhysicalParams& params) {
  if (!(lambda > 0.0))
    throw ArgumentError("resolvent_apply: only real lambda > 0 is in scope");
  const std::size_t M = rhs.capacity();
  StateVector out = StateVector::zero(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double s = mode_stiffness(static_cast<int>(i + 1), params);
    const double w = rhs.u.raw()[i];
    const double z = rhs.v.raw()[i];
    const double u = (z + (lambda + params.nu) * w) / (s + lambda * (lambda + params.nu));
    out.u.raw()[i] = u;
    out.v.raw()[i] = lambda * u - w;
  }
  return out;
}

StateVector shifted_generator_apply(double lambda, const StateVector& f,
                                    const PhysicalParams& params) {
  const std::size_t M = f.capacity();
  StateVector out = StateVector::zero(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double s = mode_stiffness(static_cast<int>(i + 1), params);
    const double u = f.u.raw()[i];
    const double v = f.v.raw()[i];
    out.u.raw()[i] = lambda * u - v;
    out.v.raw()[i] = s * u + (lambda + params.nu) * v;
  }
  return out;
}

namespace {

// spectral norm of a 2x2 matrix
double spectral_norm_2x2(double a, double b, double c, double d) {
  const double fro2 = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
  return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
}

}  // namespace

DuNormBound du_norm_bound(const PhysicalParams& params,
                          const std::vector<double>& t_grid, int n_max) {
  if (n_max < 1 || t_grid.empty())
    throw ArgumentError("du_norm_bound: need n_max >= 1 and a nonempty grid");
  DuNormBound out;
  out.times = t_grid;
  out.profile.assign(t_grid.size(), 0.0);
  // grid points are independent; each writes only its own profile slot
  parallel_for(t_grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ti = begin; ti < end; ++ti) {
      double sup = 0.0;
      for (int n = 1; n <= n_max; ++n) {
        const double npi = static_cast<double>(n) * kPi;
        const double w1 = std::sqrt(npi * npi * npi * npi + params.kappa * npi * npi);
        const double w2 = std::sqrt(params.kappa) * npi;
        const ModePropagator m = propagate_mode(n, t_grid[ti], params);
        sup = std::max(sup, spectral_norm_2x2(m.m11, m.m12 * (w1 / w2),
                                              m.m21 * (w2 / w1), m.m22));
      }
      out.profile[ti] = sup;
    }
  });
  out.omega_raw = *std::max_element(out.profile.begin(), out.profile.end());
  out.omega = 1.05 * out.omega_raw;
  return out;
}

// ---------------------------------------------------------------------------
// Duhamel

namespace {

struct CellScheme {
  double h = -1.0;  // cell width this scheme was built for
  PropagatorArrays full{0};                 // M(h)
  std::vector<PropagatorArrays> node_terms;     // M(h - o_g), g = 0..q-1
  std::vector<double> node_wts;                 // w_g h / 2
  std::vector<PropagatorArrays> carry;          // M(L_g)
  std::vector<std::vector<PropagatorArrays>> sub_terms;  // M(L_g - o_{g,g'})
  std::vector<std::vector<double>> sub_wts;              // w_{g'} L_g / 2
  std::vector<std::vector<std::vector<double>>> sub_lagrange;  // l_{g''}(xi_{g,g'})
};

CellScheme build_cell_scheme(double h, const TimeGrid& grid, std::size_t M,
                             const PhysicalParams& params) {
  const int q = grid.gauss_order();
  const auto& x = grid.ref_points();
  const auto& w = grid.ref_weights();
  CellScheme cs;
  cs.h = h;
  cs.full = propagator_arrays(M, h, params);
  cs.node_terms.reserve(q);
  cs.node_wts.reserve(q);
  cs.carry.reserve(q);
  cs.sub_terms.resize(q);
  cs.sub_wts.resize(q);
  cs.sub_lagrange.resize(q);
  for (int g = 0; g < q; ++g) {
    const double og = 0.5 * h * (x[g] + 1.0);  // offset of Gauss point g
    cs.node_terms.push_back(propagator_arrays(M, h - og, params));
    cs.node_wts.push_back(0.5 * h * w[g]);
    cs.carry.push_back(propagator_arrays(M, og, params));
    const double L = og;  // sub-integral [t_j, t_j + L]
    cs.sub_terms[g].reserve(q);
    cs.sub_wts[g].reserve(q);
    cs.sub_lagrange[g].reserve(q);
    for (int gp = 0; gp < q; ++gp) {
      const double op = 0.5 * L * (x[gp] + 1.0);
      cs.sub_terms[g].push_back(propagator_arrays(M, L - op, params));
      cs.sub_wts[g].push_back(0.5 * L * w[gp]);
      // position of the sub-point in the owning cell's reference coordinates
      const double xi = 2.0 * op / h - 1.0;
      cs.sub_lagrange[g].push_back(grid.lagrange_at(xi));
    }
  }
  return cs;
}

// acc += wt * M * (fu, fv)
void accumulate_term(StateVector& acc, double wt, const PropagatorArrays& m,
                     const double* fu, const double* fv, std::size_t M,
                     bool velocity_only) {
  if (velocity_only) {
    kernels::muladd_scaled(acc.u.data(), wt, m.m12.data(), fv, M);
    kernels::muladd_scaled(acc.v.data(), wt, m.m22.data(), fv, M);
  } else {
    kernels::muladd_scaled(acc.u.data(), wt, m.m11.data(), fu, M);
    kernels::muladd_scaled(acc.u.data(), wt, m.m12.data(), fv, M);
    kernels::muladd_scaled(acc.v.data(), wt, m.m21.data(), fu, M);
    kernels::muladd_scaled(acc.v.data(), wt, m.m22.data(), fv, M);
  }
}

void apply_arrays(StateVector& out, const PropagatorArrays& m, const StateVector& in,
                  std::size_t M) {
  kernels::mode_apply(out.u.data(), out.v.data(), m.m11.data(), m.m12.data(),
                      m.m21.data(), m.m22.data(), in.u.data(), in.v.data(), M);
}

// Shared marching loop.  `cell_source` fills the source at the q Gauss points
// of cell j; `sub_source` yields the source at sub-point (g, g').
template <class CellSource, class SubSource>
StateSeries duhamel_march(const TimeGrid& grid, std::size_t M,
                          const PhysicalParams& params, bool velocity_only,
                          CellSource&& cell_source, SubSource&& sub_source) {
  const int q = grid.gauss_order();
  StateSeries V(grid, M);
  CellScheme cs;  // rebuilt only when the cell width changes (uniform: once)
  StateVector tmp = StateVector::zero(M);
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double h = grid.cell_width(j);
    if (cs.h != h) cs = build_cell_scheme(h, grid, M, params);
    const StateVector& Vj = V.at_node(j);
    std::vector<StateVector> f(static_cast<std::size_t>(q));
    cell_source(j, f);
    // interior samples
    for (int g = 0; g < q; ++g) {
      StateVector& Vint = V.at_gauss(j, g);
      apply_arrays(Vint, cs.carry[g], Vj, M);
      for (int gp = 0; gp < q; ++gp) {
        sub_source(j, g, gp, f, tmp);
        accumulate_term(Vint, cs.sub_wts[g][gp], cs.sub_terms[g][gp], tmp.u.data(),
                        tmp.v.data(), M, velocity_only);
      }
    }
    // node update
    StateVector& Vnext = V.at_node(j + 1);
    apply_arrays(Vnext, cs.full, Vj, M);
    for (int g = 0; g < q; ++g)
      accumulate_term(Vnext, cs.node_wts[g], cs.node_terms[g],
                      f[static_cast<std::size_t>(g)].u.data(),
                      f[static_cast<std::size_t>(g)].v.data(), M, velocity_only);
  }
  return V;
}

}  // namespace

StateSeries duhamel(const std::function<StateVector(double)>& f1, const TimeGrid& grid,
                    std::size_t capacity, const PhysicalParams& params) {
  const int q = grid.gauss_order();
  const auto& x = grid.ref_points();
  auto cell_source = [&](std::size_t j, std::vector<StateVector>& f) {
    for (int g = 0; g < q; ++g) {
      f[static_cast<std::size_t>(g)] = f1(grid.gauss_time(j, g));
      if (f[static_cast<std::size_t>(g)].capacity() != capacity)
        throw ArgumentError("duhamel: source capacity mismatch");
    }
  };
  auto sub_source = [&](std::size_t j, int g, int gp, const std::vector<StateVector>&,
                        StateVector& out) {
    const double h = grid.cell_width(j);
    const double L = 0.5 * h * (x[g] + 1.0);
    const double t = grid.nodes()[j] + 0.5 * L * (x[gp] + 1.0);
    out = f1(t);
  };
  return duhamel_march(grid, capacity, params, /*velocity_only=*/false, cell_source,
                       sub_source);
}

StateSeries duhamel_velocity(const ModalSeries& f, const PhysicalParams& params) {
  const TimeGrid& grid = f.grid();
  const std::size_t M = f.capacity();
  const int q = grid.gauss_order();
  // CellScheme interpolation coefficients are recomputed inside the march;
  // here the sub-point values come from the cell's own Gauss samples.
  auto cell_source = [&](std::size_t j, std::vector<StateVector>& out) {
    for (int g = 0; g < q; ++g) {
      out[static_cast<std::size_t>(g)] = StateVector::zero(M);
      out[static_cast<std::size_t>(g)].v = f.at_gauss(j, g);
    }
  };
  const auto& x = grid.ref_points();
  auto sub_source = [&](std::size_t j, int g, int gp, const std::vector<StateVector>& fc,
                        StateVector& out) {
    // Lagrange interpolation at the sub-point through the cell Gauss samples
    const double h = grid.cell_width(j);
    const double L = 0.5 * h * (x[g] + 1.0);
    const double op = 0.5 * L * (x[gp] + 1.0);
    const double xi = 2.0 * op / h - 1.0;
    const std::vector<double> l = grid.lagrange_at(xi);
    std::fill(out.v.raw().begin(), out.v.raw().end(), 0.0);
    for (int gi = 0; gi < q; ++gi)
      kernels::axpy(l[gi], fc[static_cast<std::size_t>(gi)].v.data(), out.v.data(), M);
  };
  return duhamel_march(grid, M, params, /*velocity_only=*/true, cell_source, sub_source);
}

}  // namespace telegraph
