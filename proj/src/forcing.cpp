#include "telegraph/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/parallel.hpp"

namespace telegraph {

double du_ball_sup_bound(double ball_radius, const PhysicalParams& params) {
  return ball_radius / std::sqrt(kPi * kPi + params.kappa);
}

PointwiseForcing::PointwiseForcing(std::string name, std::function<double(double)> f,
                                   std::function<double(double)> fprime_sup,
                                   int freq_multiplier, std::size_t capacity,
                                   const PhysicalParams& params, int max_quad_nodes)
    : name_(std::move(name)),
      f_(std::move(f)),
      fprime_sup_(std::move(fprime_sup)),
      capacity_(capacity),
      params_(params) {
  if (capacity_ < 1) throw ArgumentError("PointwiseForcing: capacity >= 1 required");
  if (std::abs(f_(0.0)) > 1e-14)
    throw ArgumentError("PointwiseForcing: f(0) = 0 is required");
  const long needed = static_cast<long>(freq_multiplier) * static_cast<long>(capacity_);
  QuadratureGrid probe = QuadratureGrid::for_sine_frequency(static_cast<int>(
      std::min<long>(needed, static_cast<long>(max_quad_nodes) * 4)));
  if (probe.order > max_quad_nodes)
    throw ConfigError("PointwiseForcing: dealiased quadrature for " + name_ +
                      " needs " + std::to_string(probe.order) +
                      " nodes, above the configured cap of " +
                      std::to_string(max_quad_nodes));
  basis_ = std::make_shared<SineBasis>(capacity_, std::move(probe));
}

PointwiseForcing PointwiseForcing::monomial(int power, std::size_t capacity,
                                            const PhysicalParams& params) {
  if (power < 1) throw ArgumentError("monomial forcing: power >= 1 required");
  auto f = [power](double s) { return std::pow(s, power); };
  auto fp = [power](double r) {
    return static_cast<double>(power) * std::pow(r, power - 1);
  };
  return PointwiseForcing("monomial(" + std::to_string(power) + ")", f, fp, power + 1,
                          capacity, params);
}

PointwiseForcing PointwiseForcing::sinh_forcing(std::size_t capacity,
                                                const PhysicalParams& params) {
  // sinh is entire, so no finite grid dealiases it exactly; frequency
  // headroom of 8M keeps the truncation error spectrally small for the
  // amplitudes that fit any reasonable D(U) ball.
  return PointwiseForcing(
      "sinh", [](double s) { return std::sinh(s); },
      [](double r) { return std::cosh(r); }, 8, capacity, params);
}

ModalVector PointwiseForcing::evaluate(const ModalVector& u) const {
  if (u.capacity() > capacity_)
    throw ArgumentError("PointwiseForcing: input exceeds operator capacity");
  std::vector<double> vals = basis_->synth(u.resized(capacity_));
  for (auto& v : vals) v = f_(v);
  return basis_->analyze(vals, capacity_);
}

double PointwiseForcing::local_bound(double ball_radius) const {
  const double rho = du_ball_sup_bound(ball_radius, params_);
  const double h10_of_ball =
      std::sqrt(params_.kappa / (kPi * kPi + params_.kappa)) * ball_radius;
  return fprime_sup_(rho) * h10_of_ball;
}

BvpCompositionForcing::BvpCompositionForcing(std::size_t capacity,
                                             const PhysicalParams& params)
    : capacity_(capacity), params_(params) {
  if (capacity_ < 1) throw ArgumentError("BvpCompositionForcing: capacity >= 1");
}

ModalVector BvpCompositionForcing::evaluate(const ModalVector& u) const {
  if (u.capacity() > capacity_)
    throw ArgumentError("BvpCompositionForcing: input exceeds operator capacity");
  ModalVector out(capacity_);
  for (std::size_t i = 0; i < u.capacity(); ++i) {
    const double kpi = static_cast<double>(i + 1) * kPi;
    out.raw()[i] = u.raw()[i] / (kpi * kpi + 1.0);
  }
  return out;
}

double BvpCompositionForcing::local_bound(double ball_radius) const {
  const double h10_of_ball =
      std::sqrt(params_.kappa / (kPi * kPi + params_.kappa)) * ball_radius;
  return h10_of_ball / (kPi * kPi + 1.0);
}

AffineConstraint::AffineConstraint(double offset, std::size_t default_samples)
    : offset_(offset), default_samples_(default_samples) {
  if (!(offset > 0.0))
    throw ArgumentError("AffineConstraint: inf G(0) = offset must be positive");
  if (default_samples_ < 2) throw ArgumentError("AffineConstraint: samples >= 2");
}

ConstraintEvaluation AffineConstraint::evaluate_inf(const ModalVector& u) const {
  return evaluate_inf(u, default_samples_);
}

ConstraintEvaluation AffineConstraint::evaluate_inf(const ModalVector& u,
                                                    std::size_t samples) const {
  const double h = 2.0 / static_cast<double>(samples);
  const std::size_t M = u.capacity();
  // midpoint sampling; chunk minima are exact, so combining them after the
  // join gives the same result for any thread count
  const std::size_t chunks =
      std::min<std::size_t>(std::max(1, max_threads()), samples);
  std::vector<double> chunk_min(chunks, offset_);  // endpoints: u(+-1) = 0
  std::vector<double> chunk_arg(chunks, -1.0);
  parallel_for(chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      const std::size_t i0 = samples * c / chunks;
      const std::size_t i1 = samples * (c + 1) / chunks;
      for (std::size_t i = i0; i < i1; ++i) {
        const double x = -1.0 + (static_cast<double>(i) + 0.5) * h;
        double ux = 0.0;
        for (std::size_t k = 0; k < M; ++k)
          ux += u.raw()[k] * std::sin(static_cast<double>(k + 1) * kPi * x);
        const double g = offset_ + ux;
        if (g < chunk_min[c]) {
          chunk_min[c] = g;
          chunk_arg[c] = x;
        }
      }
    }
  });
  double min_val = offset_;
  double argmin = -1.0;
  for (std::size_t c = 0; c < chunks; ++c)
    if (chunk_min[c] < min_val) {
      min_val = chunk_min[c];
      argmin = chunk_arg[c];
    }
  return {min_val, min_val - h * u.deriv_sup_bound(), argmin};
}

DriveTerm DriveTerm::none(std::size_t capacity) {
  DriveTerm d;
  d.capacity_ = capacity;
  return d;
}

DriveTerm DriveTerm::constant(std::size_t capacity, int mode, double amplitude) {
  if (mode < 1 || static_cast<std::size_t>(mode) > capacity)
    throw ArgumentError("DriveTerm: mode out of range");
  DriveTerm d;
  d.kind_ = Kind::constant;
  d.capacity_ = capacity;
  d.mode_ = mode;
  d.amplitude_ = amplitude;
  return d;
}

DriveTerm DriveTerm::cosine(std::size_t capacity, int mode, double amplitude,
                            double omega) {
  DriveTerm d = constant(capacity, mode, amplitude);
  d.kind_ = Kind::cosine;
  d.omega_ = omega;
  return d;
}

ModalVector DriveTerm::evaluate(double t) const {
  ModalVector g(capacity_);
  switch (kind_) {
    case Kind::none:
      break;
    case Kind::constant:
      g.set_coeff(mode_, amplitude_);
      break;
    case Kind::cosine:
      g.set_coeff(mode_, amplitude_ * std::cos(omega_ * t));
      break;
  }
  return g;
}

std::string DriveTerm::name() const {
  switch (kind_) {
    case Kind::none: return "none";
    case Kind::constant: return "constant";
    case Kind::cosine: return "cosine";
  }
  return "none";
}

double DriveTerm::h10_sup(const PhysicalParams& params) const {
  if (kind_ == Kind::none) return 0.0;
  return std::abs(amplitude_) * std::sqrt(params.kappa) * static_cast<double>(mode_) *
         kPi;
}

ClosureReport closure_property_check(const ForcingOperator& F,
                                     const std::vector<ModalVector>& u_seq,
                                     const PhysicalParams& params) {
  ClosureReport rep{false, {}, 0.0, false};
  if (u_seq.size() < 2) return rep;
  // convergence heuristic: H10 increments must shrink toward the tail
  const std::size_t n = u_seq.size();
  const double early = (u_seq[1] - u_seq[0]).h10_norm(params);
  const double late = (u_seq[n - 1] - u_seq[n - 2]).h10_norm(params);
  if (late > 0.5 * early && late > 1e-12) return rep;  // not convergent enough
  rep.applicable = true;
  const ModalVector f_limit = F.evaluate(u_seq.back());
  rep.l2_errors.reserve(n);
  for (const auto& u : u_seq) {
    const ModalVector fu = F.evaluate(u);
    rep.l2_errors.push_back((fu - f_limit).l2_norm());
    rep.h10_bound = std::max(rep.h10_bound, fu.h10_norm(params));
  }
  rep.converged = rep.l2_errors.back() <= 1e-10 + 1e-6 * rep.l2_errors.front();
  return rep;
}

}  // namespace telegraph
