#include "telegraph/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"

namespace telegraph {

QuadratureGrid QuadratureGrid::gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre: need at least one node");
  QuadratureGrid g;
  g.order = n;
  g.nodes.resize(n);
  g.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-based initial guess; symmetric
  // pairs are filled together.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

QuadratureGrid QuadratureGrid::for_sine_frequency(int max_mode) {
  if (max_mode < 1) throw ArgumentError("for_sine_frequency: max_mode >= 1 required");
  // ~one node per half-wavelength of the fastest component, plus a Bessel
  // transition margin and fixed slack
  const double omega = static_cast<double>(max_mode) * kPi;
  const int n = static_cast<int>(std::ceil(0.5 * (omega + 10.0 * std::cbrt(omega)))) + 16;
  return gauss_legendre(n);
}

QuadratureGrid QuadratureGrid::for_capacity(std::size_t capacity) {
  if (capacity < 1) throw ArgumentError("for_capacity: capacity >= 1 required");
  QuadratureGrid g = for_sine_frequency(static_cast<int>(4 * capacity));
  const double dev = g.gram_deviation(2 * capacity);
  if (dev > 1e-12)
    throw ConfigError("quadrature verification failed: Gram deviation " +
                      std::to_string(dev) + " for capacity " + std::to_string(capacity));
  return g;
}

double QuadratureGrid::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (int i = 0; i < order; ++i) s += weights[i] * f(nodes[i]);
  return s;
}

double QuadratureGrid::gram_deviation(std::size_t m) const {
  const std::size_t q = nodes.size();
  // sample the first m modes once
  std::vector<double> rows(m * q);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < q; ++i)
      rows[k * q + i] = std::sin(static_cast<double>(k + 1) * kPi * nodes[i]);
  double worst = 0.0;
  std::vector<double> wrow(q);
  for (std::size_t j = 0; j < m; ++j) {
    kernels::mul(wrow.data(), weights.data(), rows.data() + j * q, q);
    for (std::size_t k = j; k < m; ++k) {
      const double g = kernels::dot(wrow.data(), rows.data() + k * q, q);
      const double dev = (j == k) ? std::abs(g - 1.0) : std::abs(g);
      worst = std::max(worst, dev);
    }
  }
  return worst;
}

SineBasis::SineBasis(std::size_t capacity, QuadratureGrid grid)
    : capacity_(capacity), grid_(std::move(grid)) {
  const std::size_t q = grid_.nodes.size();
  sin_rows_.resize(capacity_ * q);
  cos_rows_.resize(capacity_ * q);
  sin_cols_.resize(capacity_ * q);
  for (std::size_t k = 0; k < capacity_; ++k) {
    const double kpi = static_cast<double>(k + 1) * kPi;
    for (std::size_t i = 0; i < q; ++i) {
      const double s = std::sin(kpi * grid_.nodes[i]);
      sin_rows_[k * q + i] = s;
      cos_rows_[k * q + i] = kpi * std::cos(kpi * grid_.nodes[i]);
      sin_cols_[i * capacity_ + k] = s;
    }
  }
}

std::vector<double> SineBasis::synth(const ModalVector& u) const {
  if (u.capacity() > capacity_)
    throw ArgumentError("SineBasis::synth: vector exceeds basis capacity");
  const std::size_t q = grid_.nodes.size();
  std::vector<double> out(q);
  for (std::size_t i = 0; i < q; ++i)
    out[i] = kernels::dot(sin_cols_.data() + i * capacity_, u.data(), u.capacity());
  return out;
}

std::vector<double> SineBasis::synth_deriv(const ModalVector& u) const {
  if (u.capacity() > capacity_)
    throw ArgumentError("SineBasis::synth_deriv: vector exceeds basis capacity");
  const std::size_t q = grid_.nodes.size();
  std::vector<double> out(q, 0.0);
  for (std::size_t k = 0; k < u.capacity(); ++k)
    kernels::axpy(u.raw()[k], cos_rows_.data() + k * q, out.data(), q);
  return out;
}

ModalVector SineBasis::analyze(std::span<const double> node_values, std::size_t m) const {
  if (m > capacity_) throw ArgumentError("SineBasis::analyze: m exceeds capacity");
  const std::size_t q = grid_.nodes.size();
  if (node_values.size() != q)
    throw ArgumentError("SineBasis::analyze: node value count mismatch");
  ModalVector out(m);
  for (std::size_t k = 0; k < m; ++k)
    out.raw()[k] = kernels::dot3(grid_.weights.data(), node_values.data(),
                                 sin_rows_.data() + k * q, q);
  return out;
}

double SineBasis::inner_product(std::span<const double> node_values, int mode) const {
  if (mode < 1 || static_cast<std::size_t>(mode) > capacity_)
    throw ArgumentError("SineBasis::inner_product: mode out of range");
  const std::size_t q = grid_.nodes.size();
  return kernels::dot3(grid_.weights.data(), node_values.data(),
                       sin_rows_.data() + static_cast<std::size_t>(mode - 1) * q, q);
}

}  // namespace telegraph
