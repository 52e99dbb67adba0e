#pragma once
// Gauss-Legendre quadrature on (-1, 1) and cached sine sampling matrices.
//
// The grids exist to evaluate inner products (f, phi_k)_{L2} for nonlinear
// forcings and sampled-function ingestion.  A grid constructed through
// for_capacity(M) is verified, at construction, to integrate every product
// phi_j phi_k with j, k <= 2M to within 1e-12 (diagonal entries relative,
// off-diagonal absolute); construction throws if the check fails.
//
// Node-count note: products of modes j, k <= 2M oscillate at frequencies up
// to 4 M pi, and Gauss-Legendre needs roughly one node per half-wavelength
// plus slack before its error drops below roundoff.  for_capacity sizes the
// rule accordingly (~2 pi M nodes), which is more than the polynomial-degree
// heuristic 2M + 16 would suggest; the verification step is what makes the
// choice trustworthy rather than folkloric.

#include <cstddef>
#include <functional>
#include <vector>

#include "telegraph/modal.hpp"

namespace telegraph {

struct QuadratureGrid {
  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // positive
  int order = 0;                // node count

  static QuadratureGrid gauss_legendre(int n);

  // Verified for products phi_j phi_k, j, k <= 2*capacity.
  static QuadratureGrid for_capacity(std::size_t capacity);

  // Verified for trig frequencies up to max_mode * pi (i.e. integrands built
  // from sin/cos(m pi x) with m <= max_mode).  Used by nonlinear forcings,
  // where max_mode = (p + 1) * M for a degree-p monomial.
  static QuadratureGrid for_sine_frequency(int max_mode);

  double integrate(const std::function<double(double)>& f) const;

  // max deviation of the quadrature Gram matrix of {phi_1..phi_m} from the
  // identity (diagonal relative, off-diagonal absolute)
  double gram_deviation(std::size_t m) const;
};

// Precomputed sin/cos sampling matrices for one (capacity, grid) pair.
// synth = coefficient -> node values; analyze = node values -> coefficients.
class SineBasis {
 public:
  SineBasis(std::size_t capacity, QuadratureGrid grid);

  std::size_t capacity() const { return capacity_; }
  const QuadratureGrid& grid() const { return grid_; }

  // u(x_q) = sum_k a_k sin(k pi x_q)
  std::vector<double> synth(const ModalVector& u) const;
  // u'(x_q) = sum_k a_k k pi cos(k pi x_q)
  std::vector<double> synth_deriv(const ModalVector& u) const;
  // a_k = sum_q w_q f(x_q) sin(k pi x_q), k = 1..m
  ModalVector analyze(std::span<const double> node_values, std::size_t m) const;

  // (f, phi_k) for a single mode
  double inner_product(std::span<const double> node_values, int mode) const;

 private:
  std::size_t capacity_;
  QuadratureGrid grid_;
  std::vector<double> sin_rows_;  // [mode][node], mode-major
  std::vector<double> cos_rows_;  // [mode][node], scaled by k pi
  std::vector<double> sin_cols_;  // [node][mode], node-major
};

}  // namespace telegraph
