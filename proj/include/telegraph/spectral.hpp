#pragma once
// Projections Q_n / P_n and the L2 n-width of the H10 ball.

#include <functional>

#include "telegraph/modal.hpp"
#include "telegraph/quadrature.hpp"
#include "telegraph/timegrid.hpp"

namespace telegraph {

// Q_n u = sum_{k <= n} (u, phi_k)_{L2} phi_k.  Output keeps the input
// capacity; coefficients above n are zero.
ModalVector project_Q(const ModalVector& u, int n);

// Same, ingesting a sampled function through quadrature inner products.
ModalVector project_Q(const std::function<double(double)>& u, int n,
                      const SineBasis& basis);

// P_n: Q_n applied pointwise in t.
ModalSeries project_P(const ModalSeries& traj, int n);

// d_n = b / ((n+1) pi sqrt(kappa)), the L2 n-width of the H10 ball of
// radius b.
double n_width(double b, int n, const PhysicalParams& params);

struct ProjectionErrorReport {
  double error;        // |Q_n h - h|_{L2}
  double width_bound;  // n_width(b, n)
  bool within_bound;   // error <= width_bound + 1e-12
};

// Checks |Q_n h - h|_{L2} <= d_n for |h|_{H10} <= b (throws if h is outside
// the ball).
ProjectionErrorReport projection_error_bound_check(const ModalVector& h, double b,
                                                   int n, const PhysicalParams& params);

}  // namespace telegraph
