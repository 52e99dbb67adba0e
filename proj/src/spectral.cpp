#include "telegraph/spectral.hpp"

#include <cmath>

#include "telegraph/errors.hpp"

namespace telegraph {

ModalVector project_Q(const ModalVector& u, int n) {
  if (n < 1) throw ArgumentError("project_Q: n >= 1 required");
  if (static_cast<std::size_t>(n) > u.capacity())
    throw ArgumentError("project_Q: n exceeds capacity");
  ModalVector out(u.capacity());
  for (int k = 1; k <= n; ++k) out.set_coeff(k, u.coeff(k));
  return out;
}

ModalVector project_Q(const std::function<double(double)>& u, int n,
                      const SineBasis& basis) {
  if (n < 1) throw ArgumentError("project_Q: n >= 1 required");
  if (static_cast<std::size_t>(n) > basis.capacity())
    throw ArgumentError("project_Q: n exceeds basis capacity");
  const auto& g = basis.grid();
  std::vector<double> vals(g.nodes.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = u(g.nodes[i]);
  ModalVector coeffs = basis.analyze(vals, static_cast<std::size_t>(n));
  return coeffs.resized(basis.capacity());
}

ModalSeries project_P(const ModalSeries& traj, int n) {
  if (traj.capacity() == 0) throw ArgumentError("project_P: empty trajectory");
  if (n < 1 || static_cast<std::size_t>(n) > traj.capacity())
    throw ArgumentError("project_P: n out of range for trajectory capacity");
  ModalSeries out = traj;
  out.transform([n](ModalVector& v) {
    for (std::size_t k = static_cast<std::size_t>(n); k < v.capacity(); ++k)
      v.raw()[k] = 0.0;
  });
  return out;
}

double n_width(double b, int n, const PhysicalParams& params) {
  if (!(b > 0.0) || n < 1) throw ArgumentError("n_width: b > 0 and n >= 1 required");
  return b / (static_cast<double>(n + 1) * kPi * std::sqrt(params.kappa));
}

ProjectionErrorReport projection_error_bound_check(const ModalVector& h, double b,
                                                   int n, const PhysicalParams& params) {
  const double hn = h.h10_norm(params);
  if (hn > b * (1.0 + 1e-12))
    throw ArgumentError("projection_error_bound_check: |h|_{H10} exceeds b");
  const ModalVector qh = project_Q(h, n);
  const double err = (qh - h).l2_norm();
  const double width = n_width(b, n, params);
  return {err, width, err <= width + 1e-12};
}

}  // namespace telegraph
