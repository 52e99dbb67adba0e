// Scalar reference kernels.  These define the semantics the SIMD variants
// are tested against; keep them as plain sequential loops.

#include "telegraph/kernels.hpp"

namespace telegraph::kernels {

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double s_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double s_wsumsq(const double* w, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_combine2(double* out, double a, const double* x, double b, const double* y,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void s_mul(double* out, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void s_muladd_scaled(double* acc, double c, const double* a, const double* b,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += c * a[i] * b[i];
}

void s_mode_apply(double* ou, double* ov, const double* m11, const double* m12,
                  const double* m21, const double* m22, const double* u,
                  const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    const double vi = v[i];
    ou[i] = m11[i] * ui + m12[i] * vi;
    ov[i] = m21[i] * ui + m22[i] * vi;
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar", s_dot,      s_dot3, s_wsumsq,        s_axpy,
                         s_combine2, s_mul, s_muladd_scaled, s_mode_apply};
  return b;
}

}  // namespace telegraph::kernels
