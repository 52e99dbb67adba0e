#pragma once
// Data-parallel inner-loop kernels with runtime backend selection.
//
// Every kernel has a portable scalar reference implementation and, when the
// binary is built on x86-64, an AVX2+FMA variant selected once at startup
// from cpuid.  Selection can be overridden with the environment variable
// TELEGRAPH_KERNELS=scalar|avx2 or programmatically via force_backend().
//
// Reductions use a fixed summation order inside each backend (the AVX2 dot
// folds its four lanes in lane order), so a given backend is reproducible
// bit-for-bit run to run.  The two backends are equivalence-tested against
// each other to ~1e-13 relative in tests/unit_kernels.cpp.

#include <cstddef>
#include <string>

namespace telegraph::kernels {

struct Backend {
  const char* name;

  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum w[i] * x[i] * y[i]
  double (*dot3)(const double* w, const double* x, const double* y, std::size_t n);
  // sum w[i] * x[i]^2
  double (*wsumsq)(const double* w, const double* x, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = a * x[i] + b * y[i]   (out may alias x or y)
  void (*combine2)(double* out, double a, const double* x, double b, const double* y,
                   std::size_t n);
  // out[i] = x[i] * y[i]
  void (*mul)(double* out, const double* x, const double* y, std::size_t n);
  // acc[i] += c * a[i] * b[i]
  void (*muladd_scaled)(double* acc, double c, const double* a, const double* b,
                        std::size_t n);
  // Per-index 2x2 matrix action:
  //   ou[i] = m11[i]*u[i] + m12[i]*v[i]
  //   ov[i] = m21[i]*u[i] + m22[i]*v[i]
  // (ou, ov) may alias (u, v); each index is read before it is written.
  void (*mode_apply)(double* ou, double* ov, const double* m11, const double* m12,
                     const double* m21, const double* m22, const double* u,
                     const double* v, std::size_t n);
};

const Backend& scalar_backend();
bool avx2_available();
const Backend& avx2_backend();  // valid only when avx2_available()

// Active backend; resolved once (cpuid + TELEGRAPH_KERNELS) on first use.
const Backend& active();
// "scalar", "avx2" or "auto".  Throws ConfigError for unknown/unsupported.
void force_backend(const std::string& name);

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  return active().dot3(w, x, y, n);
}
inline double wsumsq(const double* w, const double* x, std::size_t n) {
  return active().wsumsq(w, x, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void combine2(double* out, double a, const double* x, double b, const double* y,
                     std::size_t n) {
  active().combine2(out, a, x, b, y, n);
}
inline void mul(double* out, const double* x, const double* y, std::size_t n) {
  active().mul(out, x, y, n);
}
inline void muladd_scaled(double* acc, double c, const double* a, const double* b,
                          std::size_t n) {
  active().muladd_scaled(acc, c, a, b, n);
}
inline void mode_apply(double* ou, double* ov, const double* m11, const double* m12,
                       const double* m21, const double* m22, const double* u,
                       const double* v, std::size_t n) {
  active().mode_apply(ou, ov, m11, m12, m21, m22, u, v, n);
}

}  // namespace telegraph::kernels
