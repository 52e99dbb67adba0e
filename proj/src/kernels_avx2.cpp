// AVX2+FMA kernel variants.  Compiled with -mavx2 -mfma; only reachable when
// cpuid reports both features (see kernels.cpp).
//
// The dot-style reductions keep four independent lane accumulators and fold
// them in lane order at the end, so the result is deterministic for this
// backend even though it differs from the scalar sum in the last bits.

#include "telegraph/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace telegraph::kernels {

namespace {

inline double hsum_ordered(__m256d acc, double tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum_ordered(acc, tail);
}

double v_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * x[i] * y[i];
  return hsum_ordered(acc, tail);
}

double v_wsumsq(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), xv), xv, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * x[i] * x[i];
  return hsum_ordered(acc, tail);
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i,
                     _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_combine2(double* out, double a, const double* x, double b, const double* y,
                std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), t));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void v_mul(double* out, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void v_muladd_scaled(double* acc, double c, const double* a, const double* b,
                     std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(cv, ab, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] += c * a[i] * b[i];
}

void v_mode_apply(double* ou, double* ov, const double* m11, const double* m12,
                  const double* m21, const double* m22, const double* u,
                  const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d uv = _mm256_loadu_pd(u + i);
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d nu =
        _mm256_fmadd_pd(_mm256_loadu_pd(m11 + i), uv,
                        _mm256_mul_pd(_mm256_loadu_pd(m12 + i), vv));
    const __m256d nv =
        _mm256_fmadd_pd(_mm256_loadu_pd(m21 + i), uv,
                        _mm256_mul_pd(_mm256_loadu_pd(m22 + i), vv));
    _mm256_storeu_pd(ou + i, nu);
    _mm256_storeu_pd(ov + i, nv);
  }
  for (; i < n; ++i) {
    const double ui = u[i];
    const double vi = v[i];
    ou[i] = m11[i] * ui + m12[i] * vi;
    ov[i] = m21[i] * ui + m22[i] * vi;
  }
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend b{"avx2", v_dot,      v_dot3, v_wsumsq,        v_axpy,
                         v_combine2, v_mul, v_muladd_scaled, v_mode_apply};
  return b;
}

}  // namespace telegraph::kernels

#endif  // x86_64
