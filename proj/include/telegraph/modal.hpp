#pragma once
// Sine-basis representation on I = (-1, 1) and the associated norms.
//
// Basis: phi_k(x) = sin(k pi x), k >= 1, orthonormal in L2(I).  Everything
// the library touches lives in span{phi_1 .. phi_M}; this is the
// odd-symmetric part of the Dirichlet space on I (see README, "Basis
// restriction").  Mode indices are 1-based throughout to match the math.
//
// Norms (all diagonal in this basis):
//   L2:    |u|^2        = sum a_k^2
//   H10:   |u|^2        = kappa * sum a_k^2 (k pi)^2        (equivalent norm)
//   D(U):  |u|^2        = sum a_k^2 ((k pi)^4 + kappa (k pi)^2)
//   state: |(u,v)|_H^2  = |u|_H10^2 + |v|_L2^2
//          |(u,v)|_DU^2 = |u|_DU^2  + |v|_H10^2

#include <cstddef>
#include <span>
#include <vector>

namespace telegraph {

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalParams {
  double nu;     // damping, > 0
  double kappa;  // stiffness, > 0
  PhysicalParams(double nu_, double kappa_);
};

class ModalVector {
 public:
  ModalVector() = default;
  explicit ModalVector(std::size_t capacity) : coeffs_(capacity, 0.0) {}
  explicit ModalVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  // amp * phi_mode, zero elsewhere
  static ModalVector unit(std::size_t capacity, int mode, double amp = 1.0);

  std::size_t capacity() const { return coeffs_.size(); }

  // 1-based mode accessors
  double coeff(int mode) const { return coeffs_[static_cast<std::size_t>(mode) - 1]; }
  void set_coeff(int mode, double value) {
    coeffs_[static_cast<std::size_t>(mode) - 1] = value;
  }

  std::span<const double> raw() const { return coeffs_; }
  std::span<double> raw() { return coeffs_; }
  const double* data() const { return coeffs_.data(); }
  double* data() { return coeffs_.data(); }

  double l2_norm_sq() const;
  double l2_norm() const;
  double h10_norm_sq(const PhysicalParams& p) const;
  double h10_norm(const PhysicalParams& p) const;
  double du_norm_sq(const PhysicalParams& p) const;
  double du_norm(const PhysicalParams& p) const;

  // sup |u'| <= sum |a_k| k pi  (used for certified constraint bounds)
  double deriv_sup_bound() const;

  // copy with a new capacity; truncates or zero-pads
  ModalVector resized(std::size_t capacity) const;

  ModalVector& operator+=(const ModalVector& other);
  ModalVector& operator-=(const ModalVector& other);
  ModalVector& operator*=(double s);
  friend ModalVector operator+(ModalVector a, const ModalVector& b) { return a += b; }
  friend ModalVector operator-(ModalVector a, const ModalVector& b) { return a -= b; }
  friend ModalVector operator*(double s, ModalVector a) { return a *= s; }

 private:
  std::vector<double> coeffs_;
};

// The pair (u, v) = (u, u_t); both components share one capacity.
struct StateVector {
  ModalVector u;
  ModalVector v;

  StateVector() = default;
  StateVector(ModalVector u_, ModalVector v_);
  static StateVector zero(std::size_t capacity) {
    return StateVector(ModalVector(capacity), ModalVector(capacity));
  }

  std::size_t capacity() const { return u.capacity(); }
  double h_norm_sq(const PhysicalParams& p) const;
  double h_norm(const PhysicalParams& p) const;
  double du_norm_sq(const PhysicalParams& p) const;
  double du_norm(const PhysicalParams& p) const;
};

// Diagonal norm weights, precomputed once per (capacity, params) pair.
// weight index i corresponds to mode i+1.
struct NormWeights {
  std::vector<double> l2;      // 1
  std::vector<double> h10;     // kappa (k pi)^2
  std::vector<double> du;      // (k pi)^4 + kappa (k pi)^2
  NormWeights(std::size_t capacity, const PhysicalParams& p);
};

}  // namespace telegraph
