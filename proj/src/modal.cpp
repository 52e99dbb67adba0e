#include "telegraph/modal.hpp"

#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/kernels.hpp"

namespace telegraph {

PhysicalParams::PhysicalParams(double nu_, double kappa_) : nu(nu_), kappa(kappa_) {
  if (!(nu > 0.0) || !(kappa > 0.0))
    throw ArgumentError("PhysicalParams: nu and kappa must be positive");
}

ModalVector ModalVector::unit(std::size_t capacity, int mode, double amp) {
  if (mode < 1 || static_cast<std::size_t>(mode) > capacity)
    throw ArgumentError("ModalVector::unit: mode out of range");
  ModalVector m(capacity);
  m.set_coeff(mode, amp);
  return m;
}

double ModalVector::l2_norm_sq() const {
  return kernels::dot(data(), data(), capacity());
}

double ModalVector::l2_norm() const { return std::sqrt(l2_norm_sq()); }

double ModalVector::h10_norm_sq(const PhysicalParams& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double kpi = static_cast<double>(i + 1) * kPi;
    s += coeffs_[i] * coeffs_[i] * kpi * kpi;
  }
  return p.kappa * s;
}

double ModalVector::h10_norm(const PhysicalParams& p) const {
  return std::sqrt(h10_norm_sq(p));
}

double ModalVector::du_norm_sq(const PhysicalParams& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double kpi2 = static_cast<double>(i + 1) * kPi * (static_cast<double>(i + 1) * kPi);
    s += coeffs_[i] * coeffs_[i] * (kpi2 * kpi2 + p.kappa * kpi2);
  }
  return s;
}

double ModalVector::du_norm(const PhysicalParams& p) const {
  return std::sqrt(du_norm_sq(p));
}

double ModalVector::deriv_sup_bound() const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    s += std::abs(coeffs_[i]) * static_cast<double>(i + 1) * kPi;
  return s;
}

ModalVector ModalVector::resized(std::size_t capacity) const {
  ModalVector out(capacity);
  const std::size_t m = capacity < coeffs_.size() ? capacity : coeffs_.size();
  for (std::size_t i = 0; i < m; ++i) out.coeffs_[i] = coeffs_[i];
  return out;
}

ModalVector& ModalVector::operator+=(const ModalVector& other) {
  if (other.capacity() != capacity())
    throw ArgumentError("ModalVector: capacity mismatch in +=");
  kernels::axpy(1.0, other.data(), data(), capacity());
  return *this;
}

ModalVector& ModalVector::operator-=(const ModalVector& other) {
  if (other.capacity() != capacity())
    throw ArgumentError("ModalVector: capacity mismatch in -=");
  kernels::axpy(-1.0, other.data(), data(), capacity());
  return *this;
}

ModalVector& ModalVector::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

StateVector::StateVector(ModalVector u_, ModalVector v_)
    : u(std::move(u_)), v(std::move(v_)) {
  if (u.capacity() != v.capacity())
    throw ArgumentError("StateVector: u and v must share one capacity");
}

double StateVector::h_norm_sq(const PhysicalParams& p) const {
  return u.h10_norm_sq(p) + v.l2_norm_sq();
}

double StateVector::h_norm(const PhysicalParams& p) const {
  return std::sqrt(h_norm_sq(p));
}

double StateVector::du_norm_sq(const PhysicalParams& p) const {
  return u.du_norm_sq(p) + v.h10_norm_sq(p);
}

double StateVector::du_norm(const PhysicalParams& p) const {
  return std::sqrt(du_norm_sq(p));
}

NormWeights::NormWeights(std::size_t capacity, const PhysicalParams& p)
    : l2(capacity, 1.0), h10(capacity), du(capacity) {
  for (std::size_t i = 0; i < capacity; ++i) {
    const double kpi = static_cast<double>(i + 1) * kPi;
    h10[i] = p.kappa * kpi * kpi;
    du[i] = kpi * kpi * kpi * kpi + p.kappa * kpi * kpi;
  }
}

}  // namespace telegraph
