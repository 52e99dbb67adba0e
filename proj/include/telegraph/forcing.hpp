#pragma once
// Forcing operators F : D(U) -> H10 with F(0) = 0, the constraint operator
// G : D(U) -> C(I-bar), and the explicit drive term used to generate
// nontrivial trajectories.
//
// Local bounds use the embedding  sup_I |u| <= |u|_{H10} / sqrt(kappa)
// together with  |u|_{H10} <= sqrt(kappa / (pi^2 + kappa)) |u|_{D(U)},  so
// |u|_{D(U)} <= C implies sup |u| <= rho(C) = C / sqrt(pi^2 + kappa).  For a
// pointwise forcing f this gives
//   |F(u)|_{H10} <= sup_{|s| <= rho(C)} |f'(s)| * sqrt(kappa/(pi^2+kappa)) * C.

#include <functional>
#include <memory>
#include <string>

#include "telegraph/modal.hpp"
#include "telegraph/quadrature.hpp"

namespace telegraph {

class ForcingOperator {
 public:
  virtual ~ForcingOperator() = default;

  // modal representation of F(u); output capacity equals capacity()
  virtual ModalVector evaluate(const ModalVector& u) const = 0;

  // c(C): |F(u)|_{H10} <= c whenever |u|_{D(U)} <= C
  virtual double local_bound(double ball_radius) const = 0;

  virtual std::size_t capacity() const = 0;
  virtual std::string name() const = 0;
};

// sup |u| bound on the D(U)-ball of radius C (embedding constant above)
double du_ball_sup_bound(double ball_radius, const PhysicalParams& params);

// Pointwise composition F(u)(x) = f(u(x)), evaluated pseudo-spectrally:
// synthesize u on a quadrature grid sized for the nonlinearity degree, apply
// f at the nodes, project back onto modes 1..M.  The grid is chosen so that
// a degree-p monomial of an M-mode input is projected exactly to roundoff
// (frequency content (p+1) M); non-polynomial f converges spectrally.
class PointwiseForcing : public ForcingOperator {
 public:
  // f(0) = 0 is required; fprime_sup(r) must bound sup_{|s|<=r} |f'(s)|.
  PointwiseForcing(std::string name, std::function<double(double)> f,
                   std::function<double(double)> fprime_sup, int freq_multiplier,
                   std::size_t capacity, const PhysicalParams& params,
                   int max_quad_nodes = 20000);

  static PointwiseForcing monomial(int power, std::size_t capacity,
                                   const PhysicalParams& params);
  static PointwiseForcing sinh_forcing(std::size_t capacity,
                                       const PhysicalParams& params);

  ModalVector evaluate(const ModalVector& u) const override;
  double local_bound(double ball_radius) const override;
  std::size_t capacity() const override { return capacity_; }
  std::string name() const override { return name_; }

  const SineBasis& basis() const { return *basis_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::function<double(double)> fprime_sup_;
  std::size_t capacity_;
  PhysicalParams params_;
  std::shared_ptr<SineBasis> basis_;
};

// F(u) = w where -w'' + w = u on I, w(+-1) = 0; diagonal in the sine basis:
// w_k = u_k / ((k pi)^2 + 1).
class BvpCompositionForcing : public ForcingOperator {
 public:
  BvpCompositionForcing(std::size_t capacity, const PhysicalParams& params);
  ModalVector evaluate(const ModalVector& u) const override;
  double local_bound(double ball_radius) const override;
  std::size_t capacity() const override { return capacity_; }
  std::string name() const override { return "bvp_composition"; }

 private:
  std::size_t capacity_;
  PhysicalParams params_;
};

// F identically zero.  local_bound is 0, so a solve using it must override
// the forcing bound c explicitly (T0 = C/(omega c) is undefined otherwise).
class ZeroForcing : public ForcingOperator {
 public:
  explicit ZeroForcing(std::size_t capacity) : capacity_(capacity) {}
  ModalVector evaluate(const ModalVector&) const override {
    return ModalVector(capacity_);
  }
  double local_bound(double) const override { return 0.0; }
  std::size_t capacity() const override { return capacity_; }
  std::string name() const override { return "zero"; }

 private:
  std::size_t capacity_;
};

struct ConstraintEvaluation {
  double inf_value;              // sampled estimate of inf_I G(u)
  double certified_lower_bound;  // rigorous: min sample - h * sup|u'| bound
  double argmin_x;               // location of the smallest sample
};

class ConstraintOperator {
 public:
  virtual ~ConstraintOperator() = default;
  virtual ConstraintEvaluation evaluate_inf(const ModalVector& u) const = 0;
  // same with an explicit sample count (refinement studies)
  virtual ConstraintEvaluation evaluate_inf(const ModalVector& u,
                                            std::size_t samples) const = 0;
  virtual std::string name() const = 0;
};

// G(u) = offset + u.  inf G(0) = offset must be positive.  The certified
// bound samples G on a uniform midpoint grid (plus the endpoints, where
// u = 0 exactly) and subtracts h * sup|u'| with sup|u'| <= sum |a_k| k pi.
class AffineConstraint : public ConstraintOperator {
 public:
  explicit AffineConstraint(double offset = 1.0, std::size_t default_samples = 8192);
  ConstraintEvaluation evaluate_inf(const ModalVector& u) const override;
  ConstraintEvaluation evaluate_inf(const ModalVector& u,
                                    std::size_t samples) const override;
  std::string name() const override { return "affine"; }
  double offset() const { return offset_; }

 private:
  double offset_;
  std::size_t default_samples_;
};

// Explicit inhomogeneous source g(t) added to the velocity equation.  This
// is plumbing, not part of the operator hypotheses: with quiescent data and
// F(0) = 0 the zero function already solves the system, so a drive is what
// makes test trajectories nontrivial.
class DriveTerm {
 public:
  static DriveTerm none(std::size_t capacity);
  static DriveTerm constant(std::size_t capacity, int mode, double amplitude);
  static DriveTerm cosine(std::size_t capacity, int mode, double amplitude,
                          double omega);

  ModalVector evaluate(double t) const;
  bool is_zero() const { return kind_ == Kind::none; }
  std::size_t capacity() const { return capacity_; }
  std::string name() const;
  // max over t >= 0 of |g(t)|_{H10}
  double h10_sup(const PhysicalParams& params) const;

 private:
  enum class Kind { none, constant, cosine };
  Kind kind_ = Kind::none;
  std::size_t capacity_ = 0;
  int mode_ = 1;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
};

struct ClosureReport {
  bool applicable;                // input sequence looked convergent in H10
  std::vector<double> l2_errors;  // |F(u_k) - F(u_limit)|_{L2}
  double h10_bound;               // max_k |F(u_k)|_{H10}
  bool converged;                 // errors decay to ~0 at the tail
};

// Checks F(u_k) -> F(u) in L2 along a sequence converging in H10 (the last
// element is taken as the limit).
ClosureReport closure_property_check(const ForcingOperator& F,
                                     const std::vector<ModalVector>& u_seq,
                                     const PhysicalParams& params);

}  // namespace telegraph
