#pragma once

#include "bform.hpp"
#include "tensor.hpp"

#include <memory>

namespace fcg {

enum class Sense { Minimize, Maximize };

const char* to_string(Sense sense) noexcept;

// |phi(x) - 1| allowed for a point to count as feasible.
inline constexpr double kFeasibilityTol = 1e-10;

// min (1/m) A x^m  s.t.  B x^{m'} = 1.
//
// Maximize is handled by minimizing over -A; every evaluation below except
// lambda() and residual() works on that working tensor.
class Objective {
 public:
  Objective(std::shared_ptr<const SymTensor> a, BForm b, Sense sense = Sense::Minimize);
  Objective(SymTensor a, BForm b, Sense sense = Sense::Minimize);

  const SymTensor& tensor() const { return *a_; }
  const SymTensor& working_tensor() const { return *work_; }
  std::shared_ptr<const SymTensor> shared_tensor() const { return a_; }
  const BForm& bform() const { return b_; }
  Sense sense() const { return sense_; }
  int order() const { return a_->order(); }
  int dim() const { return a_->dim(); }

  Objective with_sense(Sense sense) const { return Objective(a_, b_, sense); }

  bool is_feasible(const Vector& x) const;
  void require_feasible(const Vector& x) const;

  // h(x) = (1/m) A x^m / ||x||_B^m, scale invariant.
  double h(const Vector& x) const;
  // h with extended-precision accumulation. Sufficient-decrease tests compare
  // values of this, since near an eigenpair the decrease per step drops
  // below double rounding of h.
  long double h_extended(const Vector& x) const;
  Vector grad_h(const Vector& x) const;

  // F(x) = A x^{m-1} - (A x^m) B x^{m'-1} at feasible x.
  Vector feas_grad(const Vector& x) const;
  // Hessian of h restricted to feasible x.
  Matrix feas_hess(const Vector& x) const;
  // d^T H(x) d without forming H.
  double feas_hess_quad(const Vector& x, const Vector& d) const;

  // A x^m with the original sign of A.
  double lambda(const Vector& x) const;

  // Eigenpair defect at feasible x, measured relative to lambda once
  // |lambda| > 1. Uses the original A.
  double residual(const Vector& x) const;

 private:
  std::shared_ptr<const SymTensor> a_;
  std::shared_ptr<const SymTensor> work_;
  BForm b_;
  Sense sense_;
};

// P = I - x (B x^{m'-1})^T; idempotent at feasible x.
Matrix projector(const BForm& b, const Vector& x);

}  // namespace fcg
