#include "objective.hpp"

#include "error.hpp"

#include <cmath>
#include <string>

namespace fcg {

const char* to_string(Sense sense) noexcept {
  return sense == Sense::Maximize ? "max" : "min";
}

Objective::Objective(std::shared_ptr<const SymTensor> a, BForm b, Sense sense)
    : a_(std::move(a)), b_(std::move(b)), sense_(sense) {
  if (!a_) throw Error(ErrorCode::InvalidArgument, "objective needs a tensor");
  if (a_->dim() != b_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "tensor dimension " + std::to_string(a_->dim()) + " differs from B-form dimension " +
                    std::to_string(b_.dim()));
  }
  work_ = sense_ == Sense::Maximize ? std::make_shared<const SymTensor>(a_->negated()) : a_;
}

Objective::Objective(SymTensor a, BForm b, Sense sense)
    : Objective(std::make_shared<const SymTensor>(std::move(a)), std::move(b), sense) {}

bool Objective::is_feasible(const Vector& x) const {
  return std::abs(b_.phi(x) - 1.0) <= kFeasibilityTol;
}

void Objective::require_feasible(const Vector& x) const {
  const double p = b_.phi(x);
  if (!(std::abs(p - 1.0) <= kFeasibilityTol)) {
    throw Error(ErrorCode::InfeasiblePoint,
                "point is not on the feasible surface (B x^m' = " + std::to_string(p) + ")");
  }
}

double Objective::h(const Vector& x) const { return static_cast<double>(h_extended(x)); }

long double Objective::h_extended(const Vector& x) const {
  if (x.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "h is undefined at x = 0");
  const int m = order();
  const long double p = b_.phi_extended(x);
  if (!(p > 0.0L)) {
    throw Error(ErrorCode::NonPositiveForm, "B x^m' <= 0 at a nonzero point; B is not positive definite");
  }
  return work_->txm_extended(x) / (m * std::pow(p, static_cast<long double>(m) / b_.order()));
}

Vector Objective::grad_h(const Vector& x) const {
  if (x.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "grad h is undefined at x = 0");
  const int m = order();
  const double p = b_.phi(x);
  const double nb = b_.norm(x);
  return (work_->txm1(x) - (work_->txm(x) / p) * b_.grad(x)) / std::pow(nb, m);
}

Vector Objective::feas_grad(const Vector& x) const {
  require_feasible(x);
  return work_->txm1(x) - work_->txm(x) * b_.grad(x);
}

Matrix Objective::feas_hess(const Vector& x) const {
  require_feasible(x);
  const int m = order();
  const int mb = b_.order();
  const double lam = work_->txm(x);
  const Vector bg = b_.grad(x);
  const Vector f = work_->txm1(x) - lam * bg;
  Matrix h = (m - 1) * work_->txm2(x) - (mb - 1) * lam * b_.hess(x);
  h -= m * (f * bg.transpose() + bg * f.transpose());
  if (m != mb) h -= (m - mb) * lam * bg * bg.transpose();
  return h;
}

double Objective::feas_hess_quad(const Vector& x, const Vector& d) const {
  require_feasible(x);
  const int m = order();
  const int mb = b_.order();
  const double lam = work_->txm(x);
  const Vector bg = b_.grad(x);
  const Vector f = work_->txm1(x) - lam * bg;
  const double bd = bg.dot(d);
  return (m - 1) * work_->txm2_quad(x, d) - (mb - 1) * lam * b_.hess_quad(x, d) -
         2.0 * m * f.dot(d) * bd - (m - mb) * lam * bd * bd;
}

double Objective::lambda(const Vector& x) const { return a_->txm(x); }

double Objective::residual(const Vector& x) const {
  require_feasible(x);
  const double lam = a_->txm(x);
  const Vector ax = a_->txm1(x);
  const Vector bg = b_.grad(x);
  if (std::abs(lam) <= 1.0) return (ax - lam * bg).norm();
  return (ax / lam - bg).norm();
}

Matrix projector(const BForm& b, const Vector& x) {
  const double p = b.phi(x);
  if (!(std::abs(p - 1.0) <= kFeasibilityTol)) {
    throw Error(ErrorCode::InfeasiblePoint, "projector needs a feasible point");
  }
  return Matrix::Identity(x.size(), x.size()) - x * b.grad(x).transpose();
}

}  // namespace fcg
