#pragma once

#include "tensor.hpp"

#include <memory>

namespace fcg {

// Even-order positive definite form B x^{m'} defining the feasible surface
// { x : B x^{m'} = 1 }.
class BForm {
 public:
  enum class Kind {
    Identity2,      // x^T x
    DiagPower,      // sum_i x_i^{m'}
    QuadFormPower,  // (x^T D x)^{m'/2}
    Dense,          // B x^{m'} for an explicit symmetric tensor
  };

  static BForm identity2(int dim);
  static BForm diag_power(int dim, int order);
  static BForm quad_form_power(Matrix d, int order);
  static BForm dense(SymTensor b);

  Kind kind() const { return kind_; }
  int order() const { return order_; }
  int dim() const { return dim_; }
  // D for QuadFormPower, empty otherwise.
  const Matrix& quad_matrix() const { return d_; }
  // B for Dense, nullptr otherwise.
  const SymTensor* tensor() const { return tensor_.get(); }

  // phi(x) = B x^{m'}
  double phi(const Vector& x) const;
  // phi accumulated in extended precision.
  long double phi_extended(const Vector& x) const;
  // ||x||_B = phi(x)^{1/m'}; throws NonPositiveForm when phi <= 0 at x != 0.
  double norm(const Vector& x) const;
  // B x^{m'-1} = grad phi / m'
  Vector grad(const Vector& x) const;
  // B x^{m'-2} = hess phi / (m'(m'-1))
  Matrix hess(const Vector& x) const;
  // d^T (B x^{m'-2}) d
  double hess_quad(const Vector& x, const Vector& d) const;

  // (x + alpha d) / ||x + alpha d||_B
  Vector retract(const Vector& x, const Vector& d, double alpha) const;

 private:
  BForm(Kind kind, int dim, int order) : kind_(kind), dim_(dim), order_(order) {}

  void check_dim(const Vector& x) const;

  Kind kind_;
  int dim_;
  int order_;
  Matrix d_;
  std::shared_ptr<const SymTensor> tensor_;
};

const char* to_string(BForm::Kind kind) noexcept;

}  // namespace fcg
