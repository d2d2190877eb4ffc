#include "bform.hpp"

#include "error.hpp"

#include <cmath>
#include <string>

namespace fcg {

namespace {

double ipow(double v, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= v;
  return r;
}

void require_even_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "B-form order must be even and >= 2, got " + std::to_string(order));
  }
}

}  // namespace

const char* to_string(BForm::Kind kind) noexcept {
  switch (kind) {
    case BForm::Kind::Identity2: return "identity2";
    case BForm::Kind::DiagPower: return "diag_power";
    case BForm::Kind::QuadFormPower: return "quad_form_power";
    case BForm::Kind::Dense: return "dense";
  }
  return "unknown";
}

BForm BForm::identity2(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  return BForm(Kind::Identity2, dim, 2);
}

BForm BForm::diag_power(int dim, int order) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  require_even_order(order);
  return BForm(Kind::DiagPower, dim, order);
}

BForm BForm::quad_form_power(Matrix d, int order) {
  require_even_order(order);
  if (d.rows() < 1 || d.rows() != d.cols()) {
    throw Error(ErrorCode::InvalidArgument, "D must be a non-empty square matrix");
  }
  if (!d.isApprox(d.transpose(), 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "D must be symmetric");
  }
  BForm b(Kind::QuadFormPower, static_cast<int>(d.rows()), order);
  b.d_ = std::move(d);
  return b;
}

BForm BForm::dense(SymTensor t) {
  require_even_order(t.order());
  BForm b(Kind::Dense, t.dim(), t.order());
  b.tensor_ = std::make_shared<const SymTensor>(std::move(t));
  return b;
}

void BForm::check_dim(const Vector& x) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector has length " + std::to_string(x.size()) + ", B-form dimension is " +
                    std::to_string(dim_));
  }
}

double BForm::phi(const Vector& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::Identity2:
      return x.squaredNorm();
    case Kind::DiagPower: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += ipow(x[i], order_);
      return s;
    }
    case Kind::QuadFormPower:
      return ipow(x.dot(d_ * x), order_ / 2);
    case Kind::Dense:
      return tensor_->txm(x);
  }
  return 0.0;
}

long double BForm::phi_extended(const Vector& x) const {
  check_dim(x);
  auto lpow = [](long double v, int k) {
    long double r = 1.0L;
    for (int i = 0; i < k; ++i) r *= v;
    return r;
  };
  switch (kind_) {
    case Kind::Identity2:
    case Kind::DiagPower: {
      long double s = 0.0L;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += lpow(x[i], order_);
      return s;
    }
    case Kind::QuadFormPower: {
      long double q = 0.0L;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        long double row = 0.0L;
        for (Eigen::Index j = 0; j < x.size(); ++j) row += static_cast<long double>(d_(i, j)) * x[j];
        q += row * x[i];
      }
      return lpow(q, order_ / 2);
    }
    case Kind::Dense:
      return tensor_->txm_extended(x);
  }
  return 0.0L;
}

double BForm::norm(const Vector& x) const {
  const double p = phi(x);
  if (p > 0.0) return std::pow(p, 1.0 / order_);
  if (x.isZero(0.0)) return 0.0;
  throw Error(ErrorCode::NonPositiveForm,
              "B x^m' = " + std::to_string(p) + " at a nonzero point; B is not positive definite");
}

Vector BForm::grad(const Vector& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::Identity2:
      return x;
    case Kind::DiagPower:
      return x.unaryExpr([this](double v) { return ipow(v, order_ - 1); });
    case Kind::QuadFormPower: {
      const Vector dx = d_ * x;
      return ipow(x.dot(dx), order_ / 2 - 1) * dx;
    }
    case Kind::Dense:
      return tensor_->txm1(x);
  }
  return {};
}

Matrix BForm::hess(const Vector& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::Identity2:
      return Matrix::Identity(dim_, dim_);
    case Kind::DiagPower:
      return x.unaryExpr([this](double v) { return ipow(v, order_ - 2); }).asDiagonal();
    case Kind::QuadFormPower: {
      // hess phi = m' q^{p-1} D + m'(m'-2) q^{p-2} (Dx)(Dx)^T with q = x^T D x, p = m'/2
      const Vector dx = d_ * x;
      const double q = x.dot(dx);
      Matrix h = ipow(q, order_ / 2 - 1) * d_;
      if (order_ > 2) h += (order_ - 2) * ipow(q, order_ / 2 - 2) * dx * dx.transpose();
      return h / (order_ - 1);
    }
    case Kind::Dense:
      return tensor_->txm2(x);
  }
  return {};
}

double BForm::hess_quad(const Vector& x, const Vector& d) const {
  check_dim(x);
  check_dim(d);
  switch (kind_) {
    case Kind::Identity2:
      return d.squaredNorm();
    case Kind::DiagPower: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += ipow(x[i], order_ - 2) * d[i] * d[i];
      return s;
    }
    case Kind::QuadFormPower: {
      const Vector dx = d_ * x;
      const double q = x.dot(dx);
      double v = ipow(q, order_ / 2 - 1) * d.dot(d_ * d);
      if (order_ > 2) {
        const double c = dx.dot(d);
        v += (order_ - 2) * ipow(q, order_ / 2 - 2) * c * c;
      }
      return v / (order_ - 1);
    }
    case Kind::Dense:
      return tensor_->txm2_quad(x, d);
  }
  return 0.0;
}

Vector BForm::retract(const Vector& x, const Vector& d, double alpha) const {
  check_dim(x);
  check_dim(d);
  Vector y = x + alpha * d;
  const double scale = y.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) {
    if (scale == 0.0) throw Error(ErrorCode::ZeroVector, "x + alpha d is the zero vector");
    throw Error(ErrorCode::InvalidArgument, "x + alpha d is not finite");
  }
  // The result is scale invariant; normalizing by the max entry first keeps
  // phi away from overflow for large steps.
  y /= scale;
  return y / norm(y);
}

}  // namespace fcg
