#include "solver.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcg {

void SolveConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (!(sigma1 > 0.0 && sigma1 < 1.0)) fail("sigma1 must lie in (0, 1)");
  if (!(sigma2 > 0.0)) fail("sigma2 must be positive");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
  if (!(tol > 0.0)) fail("tol must be positive");
  if (max_iter < 0) fail("max_iter must be non-negative");
  if (max_backtracks < 0) fail("max_backtracks must be non-negative");
  if (delta_mode == DeltaMode::Constant && !(delta > 0.0)) fail("constant delta must be positive");
}

Vector direction(const Vector& f, const Vector& f_prev, const Vector& d_prev, int k) {
  if (k == 0) return -f;
  const double prev2 = f_prev.squaredNorm();
  if (prev2 == 0.0) {
    throw Error(ErrorCode::ZeroPreviousGradient, "previous feasible gradient is zero");
  }
  const Vector y = f - f_prev;
  const double beta = f.dot(y) / prev2;
  const double theta = f.dot(d_prev) / prev2;
  return -f + beta * d_prev - theta * y;
}

double initial_step(const Vector& f, const Vector& d, double curvature, const SolveConfig& cfg) {
  const double dd = d.squaredNorm();
  if (dd == 0.0) throw Error(ErrorCode::ZeroDirection, "search direction is zero");
  if (cfg.delta_mode == DeltaMode::Constant) return cfg.delta;
  if (!std::isfinite(curvature) || std::abs(curvature) <= 1e-14 * dd) return 1.0;
  const double delta = std::abs(f.dot(d) / curvature);
  return std::clamp(delta, kMinDelta, kMaxDelta);
}

double initial_step(const Vector& f, const Vector& d, const Matrix& hess, const SolveConfig& cfg) {
  return initial_step(f, d, d.dot(hess * d), cfg);
}

LineSearchResult line_search(const Objective& obj, const Vector& x, const Vector& f,
                             const Vector& d, double delta, const SolveConfig& cfg) {
  const double fd = f.dot(d);
  if (!(fd < 0.0)) throw Error(ErrorCode::InvalidArgument, "d is not a descent direction");
  obj.require_feasible(x);
  const long double hx = obj.h_extended(x);
  const double dd = d.squaredNorm();
  const BForm& b = obj.bform();
  for (int i = 0; i <= cfg.max_backtracks; ++i) {
    const double alpha = delta * std::pow(cfg.rho, i);
    Vector y;
    try {
      y = b.retract(x, d, alpha);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroVector) continue;
      throw;
    }
    const long double hy = obj.h_extended(y);
    const long double decrease =
        static_cast<long double>(cfg.sigma1) * alpha * fd -
        static_cast<long double>(cfg.sigma2) * alpha * alpha * dd;
    if (hy <= hx + decrease) {
      return {alpha, i, std::move(y), hy};
    }
  }
  throw Error(ErrorCode::LineSearchFailed,
              "no acceptable step after " + std::to_string(cfg.max_backtracks) + " backtracks");
}

SolveResult solve(const Objective& obj, const Vector& x0, const SolveConfig& cfg,
                  const IterateObserver& observer) {
  cfg.validate();
  if (x0.size() != obj.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "initial point has the wrong length");
  }
  const double scale = x0.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw Error(ErrorCode::ZeroVector, "initial point is zero");

  const BForm& b = obj.bform();
  const double sign = obj.sense() == Sense::Maximize ? -1.0 : 1.0;
  const int m = obj.order();

  Vector x = x0 / scale;
  x /= b.norm(x);
  Vector f = obj.feas_grad(x);
  long double hx = obj.h_extended(x);
  Vector f_prev;
  Vector d_prev;

  SolveResult out;
  for (int k = 0;; ++k) {
    const double res = obj.residual(x);
    TraceRow row{k, sign * static_cast<double>(m * hx), f.norm(), res, 0.0, 0};
    if (res <= cfg.tol) {
      out.converged = true;
      out.trace.push_back(row);
      break;
    }
    if (k >= cfg.max_iter) {
      out.trace.push_back(row);
      break;
    }
    try {
      Vector d = direction(f, f_prev, d_prev, k);
      const double delta = initial_step(f, d, obj.feas_hess_quad(x, d), cfg);
      LineSearchResult step = line_search(obj, x, f, d, delta, cfg);

      row.alpha = step.alpha;
      row.backtracks = step.backtracks;
      out.trace.push_back(row);
      out.total_backtracks += step.backtracks;
      if (observer) {
        observer(IterateState{k, x, row.lambda, hx, f, d, delta, step.alpha, step.backtracks,
                              res});
      }

      x = std::move(step.x);
      hx = step.h;
      f_prev = std::move(f);
      d_prev = std::move(d);
      f = obj.feas_grad(x);
      out.iterations = k + 1;
    } catch (const Error& e) {
      out.trace.push_back(row);
      out.failure = std::string(to_string(e.code())) + ": " + e.what();
      break;
    }
  }
  out.x = x;
  out.lambda = obj.lambda(x);
  out.residual = out.trace.back().residual;
  return out;
}

}  // namespace fcg
