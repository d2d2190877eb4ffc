#pragma once

#include "objective.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fcg {

enum class DeltaMode {
  HessianEstimate,  // |F.d / d^T H d| from the local quadratic model
  Constant,
};

struct SolveConfig {
  double sigma1 = 1e-4;
  double sigma2 = 1e-4;
  double rho = 0.1;
  double tol = 1e-8;
  int max_iter = 500;
  int max_backtracks = 60;
  DeltaMode delta_mode = DeltaMode::HessianEstimate;
  double delta = 1.0;  // used when delta_mode == Constant

  // Throws ConfigError on out-of-range parameters.
  void validate() const;
};

// Bounds applied to the Hessian-based initial step.
inline constexpr double kMinDelta = 1e-10;
inline constexpr double kMaxDelta = 1e10;

// State of iteration k at the moment the step from x_k has been chosen.
struct IterateState {
  int k = 0;
  Vector x;
  double lambda = 0.0;  // original sign
  long double h = 0.0L;  // working objective h(x_k)
  Vector F;
  Vector d;
  double delta = 0.0;
  double alpha = 0.0;
  int backtracks = 0;
  double residual = 0.0;
};

struct TraceRow {
  int k = 0;
  double lambda = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
  double alpha = 0.0;  // step taken from x_k, 0 on the last row
  int backtracks = 0;
};

struct SolveResult {
  Vector x;
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int total_backtracks = 0;
  bool converged = false;
  std::string failure;  // empty unless the run stopped on an error
  std::vector<TraceRow> trace;
};

using IterateObserver = std::function<void(const IterateState&)>;

// Conjugate direction: -F_k at k = 0, otherwise
//   -F_k + beta d_prev - theta y,  y = F_k - F_prev,
//   beta = F_k.y / |F_prev|^2,  theta = F_k.d_prev / |F_prev|^2,
// which gives d.F_k = -|F_k|^2.
Vector direction(const Vector& f, const Vector& f_prev, const Vector& d_prev, int k);

// Initial trial step. `curvature` is d^T H d.
double initial_step(const Vector& f, const Vector& d, double curvature, const SolveConfig& cfg);
double initial_step(const Vector& f, const Vector& d, const Matrix& hess, const SolveConfig& cfg);

struct LineSearchResult {
  double alpha = 0.0;
  int backtracks = 0;
  Vector x;         // retracted point at alpha
  long double h = 0.0L;  // h at that point
};

// Largest alpha = delta rho^i satisfying
//   h(x(alpha)) <= h(x) + sigma1 alpha F.d - sigma2 alpha^2 |d|^2.
LineSearchResult line_search(const Objective& obj, const Vector& x, const Vector& f,
                             const Vector& d, double delta, const SolveConfig& cfg);

// Runs the feasible conjugate gradient iteration from x0 (any nonzero vector,
// normalized onto the feasible surface first).
SolveResult solve(const Objective& obj, const Vector& x0, const SolveConfig& cfg = {},
                  const IterateObserver& observer = {});

}  // namespace fcg
