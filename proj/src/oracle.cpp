#include "oracle.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fcg {

std::vector<double> EigenSet::eigenvalues() const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.lambda);
  return out;
}

EigenSet deduplicate(std::vector<EigenPairRecord> candidates) {
  std::erase_if(candidates, [](const EigenPairRecord& p) {
    return !(p.residual <= kOracleResidualTol);
  });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  EigenSet out;
  for (auto& c : candidates) {
    bool dup = false;
    for (auto it = out.pairs.rbegin(); it != out.pairs.rend(); ++it) {
      if (c.lambda - it->lambda > kDedupLambdaTol) break;
      const double dist = std::min((c.x - it->x).norm(), (c.x + it->x).norm());
      if (dist <= kDedupVectorTol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.pairs.push_back(std::move(c));
  }
  return out;
}

double fd_check_gradient(const Objective& obj, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const Vector g = obj.grad_h(x);
  double worst = 0.0;
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    const double hp = obj.h(xp);
    xp[i] = x[i] - step;
    const double hm = obj.h(xp);
    xp[i] = x[i];
    worst = std::max(worst, std::abs((hp - hm) / (2.0 * step) - g[i]));
  }
  return worst / (1.0 + g.norm());
}

double fd_check_hessian(const Objective& obj, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const Matrix h = obj.feas_hess(x);
  const Eigen::Index n = x.size();
  Matrix jac(n, n);
  Vector xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    xp[j] = x[j] + step;
    const Vector gp = obj.grad_h(xp);
    xp[j] = x[j] - step;
    const Vector gm = obj.grad_h(xp);
    xp[j] = x[j];
    jac.col(j) = (gp - gm) / (2.0 * step);
  }
  return (h - jac).cwiseAbs().maxCoeff() / (1.0 + h.cwiseAbs().maxCoeff());
}

EigenSet enumerate_n2(const Objective& obj, int grid) {
  if (obj.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "enumerate_n2 needs n = 2");
  if (grid < 360) throw Error(ErrorCode::InvalidArgument, "grid must be >= 360");

  // Derivative of t -> h(cos t, sin t); h is scale invariant so the
  // normalization onto the feasible curve drops out.
  auto slope = [&](double t) {
    const Vector c{{std::cos(t), std::sin(t)}};
    const Vector dc{{-std::sin(t), std::cos(t)}};
    return obj.grad_h(c).dot(dc);
  };
  auto to_pair = [&](double t) {
    Vector x{{std::cos(t), std::sin(t)}};
    x /= obj.bform().norm(x);
    return EigenPairRecord{x, obj.lambda(x), obj.residual(x)};
  };

  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<EigenPairRecord> found;
  double t0 = 0.0;
  double s0 = slope(t0);
  for (int k = 1; k <= grid; ++k) {
    const double t1 = two_pi * k / grid;
    const double s1 = slope(t1);
    if (s0 == 0.0) {
      found.push_back(to_pair(t0));
    } else if ((s0 < 0.0) != (s1 < 0.0) && s1 != 0.0) {
      double lo = t0;
      double hi = t1;
      double slo = s0;
      double mid = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double sm = slope(mid);
        if (std::abs(sm) <= 1e-12 || mid == lo || mid == hi) break;
        if ((sm < 0.0) == (slo < 0.0)) {
          lo = mid;
          slo = sm;
        } else {
          hi = mid;
        }
      }
      found.push_back(to_pair(mid));
    }
    t0 = t1;
    s0 = s1;
  }
  return deduplicate(std::move(found));
}

EigenSet enumerate_n3(const Objective& obj, int starts, std::uint64_t seed,
                      const SolveConfig& cfg) {
  if (obj.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "enumerate_n3 needs n = 3");
  if (starts < 1) throw Error(ErrorCode::InvalidArgument, "starts must be >= 1");
  std::vector<EigenPairRecord> found;
  for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
    const Objective o = obj.with_sense(sense);
    for (int s = 0; s < starts; ++s) {
      Rng rng(seed, static_cast<std::uint64_t>(s));
      Vector u(3);
      for (int i = 0; i < 3; ++i) u[i] = rng.symmetric();
      if (u.isZero(0.0)) continue;
      const SolveResult r = solve(o, u, cfg);
      if (r.converged) found.push_back({r.x, r.lambda, r.residual});
    }
  }
  return deduplicate(std::move(found));
}

}  // namespace fcg
