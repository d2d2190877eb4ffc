#pragma once

#include "objective.hpp"
#include "solver.hpp"

#include <cstdint>
#include <vector>

namespace fcg {

struct EigenPairRecord {
  Vector x;
  double lambda = 0.0;
  double residual = 0.0;
};

// Deduplicated eigenpairs sorted by eigenvalue.
struct EigenSet {
  std::vector<EigenPairRecord> pairs;

  std::vector<double> eigenvalues() const;
};

inline constexpr double kOracleResidualTol = 1e-8;
inline constexpr double kDedupLambdaTol = 1e-6;
inline constexpr double kDedupVectorTol = 1e-4;

// Drops pairs with residual above kOracleResidualTol and merges pairs closer
// than kDedupLambdaTol in lambda and kDedupVectorTol in vector distance
// (modulo sign).
EigenSet deduplicate(std::vector<EigenPairRecord> candidates);

// max_i |central difference of h - grad h|_i / (1 + |grad h|)
double fd_check_gradient(const Objective& obj, const Vector& x, double step);

// max_ij |H - J|_ij / (1 + max |H|_ij), J the central-difference Jacobian of
// grad h at feasible x.
double fd_check_hessian(const Objective& obj, const Vector& x, double step);

// All eigenpairs of a 2-dimensional problem found by scanning h along the
// feasible curve for sign changes of its derivative.
EigenSet enumerate_n2(const Objective& obj, int grid = 2048);

// Pooled multi-start solves in both senses for a 3-dimensional problem.
EigenSet enumerate_n3(const Objective& obj, int starts, std::uint64_t seed,
                      const SolveConfig& cfg = {});

}  // namespace fcg
