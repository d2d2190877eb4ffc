#pragma once

#include "generators.hpp"
#include "objective.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcg {

// Multi-start experiment configuration, one JSON document:
//   {
//     "tensor": {"family": "ex3", "order": 3, "dim": 50, "seed": 1}
//               | {"file": "tensor.json"},
//     "bform":  {"family": "identity2" | "diag_power" | "ex7" | "ex8",
//                "order": m', "seed": s},
//     "sense":  "max" | "min",
//     "trials": 1000,
//     "seed":   42,
//     "threads": 1,
//     "solver": {"sigma1": 1e-4, "sigma2": 1e-4, "rho": 0.1, "tol": 1e-8,
//                "max_iter": 500, "max_backtracks": 60,
//                "delta": "hessian" | <number>}
//   }
struct RunConfig {
  std::optional<GenSpec> tensor_gen;
  std::string tensor_file;
  BFamily bfamily = BFamily::Identity2;
  int border = 0;  // 0: family default
  std::uint64_t bseed = 0;
  Sense sense = Sense::Maximize;
  int trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  SolveConfig solver;
};

RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);

SymTensor build_tensor(const RunConfig& cfg);
BForm build_bform(const RunConfig& cfg, int dim, int tensor_order);
Objective build_objective(const RunConfig& cfg);

// Trial start: entries uniform in [-1, 1] from substream `trial` of `seed`.
Vector trial_start(int dim, std::uint64_t seed, int trial);

struct TrialRecord {
  int trial = 0;
  double lambda = 0.0;
  double res = 0.0;
  int iters = 0;
  int backtracks = 0;
  double time_ms = 0.0;
  bool converged = false;
  std::string failure;
};

struct Cluster {
  double lambda = 0.0;  // mean of members
  int occ = 0;
  double mean_iter = 0.0;
  double mean_backtracks = 0.0;
  double mean_time_ms = 0.0;
  double max_res = 0.0;
};

struct Report {
  int trials = 0;
  int suc = 0;
  std::vector<TrialRecord> records;
  std::vector<Cluster> clusters;  // ascending lambda
};

inline constexpr double kClusterTol = 5e-5;

// Groups converged trials whose sorted eigenvalues are within `tol` of their
// neighbour.
std::vector<Cluster> cluster_eigenvalues(std::span<const TrialRecord> records,
                                         double tol = kClusterTol);

using RecordSink = std::function<void(const TrialRecord&)>;

// Runs cfg.trials solves. The sink sees records in trial order regardless
// of how many worker threads are used.
Report run_trials(const RunConfig& cfg, const RecordSink& sink = {});
Report run_trials(const RunConfig& cfg, const Objective& obj, const RecordSink& sink = {});

nlohmann::json to_json(const TrialRecord& r);
nlohmann::json summary_json(const Report& report);

}  // namespace fcg
