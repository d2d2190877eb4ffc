// fcgeig: command-line driver for the tensor eigensolver.
//
//   fcgeig solve  [run options] [--trial T | --x0 a,b,c] [--trace trace.csv]
//   fcgeig bench  [run options] [--out records.jsonl] [--summary-json summary.json]
//   fcgeig check  [run options] [--points K] [--steps 1e-3,1e-4,...]
//   fcgeig oracle [run options] [--grid G] [--starts S]
//   fcgeig gen    --family ex3 --order 3 --dim 10 [--tensor-seed S] --out tensor.json
//
// Run options start from an optional --config JSON file; flags override its
// fields. Exit status: 0 all runs converged, 2 some runs failed, 1 usage or
// input error.

#include <fcg/fcg.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

// Raised for any C API failure; carries the status and message.
class ApiError : public std::runtime_error {
 public:
  explicit ApiError(fcg_status status)
      : std::runtime_error(std::string(fcg_status_string(status)) + ": " + fcg_last_error()) {}
};

void check(fcg_status status) {
  if (status != FCG_OK) throw ApiError(status);
}

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  fcg_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using ObjectiveHandle = Handle<fcg_objective, fcg_objective_free>;
using ResultHandle = Handle<fcg_result, fcg_result_free>;
using TensorHandle = Handle<fcg_tensor, fcg_tensor_free>;

struct RunOptions {
  std::string config;
  std::optional<std::string> family;
  std::optional<int> order;
  std::optional<int> dim;
  std::optional<std::uint64_t> tensor_seed;
  std::optional<std::string> tensor_file;
  std::optional<std::string> bform;
  std::optional<int> border;
  std::optional<std::uint64_t> bform_seed;
  std::optional<std::string> sense;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> sigma1;
  std::optional<double> sigma2;
  std::optional<double> rho;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> max_backtracks;
  std::optional<std::string> delta;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--family", o.family, "tensor generator (ex1..ex6)");
  app->add_option("--order", o.order, "tensor order m");
  app->add_option("--dim", o.dim, "tensor dimension n");
  app->add_option("--tensor-seed", o.tensor_seed, "seed for random tensor families");
  app->add_option("--tensor-file", o.tensor_file, "tensor JSON file instead of a generator");
  app->add_option("--bform", o.bform, "constraint form: identity2, diag_power, ex7, ex8");
  app->add_option("--border", o.border, "constraint form order m'");
  app->add_option("--bform-seed", o.bform_seed, "seed for random constraint forms");
  app->add_option("--sense", o.sense, "max or min")->check(CLI::IsMember({"max", "min"}));
  app->add_option("--trials", o.trials, "number of seeded starts");
  app->add_option("--seed", o.seed, "seed for starting points");
  app->add_option("--threads", o.threads, "worker threads for trials");
  app->add_option("--sigma1", o.sigma1, "Armijo slope coefficient");
  app->add_option("--sigma2", o.sigma2, "Armijo quadratic coefficient");
  app->add_option("--rho", o.rho, "backtracking factor");
  app->add_option("--tol", o.tol, "residual tolerance");
  app->add_option("--max-iter", o.max_iter, "iteration cap");
  app->add_option("--max-backtracks", o.max_backtracks, "backtracking cap per step");
  app->add_option("--delta", o.delta, "initial step: 'hessian' or a constant");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// Config file (if any) with command-line overrides, normalized by the library.
json build_config(const RunOptions& o) {
  json doc = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");

  if (o.tensor_file) {
    doc["tensor"] = {{"file", *o.tensor_file}};
  } else if (o.family || o.order || o.dim || o.tensor_seed) {
    json t = doc.contains("tensor") && doc["tensor"].is_object() && !doc["tensor"].contains("file")
                 ? doc["tensor"]
                 : json::object();
    if (o.family) t["family"] = *o.family;
    if (o.order) t["order"] = *o.order;
    if (o.dim) t["dim"] = *o.dim;
    if (o.tensor_seed) t["seed"] = *o.tensor_seed;
    doc["tensor"] = t;
  }
  if (o.bform || o.border || o.bform_seed) {
    json b = doc.contains("bform") ? doc["bform"] : json{{"family", "identity2"}};
    if (o.bform) b["family"] = *o.bform;
    if (o.border) b["order"] = *o.border;
    if (o.bform_seed) b["seed"] = *o.bform_seed;
    doc["bform"] = b;
  }
  if (o.sense) doc["sense"] = *o.sense;
  if (o.trials) doc["trials"] = *o.trials;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.threads) doc["threads"] = *o.threads;

  json s = doc.contains("solver") ? doc["solver"] : json::object();
  if (o.sigma1) s["sigma1"] = *o.sigma1;
  if (o.sigma2) s["sigma2"] = *o.sigma2;
  if (o.rho) s["rho"] = *o.rho;
  if (o.tol) s["tol"] = *o.tol;
  if (o.max_iter) s["max_iter"] = *o.max_iter;
  if (o.max_backtracks) s["max_backtracks"] = *o.max_backtracks;
  if (o.delta) {
    if (*o.delta == "hessian") {
      s["delta"] = "hessian";
    } else {
      try {
        s["delta"] = std::stod(*o.delta);
      } catch (const std::exception&) {
        throw std::runtime_error("--delta must be 'hessian' or a number");
      }
    }
  }
  if (!s.empty()) doc["solver"] = s;

  char* normalized = nullptr;
  check(fcg_config_normalize(doc.dump().c_str(), &normalized));
  return json::parse(take_string(normalized));
}

fcg_solve_config solver_config(const json& cfg) {
  fcg_solve_config c;
  fcg_solve_config_default(&c);
  const json& s = cfg.at("solver");
  c.sigma1 = s.at("sigma1");
  c.sigma2 = s.at("sigma2");
  c.rho = s.at("rho");
  c.tol = s.at("tol");
  c.max_iter = s.at("max_iter");
  c.max_backtracks = s.at("max_backtracks");
  if (s.at("delta").is_number()) {
    c.delta_mode = FCG_DELTA_CONSTANT;
    c.delta = s.at("delta");
  } else {
    c.delta_mode = FCG_DELTA_HESSIAN;
  }
  return c;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error("not a number list: " + text);
    }
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// ---- solve -----------------------------------------------------------------

struct SolveOptions {
  RunOptions run;
  int trial = 0;
  std::string x0;
  std::string trace;
};

int cmd_solve(const SolveOptions& o) {
  const json cfg = build_config(o.run);
  ObjectiveHandle obj;
  check(fcg_objective_from_config(cfg.dump().c_str(), &obj.p));
  const int n = fcg_objective_dim(obj.p);

  std::vector<double> x0(n);
  if (!o.x0.empty()) {
    x0 = parse_list(o.x0);
    if (static_cast<int>(x0.size()) != n) {
      throw std::runtime_error("--x0 needs " + std::to_string(n) + " entries");
    }
  } else {
    check(fcg_trial_start(n, cfg.at("seed").get<std::uint64_t>(), o.trial, x0.data()));
  }

  const fcg_solve_config sc = solver_config(cfg);
  ResultHandle res;
  check(fcg_solve(obj.p, x0.data(), x0.size(), &sc, &res.p));

  std::vector<double> x(n);
  check(fcg_result_x(res.p, x.data(), x.size()));
  json out = {{"lambda", fcg_result_lambda(res.p)},
              {"res", fcg_result_residual(res.p)},
              {"iters", fcg_result_iterations(res.p)},
              {"backtracks", fcg_result_backtracks(res.p)},
              {"converged", fcg_result_converged(res.p) != 0},
              {"x", x}};
  const std::string failure = fcg_result_failure(res.p);
  if (!failure.empty()) out["failure"] = failure;
  std::cout << out.dump() << "\n";

  if (!o.trace.empty()) {
    std::ofstream csv = open_output(o.trace);
    csv << "k,lambda,grad_norm,residual,alpha,backtracks\n";
    csv << std::setprecision(17);
    const std::size_t rows = fcg_result_trace_length(res.p);
    for (std::size_t k = 0; k < rows; ++k) {
      fcg_trace_row r;
      check(fcg_result_trace_row(res.p, k, &r));
      csv << r.k << ',' << r.lambda << ',' << r.grad_norm << ',' << r.residual << ',' << r.alpha
          << ',' << r.backtracks << '\n';
    }
  }
  return fcg_result_converged(res.p) != 0 ? kExitOk : kExitFailed;
}

// ---- bench -----------------------------------------------------------------

struct BenchOptions {
  RunOptions run;
  std::string out;
  std::string summary_json;
};

void print_summary_table(std::ostream& os, const json& summary) {
  os << "trials " << summary.at("trials").get<int>() << ", converged "
     << summary.at("suc").get<int>() << ", failed " << summary.at("failed").get<int>() << "\n";
  os << std::setw(16) << "lambda" << std::setw(7) << "occ" << std::setw(10) << "iter"
     << std::setw(12) << "backtracks" << std::setw(12) << "time_ms" << std::setw(12) << "res_max"
     << "\n";
  for (const auto& c : summary.at("clusters")) {
    os << std::setw(16) << std::setprecision(8) << c.at("lambda").get<double>() << std::setw(7)
       << c.at("occ").get<int>() << std::fixed << std::setprecision(2) << std::setw(10)
       << c.at("iter").get<double>() << std::setw(12) << c.at("backtracks").get<double>()
       << std::setprecision(3) << std::setw(12) << c.at("time_ms").get<double>()
       << std::scientific << std::setprecision(2) << std::setw(12)
       << c.at("res_max").get<double>() << std::defaultfloat << "\n";
  }
}

int cmd_bench(const BenchOptions& o) {
  const json cfg = build_config(o.run);

  std::ofstream file;
  if (!o.out.empty()) file = open_output(o.out);
  std::ostream& records = o.out.empty() ? std::cout : file;
  // The table shares stdout only when records go elsewhere.
  std::ostream& table = o.out.empty() ? std::cerr : std::cout;

  auto sink = [](const char* line, void* user) {
    auto* os = static_cast<std::ostream*>(user);
    *os << line << '\n';
  };
  char* summary_text = nullptr;
  int failed = 0;
  check(fcg_bench_run(cfg.dump().c_str(), sink, &records, &summary_text, &failed));
  records.flush();
  const json summary = json::parse(take_string(summary_text));

  print_summary_table(table, summary);
  if (!o.summary_json.empty()) open_output(o.summary_json) << summary.dump(2) << "\n";
  return failed == 0 ? kExitOk : kExitFailed;
}

// ---- check -----------------------------------------------------------------

struct CheckOptions {
  RunOptions run;
  int points = 5;
  std::string steps = "1e-3,1e-4,1e-5,1e-6";
};

int cmd_check(const CheckOptions& o) {
  if (o.points < 1) throw CLI::ValidationError("--points", "must be >= 1");
  const json cfg = build_config(o.run);
  const std::vector<double> steps = parse_list(o.steps);
  ObjectiveHandle obj;
  check(fcg_objective_from_config(cfg.dump().c_str(), &obj.p));
  const int n = fcg_objective_dim(obj.p);
  const auto seed = cfg.at("seed").get<std::uint64_t>();

  std::vector<std::vector<double>> xs;
  for (int p = 0; p < o.points; ++p) {
    std::vector<double> u(n);
    std::vector<double> x(n);
    check(fcg_trial_start(n, seed, p, u.data()));
    check(fcg_objective_normalize(obj.p, u.data(), u.size(), x.data()));
    xs.push_back(std::move(x));
  }

  std::cout << std::setw(10) << "step" << std::setw(14) << "grad_err" << std::setw(14)
            << "hess_err" << "\n";
  for (double h : steps) {
    double grad_worst = 0.0;
    double hess_worst = 0.0;
    for (const auto& x : xs) {
      double g = 0.0;
      double hs = 0.0;
      check(fcg_fd_check_gradient(obj.p, x.data(), x.size(), h, &g));
      check(fcg_fd_check_hessian(obj.p, x.data(), x.size(), h, &hs));
      grad_worst = std::max(grad_worst, g);
      hess_worst = std::max(hess_worst, hs);
    }
    std::cout << std::scientific << std::setprecision(1) << std::setw(10) << h
              << std::setprecision(3) << std::setw(14) << grad_worst << std::setw(14)
              << hess_worst << "\n";
  }
  return kExitOk;
}

// ---- oracle ----------------------------------------------------------------

struct OracleOptions {
  RunOptions run;
  int grid = 2048;
  int starts = 200;
};

int cmd_oracle(const OracleOptions& o) {
  const json cfg = build_config(o.run);
  ObjectiveHandle obj;
  check(fcg_objective_from_config(cfg.dump().c_str(), &obj.p));
  const int n = fcg_objective_dim(obj.p);
  char* text = nullptr;
  if (n == 2) {
    check(fcg_oracle_enumerate_n2(obj.p, o.grid, &text));
  } else if (n == 3) {
    check(fcg_oracle_enumerate_n3(obj.p, o.starts, cfg.at("seed").get<std::uint64_t>(), &text));
  } else {
    throw std::runtime_error("oracle supports dimension 2 or 3, got " + std::to_string(n));
  }
  std::cout << json::parse(take_string(text)).dump(2) << "\n";
  return kExitOk;
}

// ---- gen -------------------------------------------------------------------

struct GenOptions {
  std::string family;
  int order = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenOptions& o) {
  const json spec = {{"family", o.family}, {"order", o.order}, {"dim", o.dim}, {"seed", o.seed}};
  TensorHandle t;
  check(fcg_tensor_generate(spec.dump().c_str(), &t.p));
  check(fcg_tensor_save(t.p, o.out.c_str()));
  std::cerr << "wrote " << o.out << " (order " << fcg_tensor_order(t.p) << ", dim "
            << fcg_tensor_dim(t.p) << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible conjugate gradient solver for tensor B-eigenpairs"};
  app.set_version_flag("--version", std::string(fcg_version()));
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "single solve from one seeded or given start");
  add_run_options(solve_cmd, solve.run);
  solve_cmd->add_option("--trial", solve.trial, "index of the seeded start");
  solve_cmd->add_option("--x0", solve.x0, "explicit start, comma separated");
  solve_cmd->add_option("--trace", solve.trace, "write the per-iteration trace as CSV");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "multi-start experiment with JSONL records");
  add_run_options(bench_cmd, bench.run);
  bench_cmd->add_option("--out", bench.out, "JSONL output path (default stdout)");
  bench_cmd->add_option("--summary-json", bench.summary_json, "write the summary as JSON");

  CheckOptions chk;
  auto* check_cmd = app.add_subcommand("check", "finite-difference derivative checks");
  add_run_options(check_cmd, chk.run);
  check_cmd->add_option("--points", chk.points, "number of random feasible points");
  check_cmd->add_option("--steps", chk.steps, "comma separated difference steps");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate eigenpairs of a 2- or 3-dim problem");
  add_run_options(oracle_cmd, oracle.run);
  oracle_cmd->add_option("--grid", oracle.grid, "angle grid for dimension 2");
  oracle_cmd->add_option("--starts", oracle.starts, "starts per sense for dimension 3");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated tensor to a JSON file");
  gen_cmd->add_option("--family", gen.family, "ex1..ex6")->required();
  gen_cmd->add_option("--order", gen.order, "tensor order (0: family default)");
  gen_cmd->add_option("--dim", gen.dim, "tensor dimension (0: family default)");
  gen_cmd->add_option("--tensor-seed", gen.seed, "seed for random families");
  gen_cmd->add_option("--out", gen.out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (check_cmd->parsed()) return cmd_check(chk);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle);
    if (gen_cmd->parsed()) return cmd_gen(gen);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "fcgeig: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "fcgeig: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
