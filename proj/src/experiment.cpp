#include "experiment.hpp"

#include "error.hpp"
#include "rng.hpp"
#include "tensor_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace fcg {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_fail(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      config_fail("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_number(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj[key];
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) config_fail(std::string("'") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<long long>() < 0) config_fail(std::string("'") + key + "' must be non-negative");
    }
  } else {
    if (!v.is_number()) config_fail(std::string("'") + key + "' must be a number");
  }
  return v.get<T>();
}

SolveConfig parse_solver(const json& s) {
  require_keys(s, "solver",
               {"sigma1", "sigma2", "rho", "tol", "max_iter", "max_backtracks", "delta"});
  SolveConfig c;
  c.sigma1 = get_number(s, "sigma1", c.sigma1);
  c.sigma2 = get_number(s, "sigma2", c.sigma2);
  c.rho = get_number(s, "rho", c.rho);
  c.tol = get_number(s, "tol", c.tol);
  c.max_iter = get_number(s, "max_iter", c.max_iter);
  c.max_backtracks = get_number(s, "max_backtracks", c.max_backtracks);
  if (s.contains("delta")) {
    const auto& d = s["delta"];
    if (d.is_string() && d.get<std::string>() == "hessian") {
      c.delta_mode = DeltaMode::HessianEstimate;
    } else if (d.is_number()) {
      c.delta_mode = DeltaMode::Constant;
      c.delta = d.get<double>();
    } else {
      config_fail("solver.delta must be \"hessian\" or a number");
    }
  }
  c.validate();
  return c;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  require_keys(doc, "config", {"tensor", "bform", "sense", "trials", "seed", "threads", "solver"});
  RunConfig cfg;

  if (!doc.contains("tensor")) config_fail("missing 'tensor'");
  const auto& t = doc["tensor"];
  if (t.is_object() && t.contains("file")) {
    require_keys(t, "tensor", {"file"});
    if (!t["file"].is_string()) config_fail("tensor.file must be a string");
    cfg.tensor_file = t["file"].get<std::string>();
  } else {
    require_keys(t, "tensor", {"family", "order", "dim", "seed"});
    if (!t.contains("family") || !t["family"].is_string()) config_fail("tensor.family missing");
    const auto fam = parse_tensor_family(t["family"].get<std::string>());
    if (!fam) config_fail("unknown tensor family '" + t["family"].get<std::string>() + "'");
    GenSpec g;
    g.family = *fam;
    g.order = get_number(t, "order", 0);
    g.dim = get_number(t, "dim", 0);
    g.seed = get_number<std::uint64_t>(t, "seed", 0);
    cfg.tensor_gen = g;
  }

  if (doc.contains("bform")) {
    const auto& b = doc["bform"];
    require_keys(b, "bform", {"family", "order", "seed"});
    if (!b.contains("family") || !b["family"].is_string()) config_fail("bform.family missing");
    const auto fam = parse_bfamily(b["family"].get<std::string>());
    if (!fam) config_fail("unknown bform family '" + b["family"].get<std::string>() + "'");
    cfg.bfamily = *fam;
    cfg.border = get_number(b, "order", 0);
    cfg.bseed = get_number<std::uint64_t>(b, "seed", 0);
  }

  if (doc.contains("sense")) {
    const auto& s = doc["sense"];
    if (s == "max") {
      cfg.sense = Sense::Maximize;
    } else if (s == "min") {
      cfg.sense = Sense::Minimize;
    } else {
      config_fail("sense must be \"max\" or \"min\"");
    }
  }
  cfg.trials = get_number(doc, "trials", cfg.trials);
  if (cfg.trials < 1) config_fail("trials must be >= 1");
  cfg.seed = get_number<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.threads = get_number(doc, "threads", cfg.threads);
  if (cfg.threads < 1) config_fail("threads must be >= 1");
  if (doc.contains("solver")) {
    try {
      cfg.solver = parse_solver(doc["solver"]);
    } catch (const json::exception& e) {
      config_fail(e.what());
    }
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc;
  if (cfg.tensor_gen) {
    doc["tensor"] = {{"family", std::string(to_string(cfg.tensor_gen->family))},
                     {"order", cfg.tensor_gen->order},
                     {"dim", cfg.tensor_gen->dim},
                     {"seed", cfg.tensor_gen->seed}};
  } else {
    doc["tensor"] = {{"file", cfg.tensor_file}};
  }
  doc["bform"] = {{"family", std::string(to_string(cfg.bfamily))},
                  {"order", cfg.border},
                  {"seed", cfg.bseed}};
  doc["sense"] = to_string(cfg.sense);
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["threads"] = cfg.threads;
  json s = {{"sigma1", cfg.solver.sigma1}, {"sigma2", cfg.solver.sigma2},
            {"rho", cfg.solver.rho},       {"tol", cfg.solver.tol},
            {"max_iter", cfg.solver.max_iter}, {"max_backtracks", cfg.solver.max_backtracks}};
  if (cfg.solver.delta_mode == DeltaMode::Constant) {
    s["delta"] = cfg.solver.delta;
  } else {
    s["delta"] = "hessian";
  }
  doc["solver"] = std::move(s);
  return doc;
}

SymTensor build_tensor(const RunConfig& cfg) {
  if (cfg.tensor_gen) return gen_tensor(*cfg.tensor_gen);
  return load_tensor_file(cfg.tensor_file);
}

BForm build_bform(const RunConfig& cfg, int dim, int tensor_order) {
  BGenSpec spec;
  spec.family = cfg.bfamily;
  spec.dim = dim;
  spec.seed = cfg.bseed;
  if (cfg.border != 0) {
    spec.order = cfg.border;
  } else {
    spec.order = cfg.bfamily == BFamily::DiagPower ? tensor_order : 2;
  }
  return gen_bform(spec);
}

Objective build_objective(const RunConfig& cfg) {
  SymTensor a = build_tensor(cfg);
  BForm b = build_bform(cfg, a.dim(), a.order());
  return Objective(std::move(a), std::move(b), cfg.sense);
}

Vector trial_start(int dim, std::uint64_t seed, int trial) {
  Rng rng(seed, static_cast<std::uint64_t>(trial));
  Vector u(dim);
  for (int i = 0; i < dim; ++i) u[i] = rng.symmetric();
  return u;
}

std::vector<Cluster> cluster_eigenvalues(std::span<const TrialRecord> records, double tol) {
  std::vector<const TrialRecord*> ok;
  for (const auto& r : records) {
    if (r.converged) ok.push_back(&r);
  }
  std::stable_sort(ok.begin(), ok.end(),
                   [](const auto* a, const auto* b) { return a->lambda < b->lambda; });
  std::vector<Cluster> out;
  double prev = 0.0;
  for (const auto* r : ok) {
    if (out.empty() || r->lambda - prev > tol) out.emplace_back();
    Cluster& c = out.back();
    ++c.occ;
    c.lambda += r->lambda;
    c.mean_iter += r->iters;
    c.mean_backtracks += r->backtracks;
    c.mean_time_ms += r->time_ms;
    c.max_res = std::max(c.max_res, r->res);
    prev = r->lambda;
  }
  for (auto& c : out) {
    c.lambda /= c.occ;
    c.mean_iter /= c.occ;
    c.mean_backtracks /= c.occ;
    c.mean_time_ms /= c.occ;
  }
  return out;
}

namespace {

TrialRecord run_one(const Objective& obj, const RunConfig& cfg, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  const Vector u0 = trial_start(obj.dim(), cfg.seed, trial);
  const auto start = std::chrono::steady_clock::now();
  try {
    const SolveResult r = solve(obj, u0, cfg.solver);
    rec.lambda = r.lambda;
    rec.res = r.residual;
    rec.iters = r.iterations;
    rec.backtracks = r.total_backtracks;
    rec.converged = r.converged;
    rec.failure = r.failure;
    if (!r.converged && rec.failure.empty()) rec.failure = "max_iter reached";
  } catch (const Error& e) {
    rec.converged = false;
    rec.failure = std::string(to_string(e.code())) + ": " + e.what();
  }
  const auto stop = std::chrono::steady_clock::now();
  rec.time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

}  // namespace

Report run_trials(const RunConfig& cfg, const RecordSink& sink) {
  return run_trials(cfg, build_objective(cfg), sink);
}

Report run_trials(const RunConfig& cfg, const Objective& obj, const RecordSink& sink) {
  cfg.solver.validate();
  if (cfg.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
  Report report;
  report.trials = cfg.trials;
  report.records.resize(cfg.trials);

  const int workers = std::min(cfg.threads, cfg.trials);
  if (workers <= 1) {
    for (int t = 0; t < cfg.trials; ++t) {
      report.records[t] = run_one(obj, cfg, t);
      if (sink) sink(report.records[t]);
    }
  } else {
    std::vector<char> done(cfg.trials, 0);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next++; t < cfg.trials; t = next++) {
          TrialRecord rec = run_one(obj, cfg, t);
          std::lock_guard lock(mu);
          report.records[t] = std::move(rec);
          done[t] = 1;
          cv.notify_all();
        }
      });
    }
    // Emit in trial order as soon as each prefix is complete.
    for (int t = 0; t < cfg.trials; ++t) {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return done[t] != 0; });
      lock.unlock();
      if (sink) sink(report.records[t]);
    }
  }

  for (const auto& r : report.records) report.suc += r.converged ? 1 : 0;
  report.clusters = cluster_eigenvalues(report.records);
  return report;
}

json to_json(const TrialRecord& r) {
  json j = {{"trial", r.trial},   {"lambda", r.lambda},         {"res", r.res},
            {"iters", r.iters},   {"backtracks", r.backtracks}, {"time_ms", r.time_ms},
            {"converged", r.converged}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

json summary_json(const Report& report) {
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"lambda", c.lambda},
                        {"occ", c.occ},
                        {"iter", c.mean_iter},
                        {"backtracks", c.mean_backtracks},
                        {"time_ms", c.mean_time_ms},
                        {"res_max", c.max_res}});
  }
  json j = {{"trials", report.trials},
            {"suc", report.suc},
            {"failed", report.trials - report.suc},
            {"clusters", std::move(clusters)}};
  if (!report.clusters.empty()) {
    j["largest"] = report.clusters.back().lambda;
  } else {
    j["largest"] = nullptr;
  }
  return j;
}

}  // namespace fcg
