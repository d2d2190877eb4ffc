// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "experiment.hpp"
#include "generators.hpp"
#include "objective.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fcg;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double round4(double v) { return std::round(v * 1e4) / 1e4; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(7);
  os << v;
  return os.str();
}

RunConfig paper_run(TensorFamily family, int order, int dim, BFamily bfamily, int border,
                    int trials) {
  RunConfig cfg;
  cfg.tensor_gen = GenSpec{family, order, dim, 0};
  cfg.bfamily = bfamily;
  cfg.border = border;
  cfg.sense = Sense::Maximize;
  cfg.trials = trials;
  cfg.seed = 1;
  return cfg;
}

double max_iter_mean(const Report& r) {
  double worst = 0.0;
  for (const auto& c : r.clusters) worst = std::max(worst, c.mean_iter);
  return worst;
}

double max_res(const Report& r) {
  double worst = 0.0;
  for (const auto& rec : r.records) worst = std::max(worst, rec.res);
  return worst;
}

std::string values_of(const Report& r) {
  std::string out = "{";
  for (std::size_t k = 0; k < r.clusters.size(); ++k) {
    if (k) out += ", ";
    out += fmt(round4(r.clusters[k].lambda));
  }
  return out + "}";
}

Outcome table_run(TensorFamily family, BFamily bfamily, int border, const std::set<double>& want,
                  double iter_cap, double time_cap_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = run_trials(paper_run(family, 0, 0, bfamily, border, 1000));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::set<double> got;
  for (const auto& c : r.clusters) got.insert(round4(c.lambda));
  const double iters = max_iter_mean(r);
  const bool pass = got == want && r.suc == 1000 && max_res(r) <= 1e-8 && iters <= iter_cap &&
                    secs < time_cap_s;
  return {pass, "suc " + std::to_string(r.suc) + "/1000, values " + values_of(r) +
                    ", worst mean iters " + fmt(iters) + ", max res " + fmt(max_res(r)) + ", " +
                    fmt(secs) + " s"};
}

Outcome largest_run(TensorFamily family, int order, int dim, double want, double rel_tol,
                    double time_cap_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = run_trials(paper_run(family, order, dim, BFamily::Identity2, 0, 100));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double largest = r.clusters.empty() ? NAN : r.clusters.back().lambda;
  const bool close = std::abs(largest - want) <= rel_tol * std::abs(want);
  const bool pass = r.suc == 100 && close && secs < time_cap_s;
  return {pass, "suc " + std::to_string(r.suc) + "/100, largest " + fmt(largest) + " (target " +
                    fmt(want) + "), " + fmt(secs) + " s"};
}

Outcome criterion1() {
  return table_run(TensorFamily::Ex1, BFamily::Identity2, 0, {-0.0006, 0.0180, 0.4306, 0.8730},
                   20.0, 10.0);
}

Outcome criterion2() {
  return table_run(TensorFamily::Ex6, BFamily::DiagPower, 4, {0.8944, 1.9316, 2.3129}, 25.0, 10.0);
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = run_trials(paper_run(TensorFamily::Ex2, 4, 20, BFamily::Identity2, 0, 100));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double largest = r.clusters.empty() ? NAN : r.clusters.back().lambda;
  const bool pass = r.suc == 100 && std::abs(largest - 101.8) <= 0.1 && secs < 60.0;
  return {pass, "suc " + std::to_string(r.suc) + "/100, largest " + fmt(largest) + ", " +
                    fmt(secs) + " s"};
}

Outcome criterion4() { return largest_run(TensorFamily::Ex4, 3, 100000, 1.275e5, 5e-3, 60.0); }

Outcome criterion5() { return largest_run(TensorFamily::Ex5, 6, 100, 1.112e6, 5e-3, 30.0); }

Outcome criterion6() {
  const SolveConfig cfg;
  int suc = 0;
  int worst_iter = 0;
  for (int t = 0; t < 100; ++t) {
    const Objective obj(gen_tensor({TensorFamily::Ex3, 3, 50, static_cast<std::uint64_t>(t)}),
                        BForm::identity2(50), Sense::Maximize);
    const SolveResult r = solve(obj, trial_start(50, 1, t), cfg);
    if (r.converged && r.iterations <= 500) ++suc;
    worst_iter = std::max(worst_iter, r.iterations);
  }
  return {suc == 100,
          "suc " + std::to_string(suc) + "/100, max iters " + std::to_string(worst_iter)};
}

// ||A x^{m-1} - lambda (x^T D x)^{m'/2-1} D x|| / max(1, |lambda|)
double d_eigen_defect(const SymTensor& a, const Matrix& d, int border, const Vector& x,
                      double lambda) {
  const Vector dx = d * x;
  const double q = x.dot(dx);
  const Vector rhs = lambda * std::pow(q, border / 2.0 - 1.0) * dx;
  return (a.txm1(x) - rhs).norm() / std::max(1.0, std::abs(lambda));
}

Outcome criterion7() {
  const SolveConfig cfg;
  std::string detail;
  bool pass = true;
  for (int border : {2, 4}) {
    for (int order : {5, 6}) {
      const Matrix d = ex7_matrix(10, 7);
      const BForm b = gen_bform({BFamily::Ex7, border, 10, 7});
      int suc = 0;
      double worst = 0.0;
      for (int t = 0; t < 100; ++t) {
        const SymTensor a = gen_tensor({TensorFamily::Ex3, order, 10, static_cast<std::uint64_t>(t)});
        const Objective obj(a, b, Sense::Maximize);
        const SolveResult r = solve(obj, trial_start(10, 1, t), cfg);
        const double defect = d_eigen_defect(a, d, border, r.x, r.lambda);
        worst = std::max(worst, defect);
        if (r.converged && defect <= 1e-8) ++suc;
      }
      pass = pass && suc == 100;
      if (!detail.empty()) detail += "; ";
      detail += "m'=" + std::to_string(border) + " m=" + std::to_string(order) + " suc " +
                std::to_string(suc) + "/100 max defect " + fmt(worst);
    }
  }
  return {pass, detail};
}

Outcome criterion8() {
  const SolveConfig cfg;
  int failures = 0;
  std::string first;
  auto check = [&](bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  };
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 3 + inst % 4;
    const int order = 3 + (inst / 4) % 2;
    const std::uint64_t seed = 500 + inst;
    BForm b = BForm::identity2(n);
    switch (inst % 4) {
      case 1: b = BForm::diag_power(n, 4); break;
      case 2: b = gen_bform({BFamily::Ex7, 4, n, seed}); break;
      case 3: b = gen_bform({BFamily::Ex8, 4, n, seed}); break;
      default: break;
    }
    const Sense sense = inst % 2 == 0 ? Sense::Maximize : Sense::Minimize;
    const Objective obj(gen_tensor({TensorFamily::Ex3, order, n, seed}), b, sense);
    const std::string tag = "instance " + std::to_string(inst);

    const SolveResult r = solve(obj, trial_start(n, seed, 0), cfg, [&](const IterateState& s) {
      check(std::abs(b.phi(s.x) - 1.0) <= 1e-10, tag + " feasibility");
      const double ff = s.F.squaredNorm();
      check(std::abs(s.d.dot(s.F) + ff) <= 1e-12 * ff, tag + " descent identity");
      const long double lhs = obj.h_extended(b.retract(s.x, s.d, s.alpha));
      const long double rhs = s.h + static_cast<long double>(cfg.sigma1) * s.alpha * s.F.dot(s.d) -
                              static_cast<long double>(cfg.sigma2) * s.alpha * s.alpha *
                                  s.d.squaredNorm();
      check(lhs <= rhs, tag + " armijo");
      const Matrix p = projector(b, s.x);
      check((p * p - p).cwiseAbs().maxCoeff() <= 1e-12, tag + " projector");
    });
    check(r.converged, tag + " converged");
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const double step = r.trace[k].lambda - r.trace[k - 1].lambda;
      check(sense == Sense::Maximize ? step >= 0.0 : step <= 0.0, tag + " monotone");
    }
    const Vector x = b.retract(trial_start(n, seed, 1), Vector::Zero(n), 0.0);
    check(fd_check_gradient(obj, x, 1e-5) <= 1e-5, tag + " fd gradient");
    check(fd_check_hessian(obj, x, 1e-5) <= 1e-4, tag + " fd hessian");
  }
  return {failures == 0, std::to_string(failures) + " violations over 50 instances" +
                             (first.empty() ? "" : ", first: " + first)};
}

bool matches_some(const std::vector<double>& values, double v, double tol) {
  return std::any_of(values.begin(), values.end(), [&](double w) { return std::abs(v - w) <= tol; });
}

Outcome criterion9() {
  std::vector<std::string> problems;

  // Matrix case against a dense symmetric eigensolver.
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    Matrix a(2, 2);
    a(0, 0) = rng.symmetric();
    a(1, 1) = rng.symmetric();
    a(0, 1) = a(1, 0) = rng.symmetric();
    const std::vector<TensorEntry> entries{{{0, 0}, a(0, 0)}, {{0, 1}, a(0, 1)}, {{1, 1}, a(1, 1)}};
    const SymTensor t = SymTensor::dense(2, 2, entries);
    const auto values = enumerate_n2(Objective(t, BForm::identity2(2))).eigenvalues();
    const Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (values.size() != 2 || std::abs(values[0] - es.eigenvalues()[0]) > 1e-8 ||
        std::abs(values[1] - es.eigenvalues()[1]) > 1e-8) {
      problems.push_back("matrix case " + std::to_string(k));
    }
  }

  const Objective ex1(gen_tensor({TensorFamily::Ex1, 0, 0, 0}), BForm::identity2(3),
                      Sense::Maximize);
  const auto ex1_values = enumerate_n3(ex1, 200, 1).eigenvalues();
  for (double want : {-0.0006, 0.0180, 0.4306, 0.8730}) {
    if (!std::any_of(ex1_values.begin(), ex1_values.end(),
                     [&](double v) { return round4(v) == want; })) {
      problems.push_back("Ex1 oracle missing " + fmt(want));
    }
  }

  // Solver outputs on small instances against the oracle sets.
  struct Case {
    std::string name;
    Objective obj;
    std::vector<double> oracle;
  };
  std::vector<Case> cases;
  cases.push_back({"ex1", ex1, ex1_values});
  const Objective ex6(gen_tensor({TensorFamily::Ex6, 0, 0, 0}), BForm::diag_power(3, 4),
                      Sense::Maximize);
  cases.push_back({"ex6", ex6, enumerate_n3(ex6, 200, 2).eigenvalues()});
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Objective obj(gen_tensor({TensorFamily::Ex3, 3 + static_cast<int>(s), 2, 900 + s}),
                        s % 2 ? BForm::diag_power(2, 4) : BForm::identity2(2), Sense::Maximize);
    cases.push_back({"n2 seed " + std::to_string(s), obj, enumerate_n2(obj).eigenvalues()});
  }
  int solves = 0;
  for (const auto& c : cases) {
    for (Sense sense : {Sense::Maximize, Sense::Minimize}) {
      const Objective obj = c.obj.with_sense(sense);
      for (int t = 0; t < 50; ++t) {
        const SolveResult r = solve(obj, trial_start(obj.dim(), 3, t));
        ++solves;
        if (!r.converged || !matches_some(c.oracle, r.lambda, 1e-6)) {
          problems.push_back(c.name + " trial " + std::to_string(t) + " lambda " + fmt(r.lambda));
        }
      }
    }
  }
  std::string detail = std::to_string(problems.size()) + " mismatches (" + std::to_string(solves) +
                       " solves, 20 matrix cases)";
  if (!problems.empty()) detail += ", first: " + problems.front();
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9,
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
