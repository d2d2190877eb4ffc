#include "fcg/fcg.h"

#include "error.hpp"
#include "experiment.hpp"
#include "generators.hpp"
#include "objective.hpp"
#include "oracle.hpp"
#include "solver.hpp"
#include "tensor_io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>

struct fcg_tensor {
  std::shared_ptr<const fcg::SymTensor> t;
};
struct fcg_bform {
  fcg::BForm b;
};
struct fcg_objective {
  fcg::Objective obj;
};
struct fcg_result {
  fcg::SolveResult r;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

fcg_status map_code(fcg::ErrorCode code) {
  using fcg::ErrorCode;
  switch (code) {
    case ErrorCode::IndexOutOfRange: return FCG_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::DuplicateEntry: return FCG_ERR_DUPLICATE_ENTRY;
    case ErrorCode::OrderMismatch: return FCG_ERR_ORDER_MISMATCH;
    case ErrorCode::DimensionMismatch: return FCG_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonPositiveForm: return FCG_ERR_NON_POSITIVE_FORM;
    case ErrorCode::ZeroVector: return FCG_ERR_ZERO_VECTOR;
    case ErrorCode::InfeasiblePoint: return FCG_ERR_INFEASIBLE_POINT;
    case ErrorCode::ZeroPreviousGradient: return FCG_ERR_ZERO_PREVIOUS_GRADIENT;
    case ErrorCode::ZeroDirection: return FCG_ERR_ZERO_DIRECTION;
    case ErrorCode::LineSearchFailed: return FCG_ERR_LINE_SEARCH_FAILED;
    case ErrorCode::InvalidSpec: return FCG_ERR_INVALID_SPEC;
    case ErrorCode::ParseError: return FCG_ERR_PARSE;
    case ErrorCode::ConfigError: return FCG_ERR_CONFIG;
    case ErrorCode::IoError: return FCG_ERR_IO;
    case ErrorCode::InvalidArgument: return FCG_ERR_INVALID_ARGUMENT;
  }
  return FCG_ERR_INTERNAL;
}

fcg_status fail(fcg_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
fcg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FCG_OK;
  } catch (const fcg::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(FCG_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FCG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FCG_ERR_INTERNAL, e.what());
  }
}

#define FCG_REQUIRE(cond, msg)                                                 \
  do {                                                                         \
    if (!(cond)) return fail(FCG_ERR_INVALID_ARGUMENT, msg);                   \
  } while (0)

fcg::Vector to_vector(const double* x, size_t n) {
  return Eigen::Map<const fcg::Vector>(x, static_cast<Eigen::Index>(n));
}

void copy_out(const fcg::Vector& v, double* out) {
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

char* to_c_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fcg::SolveConfig to_config(const fcg_solve_config& c) {
  fcg::SolveConfig s;
  s.sigma1 = c.sigma1;
  s.sigma2 = c.sigma2;
  s.rho = c.rho;
  s.tol = c.tol;
  s.max_iter = c.max_iter;
  s.max_backtracks = c.max_backtracks;
  s.delta_mode = c.delta_mode == FCG_DELTA_CONSTANT ? fcg::DeltaMode::Constant
                                                    : fcg::DeltaMode::HessianEstimate;
  s.delta = c.delta;
  return s;
}

json eigenset_json(const fcg::EigenSet& set) {
  json pairs = json::array();
  for (const auto& p : set.pairs) {
    pairs.push_back({{"lambda", p.lambda},
                     {"residual", p.residual},
                     {"x", std::vector<double>(p.x.data(), p.x.data() + p.x.size())}});
  }
  return {{"pairs", std::move(pairs)}};
}

fcg::GenSpec parse_gen_spec(const json& j) {
  fcg::RunConfig cfg = fcg::parse_run_config(json{{"tensor", j}});
  if (!cfg.tensor_gen) throw fcg::Error(fcg::ErrorCode::InvalidSpec, "tensor spec needs a family");
  return *cfg.tensor_gen;
}

}  // namespace

extern "C" {

const char* fcg_version(void) { return "1.0.0"; }

const char* fcg_status_string(fcg_status status) {
  switch (status) {
    case FCG_OK: return "ok";
    case FCG_ERR_INDEX_OUT_OF_RANGE: return "index out of range";
    case FCG_ERR_DUPLICATE_ENTRY: return "duplicate entry";
    case FCG_ERR_ORDER_MISMATCH: return "order mismatch";
    case FCG_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case FCG_ERR_NON_POSITIVE_FORM: return "non-positive form";
    case FCG_ERR_ZERO_VECTOR: return "zero vector";
    case FCG_ERR_INFEASIBLE_POINT: return "infeasible point";
    case FCG_ERR_ZERO_PREVIOUS_GRADIENT: return "zero previous gradient";
    case FCG_ERR_ZERO_DIRECTION: return "zero direction";
    case FCG_ERR_LINE_SEARCH_FAILED: return "line search failed";
    case FCG_ERR_INVALID_SPEC: return "invalid spec";
    case FCG_ERR_PARSE: return "parse error";
    case FCG_ERR_CONFIG: return "config error";
    case FCG_ERR_IO: return "i/o error";
    case FCG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FCG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fcg_last_error(void) { return g_last_error.c_str(); }

void fcg_string_free(char* s) { std::free(s); }

fcg_status fcg_tensor_create(int order, int dim, size_t count, const int32_t* indices,
                             const double* values, fcg_tensor** out) {
  FCG_REQUIRE(out != nullptr, "out is null");
  FCG_REQUIRE(count == 0 || (indices != nullptr && values != nullptr), "entry arrays are null");
  return guarded([&] {
    std::vector<fcg::TensorEntry> entries(count);
    for (size_t k = 0; k < count; ++k) {
      for (int p = 0; p < order; ++p) entries[k].index.push_back(indices[k * order + p] - 1);
      entries[k].value = values[k];
    }
    auto t = std::make_shared<const fcg::SymTensor>(fcg::SymTensor::dense(order, dim, entries));
    *out = new fcg_tensor{std::move(t)};
  });
}

fcg_status fcg_tensor_parse_json(const char* json_text, fcg_tensor** out) {
  FCG_REQUIRE(json_text != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new fcg_tensor{std::make_shared<const fcg::SymTensor>(fcg::parse_tensor_json(json_text))};
  });
}

fcg_status fcg_tensor_load(const char* path, fcg_tensor** out) {
  FCG_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new fcg_tensor{std::make_shared<const fcg::SymTensor>(fcg::load_tensor_file(path))};
  });
}

fcg_status fcg_tensor_generate(const char* spec_json, fcg_tensor** out) {
  FCG_REQUIRE(spec_json != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const fcg::GenSpec spec = parse_gen_spec(json::parse(spec_json));
    *out = new fcg_tensor{std::make_shared<const fcg::SymTensor>(fcg::gen_tensor(spec))};
  });
}

fcg_status fcg_tensor_to_json(const fcg_tensor* t, char** out) {
  FCG_REQUIRE(t != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = to_c_string(fcg::tensor_to_json(*t->t)); });
}

fcg_status fcg_tensor_save(const fcg_tensor* t, const char* path) {
  FCG_REQUIRE(t != nullptr && path != nullptr, "null argument");
  return guarded([&] { fcg::save_tensor_file(*t->t, path); });
}

void fcg_tensor_free(fcg_tensor* t) { delete t; }

int fcg_tensor_order(const fcg_tensor* t) { return t != nullptr ? t->t->order() : 0; }

int fcg_tensor_dim(const fcg_tensor* t) { return t != nullptr ? t->t->dim() : 0; }

fcg_status fcg_tensor_entry(const fcg_tensor* t, const int32_t* index, double* out) {
  FCG_REQUIRE(t != nullptr && index != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    std::vector<int> idx(t->t->order());
    for (int p = 0; p < t->t->order(); ++p) idx[p] = index[p] - 1;
    *out = t->t->entry(idx);
  });
}

fcg_status fcg_tensor_txm(const fcg_tensor* t, const double* x, size_t n, double* out) {
  FCG_REQUIRE(t != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = t->t->txm(to_vector(x, n)); });
}

fcg_status fcg_tensor_txm1(const fcg_tensor* t, const double* x, size_t n, double* out) {
  FCG_REQUIRE(t != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { copy_out(t->t->txm1(to_vector(x, n)), out); });
}

fcg_status fcg_tensor_txm2(const fcg_tensor* t, const double* x, size_t n, double* out) {
  FCG_REQUIRE(t != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const fcg::Matrix m = t->t->txm2(to_vector(x, n));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, m.rows(), m.cols()) = m;
  });
}

fcg_status fcg_bform_generate(const char* spec_json, int dim, fcg_bform** out) {
  FCG_REQUIRE(spec_json != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    json doc = {{"tensor", {{"family", "ex1"}}}, {"bform", json::parse(spec_json)}};
    const fcg::RunConfig cfg = fcg::parse_run_config(doc);
    // diag_power defaults its order to the tensor order; without a tensor
    // here the order must be given explicitly.
    if (cfg.bfamily == fcg::BFamily::DiagPower && cfg.border == 0) {
      throw fcg::Error(fcg::ErrorCode::InvalidSpec, "diag_power needs an explicit order");
    }
    *out = new fcg_bform{fcg::build_bform(cfg, dim, 2)};
  });
}

fcg_status fcg_bform_quad_form_power(const double* d, int dim, int order, fcg_bform** out) {
  FCG_REQUIRE(d != nullptr && out != nullptr && dim > 0, "null argument");
  return guarded([&] {
    fcg::Matrix m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>(d, dim, dim);
    *out = new fcg_bform{fcg::BForm::quad_form_power(std::move(m), order)};
  });
}

fcg_status fcg_bform_dense(const fcg_tensor* b, fcg_bform** out) {
  FCG_REQUIRE(b != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new fcg_bform{fcg::BForm::dense(*b->t)}; });
}

void fcg_bform_free(fcg_bform* b) { delete b; }

int fcg_bform_order(const fcg_bform* b) { return b != nullptr ? b->b.order() : 0; }

fcg_status fcg_bform_phi(const fcg_bform* b, const double* x, size_t n, double* out) {
  FCG_REQUIRE(b != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = b->b.phi(to_vector(x, n)); });
}

fcg_status fcg_bform_retract(const fcg_bform* b, const double* x, const double* d, size_t n,
                             double alpha, double* out) {
  FCG_REQUIRE(b != nullptr && x != nullptr && d != nullptr && out != nullptr, "null argument");
  return guarded([&] { copy_out(b->b.retract(to_vector(x, n), to_vector(d, n), alpha), out); });
}

fcg_status fcg_objective_create(const fcg_tensor* a, const fcg_bform* b, fcg_sense sense,
                                fcg_objective** out) {
  FCG_REQUIRE(a != nullptr && b != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new fcg_objective{fcg::Objective(
        a->t, b->b, sense == FCG_MAXIMIZE ? fcg::Sense::Maximize : fcg::Sense::Minimize)};
  });
}

void fcg_objective_free(fcg_objective* obj) { delete obj; }

int fcg_objective_dim(const fcg_objective* obj) { return obj != nullptr ? obj->obj.dim() : 0; }

fcg_status fcg_objective_normalize(const fcg_objective* obj, const double* x, size_t n,
                                   double* out) {
  FCG_REQUIRE(obj != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const fcg::Vector v = to_vector(x, n);
    if (v.size() != obj->obj.dim()) {
      throw fcg::Error(fcg::ErrorCode::DimensionMismatch, "vector length differs from dimension");
    }
    copy_out(obj->obj.bform().retract(v, fcg::Vector::Zero(v.size()), 0.0), out);
  });
}

fcg_status fcg_objective_residual(const fcg_objective* obj, const double* x, size_t n,
                                  double* out) {
  FCG_REQUIRE(obj != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = obj->obj.residual(to_vector(x, n)); });
}

fcg_status fcg_objective_feas_grad(const fcg_objective* obj, const double* x, size_t n,
                                   double* out) {
  FCG_REQUIRE(obj != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { copy_out(obj->obj.feas_grad(to_vector(x, n)), out); });
}

void fcg_solve_config_default(fcg_solve_config* cfg) {
  if (cfg == nullptr) return;
  const fcg::SolveConfig d;
  cfg->sigma1 = d.sigma1;
  cfg->sigma2 = d.sigma2;
  cfg->rho = d.rho;
  cfg->tol = d.tol;
  cfg->max_iter = d.max_iter;
  cfg->max_backtracks = d.max_backtracks;
  cfg->delta_mode = FCG_DELTA_HESSIAN;
  cfg->delta = d.delta;
}

fcg_status fcg_solve(const fcg_objective* obj, const double* x0, size_t n,
                     const fcg_solve_config* cfg, fcg_result** out) {
  FCG_REQUIRE(obj != nullptr && x0 != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    fcg_solve_config c;
    fcg_solve_config_default(&c);
    if (cfg != nullptr) c = *cfg;
    *out = new fcg_result{fcg::solve(obj->obj, to_vector(x0, n), to_config(c))};
  });
}

void fcg_result_free(fcg_result* r) { delete r; }

double fcg_result_lambda(const fcg_result* r) { return r != nullptr ? r->r.lambda : 0.0; }

double fcg_result_residual(const fcg_result* r) { return r != nullptr ? r->r.residual : 0.0; }

int fcg_result_iterations(const fcg_result* r) { return r != nullptr ? r->r.iterations : 0; }

int fcg_result_backtracks(const fcg_result* r) { return r != nullptr ? r->r.total_backtracks : 0; }

int fcg_result_converged(const fcg_result* r) { return r != nullptr && r->r.converged ? 1 : 0; }

const char* fcg_result_failure(const fcg_result* r) {
  return r != nullptr ? r->r.failure.c_str() : "";
}

fcg_status fcg_result_x(const fcg_result* r, double* out, size_t n) {
  FCG_REQUIRE(r != nullptr && out != nullptr, "null argument");
  if (n != static_cast<size_t>(r->r.x.size())) {
    return fail(FCG_ERR_DIMENSION_MISMATCH, "output buffer has the wrong length");
  }
  copy_out(r->r.x, out);
  return FCG_OK;
}

size_t fcg_result_trace_length(const fcg_result* r) { return r != nullptr ? r->r.trace.size() : 0; }

fcg_status fcg_result_trace_row(const fcg_result* r, size_t k, fcg_trace_row* out) {
  FCG_REQUIRE(r != nullptr && out != nullptr, "null argument");
  if (k >= r->r.trace.size()) return fail(FCG_ERR_INVALID_ARGUMENT, "trace row out of range");
  const auto& row = r->r.trace[k];
  *out = fcg_trace_row{row.k, row.lambda, row.grad_norm, row.residual, row.alpha, row.backtracks};
  return FCG_OK;
}

fcg_status fcg_fd_check_gradient(const fcg_objective* obj, const double* x, size_t n, double step,
                                 double* out) {
  FCG_REQUIRE(obj != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = fcg::fd_check_gradient(obj->obj, to_vector(x, n), step); });
}

fcg_status fcg_fd_check_hessian(const fcg_objective* obj, const double* x, size_t n, double step,
                                double* out) {
  FCG_REQUIRE(obj != nullptr && x != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = fcg::fd_check_hessian(obj->obj, to_vector(x, n), step); });
}

fcg_status fcg_oracle_enumerate_n2(const fcg_objective* obj, int grid, char** out_json) {
  FCG_REQUIRE(obj != nullptr && out_json != nullptr, "null argument");
  return guarded(
      [&] { *out_json = to_c_string(eigenset_json(fcg::enumerate_n2(obj->obj, grid)).dump()); });
}

fcg_status fcg_oracle_enumerate_n3(const fcg_objective* obj, int starts, uint64_t seed,
                                   char** out_json) {
  FCG_REQUIRE(obj != nullptr && out_json != nullptr, "null argument");
  return guarded([&] {
    *out_json = to_c_string(eigenset_json(fcg::enumerate_n3(obj->obj, starts, seed)).dump());
  });
}

fcg_status fcg_trial_start(int dim, uint64_t seed, int trial, double* out) {
  FCG_REQUIRE(out != nullptr && dim > 0 && trial >= 0, "invalid argument");
  return guarded([&] { copy_out(fcg::trial_start(dim, seed, trial), out); });
}

fcg_status fcg_bench_run(const char* config_json, fcg_record_callback callback, void* user,
                         char** summary_json, int* failed_trials) {
  FCG_REQUIRE(config_json != nullptr, "null argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(config_json);
    } catch (const json::parse_error& e) {
      throw fcg::Error(fcg::ErrorCode::ConfigError, e.what());
    }
    const fcg::RunConfig cfg = fcg::parse_run_config(doc);
    fcg::RecordSink sink;
    if (callback != nullptr) {
      sink = [&](const fcg::TrialRecord& r) { callback(fcg::to_json(r).dump().c_str(), user); };
    }
    const fcg::Report report = fcg::run_trials(cfg, sink);
    if (failed_trials != nullptr) *failed_trials = report.trials - report.suc;
    if (summary_json != nullptr) *summary_json = to_c_string(fcg::summary_json(report).dump());
  });
}

fcg_status fcg_objective_from_config(const char* config_json, fcg_objective** out) {
  FCG_REQUIRE(config_json != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(config_json);
    } catch (const json::parse_error& e) {
      throw fcg::Error(fcg::ErrorCode::ConfigError, e.what());
    }
    *out = new fcg_objective{fcg::build_objective(fcg::parse_run_config(doc))};
  });
}

fcg_status fcg_config_normalize(const char* config_json, char** out_json) {
  FCG_REQUIRE(config_json != nullptr && out_json != nullptr, "null argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(config_json);
    } catch (const json::parse_error& e) {
      throw fcg::Error(fcg::ErrorCode::ConfigError, e.what());
    }
    *out_json = to_c_string(fcg::to_json(fcg::parse_run_config(doc)).dump());
  });
}

}  // extern "C"
