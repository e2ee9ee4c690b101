#include "vrada/vrada.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "core/baselines.hpp"
#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/objective.hpp"
#include "core/reference.hpp"
#include "core/schedule.hpp"
#include "core/trace.hpp"
#include "core/vrada.hpp"

struct vrada_dataset {
  std::shared_ptr<vrada::SparseDataset> ds;
};

struct vrada_problem {
  std::unique_ptr<vrada::CompositeObjective> obj;
};

struct vrada_trace {
  vrada::SolverTrace trace;
  std::string status_name;
};

namespace {

thread_local std::string g_last_error;

vrada_status fail(vrada_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
vrada_status guarded(Fn&& fn) {
  try {
    fn();
    return VRADA_OK;
  } catch (const vrada::ShapeError& e) {
    return fail(VRADA_ERR_SHAPE, e.what());
  } catch (const vrada::IndexError& e) {
    return fail(VRADA_ERR_INDEX, e.what());
  } catch (const vrada::NumericError& e) {
    return fail(VRADA_ERR_NUMERIC, e.what());
  } catch (const vrada::ParseError& e) {
    return fail(VRADA_ERR_PARSE, e.what());
  } catch (const vrada::AuditError& e) {
    return fail(VRADA_ERR_AUDIT, e.what());
  } catch (const vrada::TuningError& e) {
    return fail(VRADA_ERR_TUNING, e.what());
  } catch (const vrada::ReferenceError& e) {
    return fail(VRADA_ERR_REFERENCE, e.what());
  } catch (const vrada::ConfigError& e) {
    return fail(VRADA_ERR_CONFIG, e.what());
  } catch (const vrada::IoError& e) {
    return fail(VRADA_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VRADA_ERR_UNKNOWN, e.what());
  }
}

vrada_status require(bool ok, const char* msg) {
  return ok ? VRADA_OK : fail(VRADA_ERR_INVALID_ARG, msg);
}

vrada::SolverOptions convert_options(const vrada_options* o,
                                     const vrada_problem* p) {
  vrada::SolverOptions s;
  s.m = o->m;
  s.L_param = o->L_param;
  s.epochs = static_cast<int>(o->epochs);
  s.seed = o->seed;
  s.gap_target = o->gap_target;
  s.f_star = o->f_star;
  s.deterministic = o->deterministic != 0;
  s.audit = o->audit != 0;
  if (o->svrg_step_divisor > 0) s.svrg_step_divisor = o->svrg_step_divisor;
  if (o->svrg_anchor) {
    const std::string a = o->svrg_anchor;
    if (a == "uniform")
      s.svrg_anchor = vrada::SvrgAnchor::UniformIterate;
    else if (a == "last")
      s.svrg_anchor = vrada::SvrgAnchor::LastIterate;
    else
      throw vrada::ConfigError("svrg_anchor must be 'uniform' or 'last'");
  }
  const std::size_t d = static_cast<std::size_t>(p->obj->param_dim());
  if (o->x0) s.x0.assign(o->x0, o->x0 + d);
  if (o->x_star) s.x_star.assign(o->x_star, o->x_star + d);
  return s;
}

}  // namespace

extern "C" {

const char* vrada_status_name(vrada_status status) {
  switch (status) {
    case VRADA_OK: return "ok";
    case VRADA_ERR_INVALID_ARG: return "invalid-argument";
    case VRADA_ERR_SHAPE: return "shape-error";
    case VRADA_ERR_INDEX: return "index-error";
    case VRADA_ERR_NUMERIC: return "numeric-error";
    case VRADA_ERR_PARSE: return "parse-error";
    case VRADA_ERR_AUDIT: return "audit-failure";
    case VRADA_ERR_CONFIG: return "config-error";
    case VRADA_ERR_TUNING: return "tuning-failure";
    case VRADA_ERR_REFERENCE: return "reference-inconsistency";
    case VRADA_ERR_IO: return "io-error";
    case VRADA_ERR_UNKNOWN: return "unknown-error";
  }
  return "?";
}

const char* vrada_last_error(void) { return g_last_error.c_str(); }

vrada_status vrada_dataset_open(const char* path, vrada_dataset** out) {
  if (auto st = require(path && out, "path and out must be non-null")) return st;
  return guarded([&] {
    auto ds = std::make_shared<vrada::SparseDataset>(
        vrada::parse_libsvm_file(path));
    *out = new vrada_dataset{std::move(ds)};
  });
}

vrada_status vrada_dataset_from_string(const char* text, vrada_dataset** out) {
  if (auto st = require(text && out, "text and out must be non-null")) return st;
  return guarded([&] {
    auto ds = std::make_shared<vrada::SparseDataset>(
        vrada::parse_libsvm_string(text));
    *out = new vrada_dataset{std::move(ds)};
  });
}

vrada_status vrada_dataset_synth_ridge(int64_t n, int64_t d, uint64_t seed,
                                       vrada_dataset** out) {
  if (auto st = require(out != nullptr, "out must be non-null")) return st;
  return guarded([&] {
    auto ds = std::make_shared<vrada::SparseDataset>(vrada::synth_ridge_data(
        static_cast<int>(n), static_cast<int>(d), seed));
    *out = new vrada_dataset{std::move(ds)};
  });
}

vrada_status vrada_dataset_synth_binary(int64_t n, int64_t d, int64_t nnz,
                                        uint64_t seed, vrada_dataset** out) {
  if (auto st = require(out != nullptr, "out must be non-null")) return st;
  return guarded([&] {
    auto ds = std::make_shared<vrada::SparseDataset>(
        vrada::synth_binary_classification(static_cast<int>(n),
                                           static_cast<int>(d),
                                           static_cast<int>(nnz), seed));
    *out = new vrada_dataset{std::move(ds)};
  });
}

vrada_status vrada_dataset_normalize_rows(vrada_dataset* ds) {
  if (auto st = require(ds != nullptr, "dataset must be non-null")) return st;
  return guarded([&] { vrada::normalize_rows(*ds->ds); });
}

vrada_status vrada_dataset_add_bias(vrada_dataset* ds) {
  if (auto st = require(ds != nullptr, "dataset must be non-null")) return st;
  return guarded([&] { vrada::add_bias_column(*ds->ds); });
}

vrada_status vrada_dataset_override_dim(vrada_dataset* ds, int64_t d) {
  if (auto st = require(ds != nullptr, "dataset must be non-null")) return st;
  return guarded([&] { vrada::override_dim(*ds->ds, static_cast<int>(d)); });
}

vrada_status vrada_dataset_save(const vrada_dataset* ds, const char* path) {
  if (auto st = require(ds && path, "dataset and path must be non-null"))
    return st;
  return guarded([&] { vrada::write_libsvm_file(*ds->ds, path); });
}

int64_t vrada_dataset_rows(const vrada_dataset* ds) { return ds->ds->n; }
int64_t vrada_dataset_dim(const vrada_dataset* ds) { return ds->ds->d; }
int64_t vrada_dataset_classes(const vrada_dataset* ds) {
  return ds->ds->class_count;
}
int vrada_dataset_normalized(const vrada_dataset* ds) {
  return ds->ds->normalized ? 1 : 0;
}
int64_t vrada_dataset_zero_rows(const vrada_dataset* ds) {
  return ds->ds->zero_rows;
}

vrada_status vrada_dataset_class_label(const vrada_dataset* ds, int64_t cls,
                                       double* out) {
  if (auto st = require(ds && out, "dataset and out must be non-null")) return st;
  if (cls < 0 || cls >= static_cast<int64_t>(ds->ds->label_values.size()))
    return fail(VRADA_ERR_INDEX, "class index out of range");
  *out = ds->ds->label_values[cls];
  return VRADA_OK;
}

void vrada_dataset_free(vrada_dataset* ds) { delete ds; }

vrada_status vrada_problem_create(const vrada_dataset* ds, const char* loss,
                                  double lambda2, double lambda1,
                                  vrada_problem** out) {
  if (auto st = require(ds && loss && out, "ds, loss, out must be non-null"))
    return st;
  return guarded([&] {
    const vrada::LossSpec spec = vrada::parse_loss_kind(loss, *ds->ds);
    vrada::Regularizer reg = vrada::Regularizer::zero();
    if (lambda2 > 0 && lambda1 > 0)
      reg = vrada::Regularizer::elastic(lambda2, lambda1);
    else if (lambda2 > 0)
      reg = vrada::Regularizer::l2(lambda2);
    else if (lambda1 > 0)
      reg = vrada::Regularizer::l1(lambda1);
    else if (lambda2 < 0 || lambda1 < 0)
      throw vrada::ConfigError("regularizer weights must be nonnegative");
    auto obj = std::make_unique<vrada::CompositeObjective>(ds->ds, spec,
                                                           std::move(reg));
    *out = new vrada_problem{std::move(obj)};
  });
}

int64_t vrada_problem_dim(const vrada_problem* p) { return p->obj->param_dim(); }
int64_t vrada_problem_components(const vrada_problem* p) {
  return p->obj->components();
}
double vrada_problem_smoothness(const vrada_problem* p) {
  return p->obj->constants().L;
}
double vrada_problem_strong_convexity(const vrada_problem* p) {
  return p->obj->constants().sigma;
}
int vrada_problem_smoothness_warned(const vrada_problem* p) {
  return p->obj->constants().smoothness_warned ? 1 : 0;
}

vrada_status vrada_problem_value(const vrada_problem* p, const double* x,
                                 int64_t len, double* out) {
  if (auto st = require(p && x && out, "p, x, out must be non-null")) return st;
  return guarded([&] {
    *out = p->obj->value(std::span<const double>(x, static_cast<std::size_t>(len)));
  });
}

vrada_status vrada_problem_grad(const vrada_problem* p, const double* x,
                                int64_t len, double* smooth_value,
                                double* grad_out) {
  if (auto st = require(p && x && grad_out, "p, x, grad_out must be non-null"))
    return st;
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(len);
    const double v = p->obj->full_value_grad(std::span<const double>(x, n),
                                             std::span<double>(grad_out, n));
    if (smooth_value) *smooth_value = v;
  });
}

void vrada_problem_free(vrada_problem* p) { delete p; }

void vrada_options_init(vrada_options* opts) {
  std::memset(opts, 0, sizeof(*opts));
  opts->solver = "vrada";
  opts->epochs = 50;
  opts->gap_target = std::nan("");
  opts->f_star = std::nan("");
  opts->svrg_anchor = "uniform";
}

vrada_status vrada_solve(const vrada_problem* p, const vrada_options* opts,
                         vrada_trace** out) {
  if (auto st = require(p && opts && opts->solver && out,
                        "p, opts, opts->solver, out must be non-null"))
    return st;
  return guarded([&] {
    vrada::SolverOptions s = convert_options(opts, p);
    auto t = std::make_unique<vrada_trace>();
    t->trace = vrada::run_solver(opts->solver, *p->obj, s);
    t->status_name = vrada::run_status_name(t->trace.status);
    *out = t.release();
  });
}

int64_t vrada_trace_rows(const vrada_trace* t) {
  return static_cast<int64_t>(t->trace.rows.size());
}

vrada_status vrada_trace_row_at(const vrada_trace* t, int64_t i,
                                vrada_trace_row* out) {
  if (auto st = require(t && out, "t and out must be non-null")) return st;
  if (i < 0 || i >= static_cast<int64_t>(t->trace.rows.size()))
    return fail(VRADA_ERR_INDEX, "trace row index out of range");
  const vrada::TraceRow& r = t->trace.rows[i];
  *out = {r.epoch, r.passes, r.elapsed_ms, r.objective, r.gap, r.a_s};
  return VRADA_OK;
}

const char* vrada_trace_status(const vrada_trace* t) {
  return t->status_name.c_str();
}

const char* vrada_trace_solver(const vrada_trace* t) {
  return t->trace.solver_id.c_str();
}

uint64_t vrada_trace_seed(const vrada_trace* t) { return t->trace.seed; }

int64_t vrada_trace_header_count(const vrada_trace* t) {
  return static_cast<int64_t>(t->trace.header.size());
}

vrada_status vrada_trace_header_at(const vrada_trace* t, int64_t i,
                                   const char** key, const char** value) {
  if (auto st = require(t && key && value, "t, key, value must be non-null"))
    return st;
  if (i < 0 || i >= static_cast<int64_t>(t->trace.header.size()))
    return fail(VRADA_ERR_INDEX, "header index out of range");
  *key = t->trace.header[i].first.c_str();
  *value = t->trace.header[i].second.c_str();
  return VRADA_OK;
}

vrada_status vrada_trace_final_x(const vrada_trace* t, double* out,
                                 int64_t len) {
  if (auto st = require(t && out, "t and out must be non-null")) return st;
  if (len != static_cast<int64_t>(t->trace.final_x.size()))
    return fail(VRADA_ERR_SHAPE, "final_x length mismatch");
  std::memcpy(out, t->trace.final_x.data(), sizeof(double) * len);
  return VRADA_OK;
}

void vrada_trace_free(vrada_trace* t) { delete t; }

const char* vrada_trace_csv_header(void) {
  return "solver,seed,epoch,passes,elapsed_ms,objective,gap,A_s";
}

vrada_status vrada_trace_csv(const vrada_trace* t, char** out) {
  if (auto st = require(t && out, "t and out must be non-null")) return st;
  return guarded([&] {
    const std::string rows = vrada::csv_rows(t->trace);
    *out = static_cast<char*>(std::malloc(rows.size() + 1));
    std::memcpy(*out, rows.c_str(), rows.size() + 1);
  });
}

vrada_status vrada_ridge_closed_form(const vrada_dataset* ds, double sigma,
                                     double* f_star, double* x_star,
                                     int* unique) {
  if (auto st = require(ds && f_star, "ds and f_star must be non-null"))
    return st;
  return guarded([&] {
    vrada::RidgeSolution sol = vrada::solve_ridge_exact(*ds->ds, sigma);
    *f_star = sol.f_star;
    if (x_star)
      std::memcpy(x_star, sol.x_star.data(),
                  sizeof(double) * sol.x_star.size());
    if (unique) *unique = sol.unique ? 1 : 0;
  });
}

vrada_status vrada_reference_compute(const vrada_problem* p, double* f_star,
                                     double* x_star, int* attained) {
  if (auto st = require(p && f_star, "p and f_star must be non-null")) return st;
  return guarded([&] {
    vrada::ReferenceSolution ref = vrada::compute_reference(*p->obj);
    *f_star = ref.f_star;
    if (x_star)
      std::memcpy(x_star, ref.x_star.data(),
                  sizeof(double) * ref.x_star.size());
    if (attained) *attained = ref.attained ? 1 : 0;
  });
}

vrada_status vrada_reference_save(const char* path, double f_star,
                                  const double* x_star, int64_t dim) {
  if (auto st = require(path && x_star, "path and x_star must be non-null"))
    return st;
  return guarded([&] {
    vrada::ReferenceSolution ref;
    ref.f_star = f_star;
    ref.x_star.assign(x_star, x_star + dim);
    vrada::write_reference_file(ref, path);
  });
}

vrada_status vrada_reference_load(const char* path, int64_t dim, double* f_star,
                                  double* x_star, int* found) {
  if (auto st =
          require(path && f_star && x_star && found, "args must be non-null"))
    return st;
  return guarded([&] {
    vrada::Vec x;
    double f = 0.0;
    const bool ok =
        vrada::load_reference_file(path, static_cast<int>(dim), &f, &x);
    *found = ok ? 1 : 0;
    if (ok) {
      *f_star = f;
      std::memcpy(x_star, x.data(), sizeof(double) * x.size());
    }
  });
}

vrada_status vrada_tune(const vrada_problem* p, const vrada_options* base,
                        const double* grid, int64_t grid_len, double* best_L,
                        double* final_objectives) {
  if (auto st = require(p && base && base->solver && grid && best_L &&
                            grid_len > 0,
                        "p, base, grid, best_L must be valid"))
    return st;
  return guarded([&] {
    vrada::SolverOptions s = convert_options(base, p);
    vrada::TuneResult r = vrada::tune_L(
        *p->obj, base->solver, s,
        std::span<const double>(grid, static_cast<std::size_t>(grid_len)));
    *best_L = r.best_L;
    if (final_objectives)
      for (int64_t i = 0; i < grid_len; ++i)
        final_objectives[i] = r.outcomes[i].final_objective;
  });
}

vrada_status vrada_schedule_audit(int64_t m, double L, double sigma,
                                  int64_t epochs, char** report) {
  return guarded([&] {
    vrada::EpochSchedule sched(static_cast<int>(m), L, sigma);
    for (int64_t s = 2; s <= epochs; ++s)
      if (!sched.try_extend()) break;
    vrada::ScheduleAuditReport rep = sched.audit();
    if (report) {
      const std::string table = rep.to_table();
      *report = static_cast<char*>(std::malloc(table.size() + 1));
      std::memcpy(*report, table.c_str(), table.size() + 1);
    }
  });
}

void vrada_string_free(char* s) { std::free(s); }

}  // extern "C"
