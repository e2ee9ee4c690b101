#include "core/baselines.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/vrada.hpp"

namespace vrada {

namespace {

constexpr double kDivergenceGuard = 1e6;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared epoch loop: trace rows, pass accounting, divergence and gap-target
// handling. The solver body advances its state by one epoch and returns the
// new anchor point.
SolverTrace run_epochs(const CompositeObjective& obj, const SolverOptions& opts,
                       const std::string& id, const Vec& x0, int m,
                       const std::function<const Vec&(int)>& epoch_body,
                       SolverTrace trace) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = obj.components();
  const double passes_per_epoch = (n + 2.0 * m) / n;
  const bool have_fstar = !std::isnan(opts.f_star);
  trace.solver_id = id;
  trace.seed = opts.seed;

  auto emit = [&](int epoch, double passes, double objective) {
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    const double gap = have_fstar ? objective - opts.f_star : kNaN;
    trace.rows.push_back({epoch, passes, ms, objective, gap, kNaN});
    return gap;
  };

  const double f0 = obj.value(x0);
  double gap = emit(0, 0.0, f0);
  trace.status = RunStatus::EpochBudget;
  if (!std::isnan(opts.gap_target) && gap <= opts.gap_target) {
    trace.status = RunStatus::GapTarget;
    trace.final_x = x0;
    return trace;
  }

  double passes = 0.0;
  double f_prev = f0;
  int stall = 0;
  const Vec* last = &x0;
  for (int s = 1; s <= opts.epochs; ++s) {
    double f_cur = 0.0;
    try {
      const Vec& anchor = epoch_body(s);
      last = &anchor;
      f_cur = obj.value(anchor);
    } catch (const NumericError&) {
      trace.status = RunStatus::Diverged;
      break;
    }
    passes += passes_per_epoch;
    gap = emit(s, passes, f_cur);

    if (f_cur > kDivergenceGuard * std::max(1.0, f0)) {
      trace.status = RunStatus::Diverged;
      break;
    }
    if (!std::isnan(opts.gap_target)) {
      if (gap <= opts.gap_target) {
        trace.status = RunStatus::GapTarget;
        break;
      }
      if (std::fabs(f_cur - f_prev) <=
          4.0 * std::numeric_limits<double>::epsilon() *
              std::max(1.0, std::fabs(f_cur))) {
        if (++stall >= 3) {
          trace.status = RunStatus::PrecisionLimit;
          break;
        }
      } else {
        stall = 0;
      }
    }
    f_prev = f_cur;
  }
  trace.final_x = *last;
  return trace;
}

struct Resolved {
  int m;
  double L;
  Vec x0;
};

Resolved resolve(const CompositeObjective& obj, const SolverOptions& opts) {
  Resolved r;
  r.m = opts.m > 0 ? static_cast<int>(opts.m) : 2 * obj.components();
  r.L = opts.L_param > 0 ? opts.L_param : obj.constants().L;
  r.x0 = opts.x0.empty() ? Vec(obj.param_dim(), 0.0) : opts.x0;
  require_length(r.x0, static_cast<std::size_t>(obj.param_dim()), "x0");
  return r;
}

}  // namespace

SolverTrace run_svrg(const CompositeObjective& obj, const SolverOptions& opts) {
  const auto [m, L, x0] = resolve(obj, opts);
  const int n = obj.components();
  const double eta = 1.0 / (opts.svrg_step_divisor * L);
  const bool uniform = opts.svrg_anchor == SvrgAnchor::UniformIterate;

  SolverTrace trace;
  trace.put_header("m", std::to_string(m));
  trace.put_header("L_param", fmt(L));
  trace.put_header("step_size", fmt(eta));
  trace.put_header("anchor_rule", uniform ? "uniform-iterate" : "last-iterate");
  trace.put_header("deterministic", opts.deterministic ? "1" : "0");

  struct State {
    Vec anchor, x, mu, vr, snapshot, prox_in;
    CounterRng rng;
  } st{x0, x0, Vec(x0.size()), Vec(x0.size()), x0, Vec(x0.size()),
       CounterRng(opts.seed)};

  auto epoch = [&, m = m](int) -> const Vec& {
    obj.full_value_grad(st.anchor, st.mu);
    st.x = st.anchor;
    const int snap_at =
        uniform ? static_cast<int>(st.rng.uniform_index(m)) + 1 : m;
    for (int k = 1; k <= m; ++k) {
      if (opts.deterministic) {
        obj.full_value_grad(st.x, st.vr);
      } else {
        const int i = static_cast<int>(st.rng.uniform_index(n));
        vr_gradient(obj, i, st.x, st.anchor, st.mu, st.vr);
      }
      lincomb(1.0, st.x, -eta, st.vr, st.prox_in);
      obj.regularizer().prox(st.prox_in, eta, st.x);
      if (k == snap_at) st.snapshot = st.x;
    }
    st.anchor = st.snapshot;
    return st.anchor;
  };
  return run_epochs(obj, opts, "svrg", x0, m, epoch, std::move(trace));
}

SolverTrace run_katyusha(const CompositeObjective& obj,
                         const SolverOptions& opts, bool strongly_convex) {
  const auto [m, L, x0] = resolve(obj, opts);
  const int n = obj.components();
  const double sigma = obj.constants().sigma;
  if (strongly_convex && !(sigma > 0))
    throw ConfigError("katyusha-sc requires sigma > 0");
  if (!strongly_convex && sigma != 0)
    throw ConfigError("katyusha-nsc requires sigma = 0");

  const double tau2 = 0.5;
  const double tau1_sc =
      std::min(std::sqrt(m * sigma / (3.0 * L)), 0.5);

  SolverTrace trace;
  trace.put_header("m", std::to_string(m));
  trace.put_header("L_param", fmt(L));
  trace.put_header("tau2", fmt(tau2));
  if (strongly_convex) {
    trace.put_header("tau1", fmt(tau1_sc));
    trace.put_header("anchor_rule", "geometric-weighted-average");
  } else {
    trace.put_header("tau1", "2/(s+4)");
    trace.put_header("anchor_rule", "uniform-average");
  }
  trace.put_header("y_update", "momentum");
  trace.put_header("deterministic", opts.deterministic ? "1" : "0");

  struct State {
    Vec anchor, y, z, mu, x, vr, z_next, acc, prox_in;
    CounterRng rng;
  } st{x0,
       x0,
       x0,
       Vec(x0.size()),
       Vec(x0.size()),
       Vec(x0.size()),
       Vec(x0.size()),
       Vec(x0.size()),
       Vec(x0.size()),
       CounterRng(opts.seed)};

  auto epoch = [&, m = m](int s) -> const Vec& {
    const double tau1 = strongly_convex ? tau1_sc : 2.0 / (s + 4.0);
    const double alpha = 1.0 / (3.0 * tau1 * L);
    const double theta = strongly_convex ? 1.0 + alpha * sigma : 1.0;

    obj.full_value_grad(st.anchor, st.mu);
    fill(st.acc, 0.0);
    double w = 1.0, wsum = 0.0;
    for (int k = 1; k <= m; ++k) {
      for (std::size_t j = 0; j < st.x.size(); ++j)
        st.x[j] = tau1 * st.z[j] + tau2 * st.anchor[j] +
                  (1.0 - tau1 - tau2) * st.y[j];
      if (opts.deterministic) {
        obj.full_value_grad(st.x, st.vr);
      } else {
        const int i = static_cast<int>(st.rng.uniform_index(n));
        vr_gradient(obj, i, st.x, st.anchor, st.mu, st.vr);
      }
      lincomb(1.0, st.z, -alpha, st.vr, st.prox_in);
      obj.regularizer().prox(st.prox_in, alpha, st.z_next);
      for (std::size_t j = 0; j < st.y.size(); ++j)
        st.y[j] = st.x[j] + tau1 * (st.z_next[j] - st.z[j]);
      st.z.swap(st.z_next);
      axpy(w, st.y, st.acc);
      wsum += w;
      w *= theta;
    }
    lincomb(1.0 / wsum, st.acc, 0.0, st.acc, st.anchor);
    return st.anchor;
  };
  return run_epochs(obj, opts, strongly_convex ? "katyusha-sc" : "katyusha-nsc",
                    x0, m, epoch, std::move(trace));
}

SolverTrace run_mig(const CompositeObjective& obj, const SolverOptions& opts,
                    bool strongly_convex) {
  const auto [m, L, x0] = resolve(obj, opts);
  const int n = obj.components();
  const double sigma = obj.constants().sigma;
  if (strongly_convex && !(sigma > 0))
    throw ConfigError("mig-sc requires sigma > 0");
  if (!strongly_convex && sigma != 0)
    throw ConfigError("mig-nsc requires sigma = 0");

  const double theta_sc = std::min(std::sqrt(m * sigma / (3.0 * L)), 0.5);

  SolverTrace trace;
  trace.put_header("m", std::to_string(m));
  trace.put_header("L_param", fmt(L));
  if (strongly_convex) {
    trace.put_header("theta", fmt(theta_sc));
    trace.put_header("anchor_rule", "geometric-weighted-average");
  } else {
    trace.put_header("theta", "2/(s+4)");
    trace.put_header("anchor_rule", "uniform-average");
  }
  trace.put_header("deterministic", opts.deterministic ? "1" : "0");

  struct State {
    Vec anchor, x, y, mu, vr, acc, prox_in;
    CounterRng rng;
  } st{x0,          x0,
       Vec(x0.size()), Vec(x0.size()),
       Vec(x0.size()), Vec(x0.size()),
       Vec(x0.size()), CounterRng(opts.seed)};

  auto epoch = [&, m = m](int s) -> const Vec& {
    const double theta = strongly_convex ? theta_sc : 2.0 / (s + 4.0);
    const double eta = 1.0 / (3.0 * theta * L);
    const double wfac = strongly_convex ? 1.0 + eta * sigma : 1.0;

    obj.full_value_grad(st.anchor, st.mu);
    fill(st.acc, 0.0);
    double w = 1.0, wsum = 0.0;
    for (int k = 1; k <= m; ++k) {
      lincomb(theta, st.x, 1.0 - theta, st.anchor, st.y);
      if (opts.deterministic) {
        obj.full_value_grad(st.y, st.vr);
      } else {
        const int i = static_cast<int>(st.rng.uniform_index(n));
        vr_gradient(obj, i, st.y, st.anchor, st.mu, st.vr);
      }
      lincomb(1.0, st.x, -eta, st.vr, st.prox_in);
      obj.regularizer().prox(st.prox_in, eta, st.x);
      axpy(w, st.x, st.acc);
      wsum += w;
      w *= wfac;
    }
    for (std::size_t j = 0; j < st.anchor.size(); ++j)
      st.anchor[j] = theta * (st.acc[j] / wsum) + (1.0 - theta) * st.anchor[j];
    return st.anchor;
  };
  return run_epochs(obj, opts, strongly_convex ? "mig-sc" : "mig-nsc", x0, m,
                    epoch, std::move(trace));
}

SolverTrace run_solver(const std::string& id, const CompositeObjective& obj,
                       const SolverOptions& opts) {
  if (id == "vrada") return run_vrada(obj, opts);
  if (id == "svrg") return run_svrg(obj, opts);
  if (id == "katyusha-sc") return run_katyusha(obj, opts, true);
  if (id == "katyusha-nsc") return run_katyusha(obj, opts, false);
  if (id == "mig-sc") return run_mig(obj, opts, true);
  if (id == "mig-nsc") return run_mig(obj, opts, false);
  throw ConfigError("unknown solver '" + id + "'");
}

bool is_known_solver(const std::string& id) {
  return id == "vrada" || id == "svrg" || id == "katyusha-sc" ||
         id == "katyusha-nsc" || id == "mig-sc" || id == "mig-nsc";
}

}  // namespace vrada
