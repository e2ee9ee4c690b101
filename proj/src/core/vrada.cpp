#include "core/vrada.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "core/errors.hpp"

namespace vrada {

namespace {

constexpr double kTight = 1e-12;   // bookkeeping identities
constexpr double kLoose = 1e-10;   // inequalities involving objective values
constexpr double kDivergenceGuard = 1e6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double now_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

void vr_gradient(const CompositeObjective& obj, int i, std::span<const double> y,
                 std::span<const double> anchor, std::span<const double> mu,
                 std::span<double> out) {
  const std::size_t d = static_cast<std::size_t>(obj.param_dim());
  require_length(y, d, "vr_gradient y");
  require_length(anchor, d, "vr_gradient anchor");
  require_length(mu, d, "vr_gradient mu");
  require_length(out, d, "vr_gradient out");

  const SmoothLoss& loss = obj.smooth();
  const int blocks = loss.spec().blocks();
  double cy_stack[8], ca_stack[8];
  Vec cy_heap, ca_heap;
  std::span<double> cy = blocks <= 8
                             ? std::span<double>(cy_stack, blocks)
                             : (cy_heap.resize(blocks), std::span<double>(cy_heap));
  std::span<double> ca = blocks <= 8
                             ? std::span<double>(ca_stack, blocks)
                             : (ca_heap.resize(blocks), std::span<double>(ca_heap));
  loss.component_cores(y, i, cy);
  loss.component_cores(anchor, i, ca);
  std::copy(mu.begin(), mu.end(), out.begin());
  loss.scatter_cores(i, cy, 1.0, out);
  loss.scatter_cores(i, ca, -1.0, out);
}

VrProbe vr_gradient_probe(const CompositeObjective& obj,
                          std::span<const double> y,
                          std::span<const double> anchor) {
  const int n = obj.components();
  const std::size_t d = static_cast<std::size_t>(obj.param_dim());
  Vec grad_y(d), mu(d), vr(d), mean(d, 0.0);
  const double g_y = obj.full_value_grad(y, grad_y);
  const double g_anchor = obj.full_value_grad(anchor, mu);

  double sq_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    vr_gradient(obj, i, y, anchor, mu, vr);
    sq_sum += squared_distance(vr, grad_y);
    axpy(1.0, vr, mean);
  }
  scale(mean, 1.0 / n);

  Vec diff(d);
  lincomb(1.0, anchor, -1.0, y, diff);
  const double bregman = g_anchor - g_y - dot(grad_y, diff);

  VrProbe p;
  p.mean_sq_deviation = sq_sum / n;
  p.variance_bound = 2.0 * obj.constants().L * bregman;
  p.unbias_error = std::sqrt(squared_distance(mean, grad_y));
  return p;
}

VradaState vrada_initialize(const CompositeObjective& obj, Vec x0, int m,
                            const SolverOptions& opts) {
  const std::size_t d = static_cast<std::size_t>(obj.param_dim());
  if (x0.empty()) x0.assign(d, 0.0);
  require_length(x0, d, "x0");
  require_finite(x0, "x0");
  if (m < 1) throw ConfigError("m must be >= 1");

  const double L = opts.L_param > 0 ? opts.L_param : obj.constants().L;
  const double sigma = obj.constants().sigma;
  // Whole-psi values are only audited in deterministic mode, where the full
  // g(y) needed for the constant term comes for free.
  const bool track_const = opts.audit && opts.deterministic;

  VradaState st{
      .anchor = {},
      .z = Vec(d),
      .mu = Vec(d),
      .g_at_anchor = 0.0,
      .schedule = EpochSchedule(m, L, sigma),
      .dual = DualAveragingState(x0, track_const),
      .rng = CounterRng(opts.seed),
      .epoch = 1,
      .z_sum = Vec(d, 0.0),
      .y_virtual_sum = {},
      .epoch_linear_start = {},
      .epoch_terms = {},
      .init_model_value = 0.0,
      .init_objective_bound = 0.0,
      .scratch_y = Vec(d),
      .scratch_vr = Vec(d),
      .scratch_full = Vec(d),
  };

  // With psi = 1/2||z - x0||^2 plus one linearization, the first minimizer
  // is a plain proximal gradient step of length a_1 = 1/L from x0.
  const double a1 = st.schedule.a(1);
  st.g_at_anchor = obj.full_value_grad(x0, st.mu);
  st.dual.accumulate(a1, st.mu, x0, st.g_at_anchor);
  st.dual.argmin(obj.regularizer(), st.z);

  if (opts.audit) {
    // psi_{1,1}(z_{1,1}) >= A_1 f(x~_1), recomputed from first principles.
    Vec dz(d);
    lincomb(1.0, st.z, -1.0, x0, dz);
    const double psi = 0.5 * squared_norm(dz) +
                       a1 * (st.g_at_anchor + dot(st.mu, dz) +
                             obj.regularizer().value(st.z));
    const double rhs = st.schedule.A(1) * obj.value(st.z);
    st.init_model_value = psi;
    st.init_objective_bound = rhs;
    const double slack =
        kTight * std::max({1.0, std::fabs(psi), std::fabs(rhs)});
    if (psi < rhs - slack)
      throw AuditError("initial-step audit: psi_{1,1}(z_{1,1}) = " + fmt(psi) +
                       " < A_1 f(x~_1) = " + fmt(rhs));
  }

  // Hand-off: x~_1 = z_{1,1}, the next epoch reuses z, and the model is
  // scaled by m (which leaves its minimizer in place).
  st.anchor = st.z;
  st.dual.rescale(static_cast<double>(m));
  return st;
}

bool vrada_begin_epoch(const CompositeObjective& obj, VradaState& st) {
  if (!st.schedule.try_extend()) return false;
  ++st.epoch;
  st.g_at_anchor = obj.full_value_grad(st.anchor, st.mu);
  fill(st.z_sum, 0.0);
  return true;
}

void vrada_inner_step(const CompositeObjective& obj, VradaState& st, int k,
                      bool deterministic, bool track_psi_const) {
  const int s = st.epoch;
  const double A_prev = st.schedule.A(s - 1);
  const double A_cur = st.schedule.A(s);
  const double a_cur = st.schedule.a(s);

  // y_{s,k} couples the anchor with the latest dual iterate.
  lincomb(A_prev / A_cur, st.anchor, a_cur / A_cur, st.z, st.scratch_y);

  double g_at_y = 0.0;
  if (deterministic) {
    g_at_y = obj.full_value_grad(st.scratch_y, st.scratch_vr);
  } else {
    const int i = static_cast<int>(st.rng.uniform_index(obj.components()));
    vr_gradient(obj, i, st.scratch_y, st.anchor, st.mu, st.scratch_vr);
    if (track_psi_const)
      throw ConfigError("psi constants need deterministic mode");
  }

  // Model update; its exact minimizer is a single prox.
  st.dual.accumulate(a_cur, st.scratch_vr, st.scratch_y,
                     track_psi_const ? g_at_y : 0.0);
  if (!st.epoch_linear_start.empty()) {
    Vec term(st.scratch_vr);
    scale(term, a_cur);
    st.epoch_terms.push_back(std::move(term));
  }
  st.dual.argmin(obj.regularizer(), st.z);
  axpy(1.0, st.z, st.z_sum);

  if (!st.y_virtual_sum.empty()) {
    // The epoch mean of (A_{s-1}/A_s) x~ + (a_s/A_s) z_{s,k} reproduces the
    // anchor update; accumulated here to cross-check the identity.
    for (std::size_t j = 0; j < st.y_virtual_sum.size(); ++j)
      st.y_virtual_sum[j] +=
          (A_prev / A_cur) * st.anchor[j] + (a_cur / A_cur) * st.z[j];
  }
  (void)k;
}

void vrada_finish_epoch(VradaState& st) {
  const int s = st.epoch;
  const int m = st.schedule.m();
  const double A_prev = st.schedule.A(s - 1);
  const double A_cur = st.schedule.A(s);
  const double a_cur = st.schedule.a(s);
  for (std::size_t j = 0; j < st.anchor.size(); ++j)
    st.anchor[j] =
        (A_prev / A_cur) * st.anchor[j] + (a_cur / (m * A_cur)) * st.z_sum[j];
}

namespace {

struct AuditContext {
  const CompositeObjective& obj;
  const SolverOptions& opts;
  double dist0_sq = 0.0;  // ||x0 - x*||^2 when x_star given
  bool have_reference = false;

  void check_epoch(VradaState& st, double f_anchor) const {
    const int s = st.epoch;
    const int m = st.schedule.m();
    const double A_cur = st.schedule.A(s);

    // B = m * A_s at every epoch end.
    const double B = st.dual.reg_weight();
    if (std::fabs(B - m * A_cur) > kTight * std::fabs(m * A_cur))
      throw AuditError("dual-state audit: B = " + fmt(B) + " != m*A_s = " +
                       fmt(m * A_cur) + " at epoch " + std::to_string(s));

    // Incremental minimizer against a replay of this epoch's accumulation in
    // reverse order on top of the epoch-start linear term.
    Vec replay = st.epoch_linear_start;
    for (auto it = st.epoch_terms.rbegin(); it != st.epoch_terms.rend(); ++it)
      axpy(1.0, *it, replay);
    const double q = st.dual.quad_weight();
    Vec v(replay.size());
    lincomb(1.0, st.dual.center(), -1.0 / q, replay, v);
    Vec z_replay = obj.regularizer().prox(v, B / q);
    const double dz = std::sqrt(squared_distance(z_replay, st.z));
    if (dz > kTight * std::max(1.0, norm(st.z)))
      throw AuditError("dual-state audit: incremental argmin deviates from "
                       "replayed argmin by " +
                       fmt(dz) + " at epoch " + std::to_string(s));

    // Uniform-average identity of the anchor update.
    Vec y_mean = st.y_virtual_sum;
    scale(y_mean, 1.0 / m);
    const double dy = std::sqrt(squared_distance(y_mean, st.anchor));
    if (dy > kTight * std::max(1.0, norm(st.anchor)))
      throw AuditError("average audit: x~_s deviates from the iterate mean by " +
                       fmt(dy) + " at epoch " + std::to_string(s));

    if (opts.deterministic && have_reference) {
      // Pathwise objective-gap bound; exact because the variance term is
      // identically zero in deterministic mode.
      const double bound = dist0_sq / (2.0 * A_cur);
      const double gap = f_anchor - opts.f_star;
      if (gap > bound * (1.0 + kLoose))
        throw AuditError("convergence audit: gap " + fmt(gap) +
                         " exceeds ||x0-x*||^2/(2A_s) = " + fmt(bound) +
                         " at epoch " + std::to_string(s));

      // psi_{s,m}(z_{s,m}) <= m A_s f* + (m/2)||x0 - x*||^2.
      const double psi = st.dual.value_at(obj.regularizer(), st.z);
      const double rhs = m * A_cur * opts.f_star + 0.5 * m * dist0_sq;
      const double slack = kLoose * std::max({1.0, std::fabs(psi), std::fabs(rhs)});
      if (psi > rhs + slack)
        throw AuditError("upper-bound audit: psi_{s,m}(z_{s,m}) = " + fmt(psi) +
                         " > " + fmt(rhs) + " at epoch " + std::to_string(s));
    }
  }

  void check_probe(const VradaState& st, std::span<const double> y) const {
    VrProbe p = vr_gradient_probe(obj, y, st.anchor);
    if (p.unbias_error > kTight)
      throw AuditError("unbiasedness audit: mean vr gradient deviates by " +
                       fmt(p.unbias_error) + " at epoch " +
                       std::to_string(st.epoch));
    const double slack = kLoose * std::max(1.0, std::fabs(p.variance_bound));
    if (p.mean_sq_deviation > p.variance_bound + slack)
      throw AuditError("variance audit: mean squared deviation " +
                       fmt(p.mean_sq_deviation) + " exceeds bound " +
                       fmt(p.variance_bound) + " at epoch " +
                       std::to_string(st.epoch));
  }
};

}  // namespace

SolverTrace run_vrada(const CompositeObjective& obj, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = obj.components();
  const int m = opts.m > 0 ? static_cast<int>(opts.m) : 2 * n;
  const double passes_per_epoch = (n + 2.0 * m) / n;
  const bool have_fstar = !std::isnan(opts.f_star);

  SolverTrace trace;
  trace.solver_id = "vrada";
  trace.seed = opts.seed;

  Vec x0 = opts.x0;
  if (x0.empty()) x0.assign(obj.param_dim(), 0.0);

  AuditContext audit{obj, opts};
  if (opts.audit && have_fstar && !opts.x_star.empty()) {
    require_length(opts.x_star, x0.size(), "x_star");
    audit.dist0_sq = squared_distance(x0, opts.x_star);
    audit.have_reference = true;
  }

  VradaState st = vrada_initialize(obj, x0, m, opts);
  if (opts.audit) {
    st.y_virtual_sum.assign(x0.size(), 0.0);
    st.epoch_linear_start.assign(x0.size(), 0.0);
  }

  trace.put_header("m", std::to_string(m));
  trace.put_header("L_param", fmt(st.schedule.L()));
  trace.put_header("sigma", fmt(st.schedule.sigma()));
  trace.put_header("s0", std::to_string(st.schedule.s0()));
  trace.put_header("deterministic", opts.deterministic ? "1" : "0");
  trace.put_header("audit", opts.audit ? "1" : "0");

  auto emit = [&](int epoch, double passes, double objective, double a_s) {
    const double gap = have_fstar
                           ? objective - opts.f_star
                           : std::numeric_limits<double>::quiet_NaN();
    trace.rows.push_back({epoch, passes, now_ms(t0), objective, gap, a_s});
    return gap;
  };

  const double f0 = obj.value(x0);
  emit(0, 0.0, f0, 0.0);
  double passes = 1.0;  // the initialization gradient consumed one pass
  double f_prev = obj.value(st.anchor);
  double gap = emit(1, passes, f_prev, st.schedule.A(1));

  if (!std::isnan(opts.gap_target) && gap <= opts.gap_target) {
    trace.status = RunStatus::GapTarget;
    trace.final_x = st.anchor;
    return trace;
  }

  int stall_count = 0;
  trace.status = RunStatus::EpochBudget;
  for (int s = 2; s <= opts.epochs; ++s) {
    if (!vrada_begin_epoch(obj, st)) {
      trace.status = RunStatus::Saturated;
      break;
    }
    if (opts.audit) {
      fill(st.y_virtual_sum, 0.0);
      st.epoch_linear_start = st.dual.linear();
      st.epoch_terms.clear();
    }

    double f_cur = 0.0;
    try {
      // Three representative inner iterations per epoch get the enumerated
      // variance/unbiasedness probe.
      const int probe1 = 1, probe2 = (m + 1) / 2, probe3 = m;
      for (int k = 1; k <= m; ++k) {
        vrada_inner_step(obj, st, k, opts.deterministic,
                         opts.audit && opts.deterministic);
        if (opts.audit && (k == probe1 || k == probe2 || k == probe3))
          audit.check_probe(st, st.scratch_y);
      }
      vrada_finish_epoch(st);
      f_cur = obj.value(st.anchor);
    } catch (const NumericError&) {
      trace.status = RunStatus::Diverged;
      break;
    }

    passes += passes_per_epoch;
    if (opts.audit) audit.check_epoch(st, f_cur);
    gap = emit(s, passes, f_cur, st.schedule.A(s));

    if (f_cur > kDivergenceGuard * std::max(1.0, f0)) {
      trace.status = RunStatus::Diverged;
      break;
    }
    if (!std::isnan(opts.gap_target)) {
      if (gap <= opts.gap_target) {
        trace.status = RunStatus::GapTarget;
        break;
      }
      // Objective pinned at float resolution but the target is still out of
      // reach: give up instead of spinning.
      if (std::fabs(f_cur - f_prev) <=
          4.0 * std::numeric_limits<double>::epsilon() *
              std::max(1.0, std::fabs(f_cur))) {
        if (++stall_count >= 3) {
          trace.status = RunStatus::PrecisionLimit;
          break;
        }
      } else {
        stall_count = 0;
      }
    }
    f_prev = f_cur;
  }

  trace.final_x = st.anchor;
  return trace;
}

}  // namespace vrada
