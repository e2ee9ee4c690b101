#pragma once

#include <span>

#include "core/dual_averaging.hpp"
#include "core/objective.hpp"
#include "core/rng.hpp"
#include "core/schedule.hpp"
#include "core/solver_options.hpp"
#include "core/trace.hpp"

namespace vrada {

// out = grad_i(y) - grad_i(anchor) + mu; the caller guarantees
// mu = grad g(anchor). Unbiased for grad g(y) under a uniform i.
void vr_gradient(const CompositeObjective& obj, int i, std::span<const double> y,
                 std::span<const double> anchor, std::span<const double> mu,
                 std::span<double> out);

// Exhaustive i-enumeration of the variance-reduced gradient at (y, anchor),
// against the bound 2L * Bregman_g(anchor; y).
struct VrProbe {
  double mean_sq_deviation;  // (1/n) sum_i ||vr_i - grad g(y)||^2
  double variance_bound;     // 2L (g(anchor) - g(y) - <grad g(y), anchor - y>)
  double unbias_error;       // || mean_i vr_i - grad g(y) ||
};
VrProbe vr_gradient_probe(const CompositeObjective& obj,
                          std::span<const double> y,
                          std::span<const double> anchor);

// Full solver state; the pieces are exposed so the initialization step and a
// single inner iteration can be driven and inspected directly.
struct VradaState {
  Vec anchor;          // x~_{s-1} while epoch s is running
  Vec z;               // z_{s,k}
  Vec mu;              // grad g(x~_{s-1})
  double g_at_anchor;  // g(x~_{s-1})
  EpochSchedule schedule;
  DualAveragingState dual;
  CounterRng rng;
  int epoch;  // epoch currently loaded into (mu, schedule)
  Vec z_sum;  // running sum of z_{s,k} for the uniform average

  // audit support
  Vec y_virtual_sum;               // sum of remixed iterates for the average identity
  Vec epoch_linear_start;          // dual linear term at epoch start
  std::vector<Vec> epoch_terms;    // weighted gradients accumulated this epoch
  double init_model_value = 0.0;         // psi_{1,1}(z_{1,1})
  double init_objective_bound = 0.0;         // A_1 f(x~_1)

  Vec scratch_y, scratch_vr, scratch_full;
};

// Initialization: one proximal gradient step z_{1,1} off the starting
// point, the anchor hand-off x~_1 = z_{1,1}, and the m-fold rescaling of
// the running model. In audit mode verifies psi_{1,1}(z_{1,1}) >= A_1 f(x~_1).
VradaState vrada_initialize(const CompositeObjective& obj, Vec x0, int m,
                            const SolverOptions& opts);

// Epoch prologue: advance the weight schedule and refresh the anchor
// gradient.
// Returns false when the schedule saturated.
bool vrada_begin_epoch(const CompositeObjective& obj, VradaState& st);

// One inner iteration (1-based k within the epoch): couple, sample,
// accumulate, minimize.
void vrada_inner_step(const CompositeObjective& obj, VradaState& st, int k,
                      bool deterministic, bool track_psi_const);

// Epoch epilogue: fold the uniform iterate average into the anchor.
void vrada_finish_epoch(VradaState& st);

// Algorithm start to finish with per-epoch trace rows and all requested
// audits.
SolverTrace run_vrada(const CompositeObjective& obj, const SolverOptions& opts);

}  // namespace vrada
