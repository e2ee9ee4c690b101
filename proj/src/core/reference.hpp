#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/objective.hpp"
#include "core/solver_options.hpp"

namespace vrada {

struct ReferenceSolution {
  Vec x_star;
  double f_star = 0.0;
  // False when the run plateaued without certifying optimality (an infimum
  // estimate, e.g. unregularized logistic loss on separable data).
  bool attained = true;
  double cross_check_delta = 0.0;  // |f from the two methods|
  int accelerated_epochs = 0;
  long pgd_iterations = 0;
};

// High-accuracy reference: a deterministic accelerated dual-averaging run
// (m = 1) driven until its own gap certificate ||x0 - x*||^2 / (2 A_s) and the
// successive objective deltas both drop below 1e-13 * max(1, |f|), then
// cross-checked against an independently coded proximal gradient descent.
// Throws ReferenceError when the two certified values disagree by more than
// 1e-10 relative.
ReferenceSolution compute_reference(const CompositeObjective& obj,
                                    int max_epochs = 500000,
                                    long max_pgd_iterations = 300000);

// Plain text: line 1 holds f* in full precision, one x* coordinate per
// following line.
void write_reference_file(const ReferenceSolution& ref, const std::string& path);
bool load_reference_file(const std::string& path, int dim, double* f_star,
                         Vec* x_star);

inline const std::vector<double>& default_tuning_grid() {
  static const std::vector<double> grid{0.0125, 0.025, 0.05, 0.1, 0.25, 0.5};
  return grid;
}

struct TuneOutcome {
  double L_param;
  double final_objective;  // NaN when the run diverged
  std::string status;
};

struct TuneResult {
  double best_L = 0.0;
  std::vector<TuneOutcome> outcomes;
};

// Runs every grid value for the configured epoch budget with seed 0 and picks
// the smallest final objective among the non-diverged runs.
TuneResult tune_L(const CompositeObjective& obj, const std::string& solver,
                  const SolverOptions& base, std::span<const double> grid);

}  // namespace vrada
