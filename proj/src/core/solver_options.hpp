#pragma once

#include <cstdint>
#include <limits>

#include "core/vec.hpp"

namespace vrada {

enum class SvrgAnchor { LastIterate, UniformIterate };

struct SolverOptions {
  long m = 0;            // inner iterations per epoch; 0 means the 2n default
  double L_param = 0.0;  // smoothness parameter; 0 means the objective's bound
  int epochs = 50;       // epoch budget
  std::uint64_t seed = 0;

  // Gap-driven termination; needs f_star.
  double gap_target = std::numeric_limits<double>::quiet_NaN();
  double f_star = std::numeric_limits<double>::quiet_NaN();

  // Replaces every sampled gradient by the full gradient, which turns the
  // in-expectation guarantees into pathwise ones.
  bool deterministic = false;

  // Runtime verification of the convergence guarantees (schedule bounds,
  // estimation-sequence bookkeeping, variance bound probes).
  bool audit = false;

  Vec x0;      // empty means the zero vector
  Vec x_star;  // optional reference point; enables the distance-based audits

  // SVRG anchor rule and step size 1/(svrg_step_divisor * L_param).
  SvrgAnchor svrg_anchor = SvrgAnchor::UniformIterate;
  double svrg_step_divisor = 4.0;
};

}  // namespace vrada
