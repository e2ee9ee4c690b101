#pragma once

#include <string>

#include "core/objective.hpp"
#include "core/solver_options.hpp"
#include "core/trace.hpp"

namespace vrada {

// Comparison solvers run with the same oracles, pass accounting, and trace
// schema as the main method. The sc variants require sigma > 0; the nsc
// variants require sigma = 0.
SolverTrace run_svrg(const CompositeObjective& obj, const SolverOptions& opts);
SolverTrace run_katyusha(const CompositeObjective& obj, const SolverOptions& opts,
                         bool strongly_convex);
SolverTrace run_mig(const CompositeObjective& obj, const SolverOptions& opts,
                    bool strongly_convex);

// Dispatch by id: vrada, svrg, katyusha-sc, katyusha-nsc, mig-sc, mig-nsc.
SolverTrace run_solver(const std::string& id, const CompositeObjective& obj,
                       const SolverOptions& opts);
bool is_known_solver(const std::string& id);

}  // namespace vrada
