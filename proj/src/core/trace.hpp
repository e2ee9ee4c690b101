#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "core/vec.hpp"

namespace vrada {

enum class RunStatus {
  EpochBudget,     // ran the configured number of epochs
  GapTarget,       // reached the requested optimality gap
  Saturated,       // schedule weight exceeded the float cap
  Diverged,        // objective blew past the divergence guard
  PrecisionLimit,  // gap target unreachable at float resolution
};

const char* run_status_name(RunStatus s);

struct TraceRow {
  int epoch;
  double passes;      // cumulative sweeps of the dataset (cost model, not wall clock)
  double elapsed_ms;  // wall clock; excluded from all determinism guarantees
  double objective;
  double gap;  // NaN when no reference value is known
  double a_s;  // cumulative schedule weight A_s; NaN for solvers without one
};

struct SolverTrace {
  std::string solver_id;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> header;  // config echo + option choices
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::EpochBudget;
  Vec final_x;

  void put_header(const std::string& key, const std::string& value) {
    header.emplace_back(key, value);
  }
};

// Fixed schema: solver,seed,epoch,passes,elapsed_ms,objective,gap,A_s.
// Header metadata goes first as '# key=value' comment lines, then the column
// header, then one row per epoch. NaN gap/A_s serialize as empty fields.
void write_csv(std::ostream& out, const SolverTrace& trace,
               bool with_metadata = true, bool with_column_header = true);

std::string csv_rows(const SolverTrace& trace);

}  // namespace vrada
