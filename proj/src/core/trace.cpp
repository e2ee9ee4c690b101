#include "core/trace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace vrada {

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::EpochBudget: return "epoch-budget";
    case RunStatus::GapTarget: return "gap-target";
    case RunStatus::Saturated: return "saturated";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::PrecisionLimit: return "precision-limit";
  }
  return "?";
}

namespace {

void append_row(std::string& out, const SolverTrace& t, const TraceRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%llu,%d,%.3f,%.3f,%.17g,",
                t.solver_id.c_str(), static_cast<unsigned long long>(t.seed),
                r.epoch, r.passes, r.elapsed_ms, r.objective);
  out += buf;
  if (!std::isnan(r.gap)) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.gap);
    out += buf;
  }
  out += ',';
  if (!std::isnan(r.a_s)) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.a_s);
    out += buf;
  }
  out += '\n';
}

}  // namespace

std::string csv_rows(const SolverTrace& trace) {
  std::string out;
  for (const TraceRow& r : trace.rows) append_row(out, trace, r);
  return out;
}

void write_csv(std::ostream& out, const SolverTrace& trace, bool with_metadata,
               bool with_column_header) {
  if (with_metadata) {
    for (const auto& [k, v] : trace.header)
      out << "# " << k << "=" << v << "\n";
    out << "# status=" << run_status_name(trace.status) << "\n";
  }
  if (with_column_header)
    out << "solver,seed,epoch,passes,elapsed_ms,objective,gap,A_s\n";
  out << csv_rows(trace);
}

}  // namespace vrada
