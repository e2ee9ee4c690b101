#include "core/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "core/errors.hpp"

namespace vrada {

namespace {
constexpr double kSlack = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double next_A(double A_prev, int m, double L, double sigma) {
  if (!(A_prev > 0)) throw ConfigError("next_A needs A_prev > 0");
  if (m < 1) throw ConfigError("next_A needs m >= 1");
  if (!(L > 0)) throw ConfigError("next_A needs L > 0");
  if (sigma < 0) throw ConfigError("next_A needs sigma >= 0");
  return A_prev + std::sqrt(m * A_prev * (1.0 + sigma * A_prev) / (2.0 * L));
}

int schedule_s0(int m) {
  if (m < 3) return -1;
  return 1 + static_cast<int>(std::ceil(std::log2(std::log2(m / 2.0))));
}

ScheduleBounds schedule_lower_bounds(int s, int m, double L, double sigma) {
  if (s < 2) throw ConfigError("lower bounds are stated for s >= 2");
  const double ratio = 1.0 + std::sqrt(sigma * m / (2.0 * L));
  ScheduleBounds b;
  b.eq11 = std::max((m / (2.0 * L)) * std::pow(2.0 / m, std::exp2(-(s - 1))),
                    (1.0 / L) * std::pow(ratio, s - 1));
  const int s0 = schedule_s0(m);
  if (s0 >= 0 && s >= s0) {
    const double root2 = std::sqrt(2.0);
    b.eq12 = std::max(
        (m / (32.0 * L)) * (s - s0 + 2.0 * root2) * (s - s0 + 2.0 * root2),
        (m / (4.0 * L)) * std::pow(ratio, s - s0));
  } else {
    b.eq12 = kNaN;
  }
  return b;
}

ScheduleAuditReport audit_schedule_values(std::span<const double> A, int m,
                                          double L, double sigma) {
  if (A.size() < 2) throw ConfigError("schedule must hold A_0 and A_1");
  if (A[0] != 0.0) throw AuditError("schedule audit: A_0 must be 0");
  if (std::fabs(A[1] - 1.0 / L) > kSlack / L)
    throw AuditError("schedule audit: A_1 must equal 1/L");

  ScheduleAuditReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (int s = 2; s < static_cast<int>(A.size()); ++s) {
    const ScheduleBounds b = schedule_lower_bounds(s, m, L, sigma);
    ScheduleAuditRow row{s, A[s], b.eq11, A[s] / b.eq11, b.eq12, kNaN};
    if (row.margin11 < 1.0 - kSlack)
      throw AuditError("schedule audit: A_" + std::to_string(s) +
                       " violates the eq11 lower bound (margin " +
                       std::to_string(row.margin11) + ")");
    report.min_margin = std::min(report.min_margin, row.margin11);
    if (!std::isnan(b.eq12)) {
      row.margin12 = A[s] / b.eq12;
      if (row.margin12 < 1.0 - kSlack)
        throw AuditError("schedule audit: A_" + std::to_string(s) +
                         " violates the eq12 lower bound (margin " +
                         std::to_string(row.margin12) + ")");
      report.min_margin = std::min(report.min_margin, row.margin12);
    }
    if (!(A[s] > A[s - 1]))
      throw AuditError("schedule audit: A_" + std::to_string(s) +
                       " does not increase past A_" + std::to_string(s - 1));
    report.rows.push_back(row);
  }
  return report;
}

std::string ScheduleAuditReport::to_table() const {
  std::string out =
      "epoch            A_s        bound11       margin11        bound12   "
      "    margin12\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%5d %14.6e %14.6e %14.12f %14.6e %14.12f\n",
                  r.s, r.A, r.bound11, r.margin11, r.bound12, r.margin12);
    out += buf;
  }
  return out;
}

EpochSchedule::EpochSchedule(int m, double L, double sigma)
    : m_(m), L_(L), sigma_(sigma), s0_(schedule_s0(m)) {
  if (m < 1) throw ConfigError("schedule needs m >= 1");
  if (!(L > 0)) throw ConfigError("schedule needs L > 0");
  if (sigma < 0) throw ConfigError("schedule needs sigma >= 0");
  A_ = {0.0, 1.0 / L};
}

bool EpochSchedule::try_extend() {
  if (saturated_) return false;
  const double next = next_A(A_.back(), m_, L_, sigma_);
  if (!(next <= kScheduleSaturation)) {
    saturated_ = true;
    return false;
  }
  A_.push_back(next);
  return true;
}

}  // namespace vrada
