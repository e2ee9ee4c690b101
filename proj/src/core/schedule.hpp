#pragma once

#include <span>
#include <string>
#include <vector>

namespace vrada {

// Growth saturates here instead of running into Inf; a run that reaches this
// has a gap bound far below float resolution anyway.
inline constexpr double kScheduleSaturation = 1e300;

struct ScheduleBounds {
  double eq11 = 0.0;  // valid for every epoch s >= 2
  double eq12 = 0.0;  // valid for s >= s0 when m >= 3, else NaN
};

struct ScheduleAuditRow {
  int s;
  double A;
  double bound11;
  double margin11;
  double bound12;   // NaN when not applicable
  double margin12;  // NaN when not applicable
};

struct ScheduleAuditReport {
  std::vector<ScheduleAuditRow> rows;
  double min_margin = 0.0;
  std::string to_table() const;  // plain text: epoch, A_s, bound, margin
};

// A_s = A_{s-1} + sqrt(m * A_{s-1} * (1 + sigma*A_{s-1}) / (2L)).
double next_A(double A_prev, int m, double L, double sigma);

// Number of epochs after which A_s >= m/(4L): 1 + ceil(log2 log2 (m/2)).
// Defined for m >= 3; returns -1 otherwise.
int schedule_s0(int m);

// Lower bounds on A_s that the growth recursion guarantees; s >= 2 required.
ScheduleBounds schedule_lower_bounds(int s, int m, double L, double sigma);

// Checks A[s] against both bound families for every stored s >= 2 with
// relative slack 1e-12. A[0] must be 0 and A[1] = 1/L. Throws AuditError
// naming the epoch and bound family on violation.
ScheduleAuditReport audit_schedule_values(std::span<const double> A, int m,
                                          double L, double sigma);

// The a_s = A_s - A_{s-1} weight sequence, grown one epoch at a time.
class EpochSchedule {
 public:
  EpochSchedule(int m, double L, double sigma);

  // Appends A_{s+1}; returns false (and flags saturation) when the next
  // value would exceed the saturation cap.
  bool try_extend();

  double A(int s) const { return A_.at(s); }
  double a(int s) const { return A_.at(s) - A_.at(s - 1); }
  int last_epoch() const { return static_cast<int>(A_.size()) - 1; }
  bool saturated() const { return saturated_; }

  int m() const { return m_; }
  double L() const { return L_; }
  double sigma() const { return sigma_; }
  int s0() const { return s0_; }

  std::span<const double> values() const { return A_; }
  ScheduleAuditReport audit() const {
    return audit_schedule_values(A_, m_, L_, sigma_);
  }

 private:
  int m_;
  double L_;
  double sigma_;
  int s0_;
  std::vector<double> A_;
  bool saturated_ = false;
};

}  // namespace vrada
