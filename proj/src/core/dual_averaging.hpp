#pragma once

#include <span>

#include "core/regularizer.hpp"
#include "core/vec.hpp"

namespace vrada {

// Incremental representation of the running lower model
//   psi(z) = q/2 ||z - center||^2 + <G, z> + B*l(z) + const.
// Every accumulated term is linear in z except l, so the model stays in this
// form for the whole run and its minimizer is a single prox:
//   argmin psi = prox_{(B/q) l}(center - G/q).
// The constant is only needed when whole psi values are audited, so it is
// tracked on demand.
class DualAveragingState {
 public:
  DualAveragingState(Vec center, bool track_const);

  // psi += weight * (g_at_y + <grad, z - y> + l(z))
  void accumulate(double weight, std::span<const double> grad,
                  std::span<const double> y, double g_at_y);

  // psi *= factor (the epoch-1 to epoch-2 handoff multiplies by m)
  void rescale(double factor);

  void argmin(const Regularizer& reg, std::span<double> out) const;

  // Full psi(z); requires const tracking.
  double value_at(const Regularizer& reg, std::span<const double> z) const;

  double quad_weight() const { return quad_weight_; }
  double reg_weight() const { return reg_base_ + pending_count_ * pending_weight_; }
  const Vec& center() const { return center_; }
  const Vec& linear() const { return linear_; }
  bool tracks_const() const { return track_const_; }

 private:
  double quad_weight_ = 1.0;  // q
  Vec center_;                // anchor of the initial quadratic, never moves
  Vec linear_;                // G
  double reg_base_ = 0.0;     // B = reg_base + pending_count * pending_weight
  double pending_weight_ = 0.0;
  long pending_count_ = 0;
  double const_acc_ = 0.0;
  bool track_const_;
};

}  // namespace vrada
