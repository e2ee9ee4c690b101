#include "core/dual_averaging.hpp"

#include "core/errors.hpp"

namespace vrada {

DualAveragingState::DualAveragingState(Vec center, bool track_const)
    : center_(std::move(center)),
      linear_(center_.size(), 0.0),
      track_const_(track_const) {}

void DualAveragingState::accumulate(double weight, std::span<const double> grad,
                                    std::span<const double> y, double g_at_y) {
  require_length(grad, linear_.size(), "dual accumulate gradient");
  axpy(weight, grad, linear_);
  // Runs of the identical weight (the m inner steps of one epoch) are kept as
  // base + count*weight so the accumulated coefficient of l stays within a
  // few ulp of m*A_s over arbitrarily long epochs.
  if (weight == pending_weight_) {
    ++pending_count_;
  } else {
    reg_base_ = reg_weight();
    pending_weight_ = weight;
    pending_count_ = 1;
  }
  if (track_const_) const_acc_ += weight * (g_at_y - dot(grad, y));
}

void DualAveragingState::rescale(double factor) {
  quad_weight_ *= factor;
  scale(linear_, factor);
  reg_base_ = reg_weight() * factor;
  pending_weight_ = 0.0;
  pending_count_ = 0;
  const_acc_ *= factor;
}

void DualAveragingState::argmin(const Regularizer& reg,
                                std::span<double> out) const {
  require_length(out, center_.size(), "dual argmin output");
  Vec v(center_.size());
  lincomb(1.0, center_, -1.0 / quad_weight_, linear_, v);
  reg.prox(v, reg_weight() / quad_weight_, out);
}

double DualAveragingState::value_at(const Regularizer& reg,
                                    std::span<const double> z) const {
  if (!track_const_)
    throw ConfigError("psi values are only available with const tracking on");
  return 0.5 * quad_weight_ * squared_distance(z, center_) + dot(linear_, z) +
         reg_weight() * reg.value(z) + const_acc_;
}

}  // namespace vrada
