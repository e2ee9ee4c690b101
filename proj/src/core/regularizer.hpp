#pragma once

#include <span>
#include <string>

#include "core/vec.hpp"

namespace vrada {

enum class RegKind { Zero, L2, L1, Elastic };

// l(x) = (lambda2/2)||x||^2 + lambda1||x||_1 with a closed-form prox.
// lambda2 doubles as the strong-convexity modulus consumed by the schedule.
class Regularizer {
 public:
  Regularizer() = default;
  Regularizer(RegKind kind, double lambda2, double lambda1);

  static Regularizer zero() { return {}; }
  static Regularizer l2(double lambda2) { return {RegKind::L2, lambda2, 0.0}; }
  static Regularizer l1(double lambda1) { return {RegKind::L1, 0.0, lambda1}; }
  static Regularizer elastic(double lambda2, double lambda1) {
    return {RegKind::Elastic, lambda2, lambda1};
  }

  double value(std::span<const double> x) const;

  // argmin_z { 1/2||z - v||^2 + t*l(z) }: soft-threshold by t*lambda1, then
  // shrink by 1/(1 + t*lambda2). Ties |v_j| == t*lambda1 map to exactly 0.
  void prox(std::span<const double> v, double t, std::span<double> out) const;
  Vec prox(std::span<const double> v, double t) const;

  double strong_convexity() const { return lambda2_; }
  RegKind kind() const { return kind_; }
  double lambda2() const { return lambda2_; }
  double lambda1() const { return lambda1_; }
  std::string kind_name() const;

 private:
  RegKind kind_ = RegKind::Zero;
  double lambda2_ = 0.0;
  double lambda1_ = 0.0;
};

}  // namespace vrada
