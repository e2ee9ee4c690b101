#pragma once

#include <limits>
#include <memory>
#include <span>

#include "core/losses.hpp"
#include "core/regularizer.hpp"
#include "core/vec.hpp"

namespace vrada {

struct ProblemConstants {
  int n = 0;            // component count
  int d = 0;            // parameter dimension
  double L = 1.0;       // smoothness modulus of every g_i
  double sigma = 0.0;   // strong-convexity modulus of l
  bool smoothness_warned = false;  // logistic bound applied to unnormalized rows

  double kappa() const {
    return sigma > 0 ? L / sigma : std::numeric_limits<double>::infinity();
  }
};

// f(x) = g(x) + l(x) with g a finite sum of smooth components. Immutable
// after construction and safe to share across threads.
class CompositeObjective {
 public:
  CompositeObjective(std::shared_ptr<const SparseDataset> data, LossSpec loss,
                     Regularizer reg);

  const ProblemConstants& constants() const { return constants_; }
  const Regularizer& regularizer() const { return reg_; }
  const SmoothLoss& smooth() const { return smooth_; }
  int param_dim() const { return constants_.d; }
  int components() const { return constants_.n; }

  // g(x) and its gradient, accumulated over components in a fixed
  // left-to-right chunked order so repeated runs are bitwise identical.
  double full_value_grad(std::span<const double> x, std::span<double> grad) const;
  double full_value(std::span<const double> x) const;

  double component_value_grad(int i, std::span<const double> x,
                              std::span<double> grad) const;
  double component_value(int i, std::span<const double> x) const;

  // f(x) = g(x) + l(x)
  double value(std::span<const double> x) const;

 private:
  SmoothLoss smooth_;
  Regularizer reg_;
  ProblemConstants constants_;
};

}  // namespace vrada
