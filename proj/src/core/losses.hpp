#pragma once

#include <memory>
#include <span>
#include <string>

#include "core/dataset.hpp"
#include "core/vec.hpp"

namespace vrada {

enum class LossKind { BinaryLogistic, MultinomialLogistic, Squared };

struct LossSpec {
  LossKind kind = LossKind::Squared;
  int class_count = 1;  // c >= 2 for logistic kinds, 1 for squared

  // Parameter blocks: logistic keeps one d-slice per class 1..c-1 (class c is
  // pinned to the zero score), squared keeps a single slice. Flattening is
  // class-major: w = [w^(1) | w^(2) | ...].
  int blocks() const {
    return kind == LossKind::Squared ? 1 : class_count - 1;
  }
  std::string kind_name() const;
};

LossSpec parse_loss_kind(const std::string& name, const SparseDataset& data);

// Finite-sum smooth part g(w) = (1/n) sum_i g_i(w) over a dataset.
//
// Logistic component (c classes, label y one-hot over classes 1..c-1 or the
// zero vector for class c):
//   g_i(w) = -sum_b y^(b) <w^(b), x_i> + log(1 + sum_b exp(<w^(b), x_i>))
// with the log-sum-exp always max-shifted. Squared component:
//   g_i(w) = 1/2 (<w, x_i> - b_i)^2.
class SmoothLoss {
 public:
  SmoothLoss(LossSpec spec, std::shared_ptr<const SparseDataset> data);

  int components() const { return data_->n; }
  int param_dim() const { return spec_.blocks() * data_->d; }
  const LossSpec& spec() const { return spec_; }
  const SparseDataset& data() const { return *data_; }
  std::shared_ptr<const SparseDataset> data_ptr() const { return data_; }

  double component_value(std::span<const double> w, int i) const;
  double component_value_grad(std::span<const double> w, int i,
                              std::span<double> grad) const;

  // Gradient in factored form: grad_i = sum_b cores[b] * (x_i scattered into
  // block b). cores must have length blocks().
  double component_cores(std::span<const double> w, int i,
                         std::span<double> cores) const;
  // acc += scale * grad_i reconstructed from cores.
  void scatter_cores(int i, std::span<const double> cores, double scale,
                     std::span<double> acc) const;

 private:
  void check_args(std::span<const double> w, int i) const;

  LossSpec spec_;
  std::shared_ptr<const SparseDataset> data_;
};

// A smoothness modulus valid for every component: 1/4 * max||x||^2 for
// binary logistic, 1/2 * max||x||^2 for multinomial with 3+ classes,
// max||x||^2 for squared loss. On unit-norm logistic rows this is the usual
// 1/4 (resp. 1/2). Sets *warned_unnormalized when logistic data has not been
// normalized.
double smoothness_bound(const LossSpec& spec, const SparseDataset& data,
                        bool* warned_unnormalized = nullptr);

}  // namespace vrada
