#include "core/objective.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vrada {

namespace {
constexpr int kChunk = 64;
}

CompositeObjective::CompositeObjective(
    std::shared_ptr<const SparseDataset> data, LossSpec loss, Regularizer reg)
    : smooth_(loss, std::move(data)), reg_(std::move(reg)) {
  constants_.n = smooth_.components();
  constants_.d = smooth_.param_dim();
  constants_.L =
      smoothness_bound(loss, smooth_.data(), &constants_.smoothness_warned);
  constants_.sigma = reg_.strong_convexity();
}

double CompositeObjective::full_value_grad(std::span<const double> x,
                                           std::span<double> grad) const {
  require_length(x, static_cast<std::size_t>(constants_.d), "point");
  require_length(grad, static_cast<std::size_t>(constants_.d), "gradient out");
  require_finite(x, "point");

  const int n = constants_.n;
  fill(grad, 0.0);
  Vec chunk_grad(grad.size());
  double cores_stack[8];
  Vec cores_heap;
  const int blocks = smooth_.spec().blocks();
  std::span<double> cores =
      blocks <= 8 ? std::span<double>(cores_stack, blocks)
                  : (cores_heap.resize(blocks), std::span<double>(cores_heap));

  double value = 0.0;
  for (int begin = 0; begin < n; begin += kChunk) {
    const int end = std::min(begin + kChunk, n);
    fill(chunk_grad, 0.0);
    double chunk_value = 0.0;
    for (int i = begin; i < end; ++i) {
      chunk_value += smooth_.component_cores(x, i, cores);
      smooth_.scatter_cores(i, cores, 1.0, chunk_grad);
    }
    value += chunk_value;
    axpy(1.0, chunk_grad, grad);
  }
  value /= n;
  scale(grad, 1.0 / n);
  if (!std::isfinite(value) || !all_finite(grad))
    throw NumericError("full gradient: non-finite result");
  return value;
}

double CompositeObjective::full_value(std::span<const double> x) const {
  require_length(x, static_cast<std::size_t>(constants_.d), "point");
  require_finite(x, "point");
  const int n = constants_.n;
  double value = 0.0;
  for (int begin = 0; begin < n; begin += kChunk) {
    const int end = std::min(begin + kChunk, n);
    double chunk_value = 0.0;
    for (int i = begin; i < end; ++i)
      chunk_value += smooth_.component_value(x, i);
    value += chunk_value;
  }
  value /= n;
  if (!std::isfinite(value)) throw NumericError("objective: non-finite value");
  return value;
}

double CompositeObjective::component_value_grad(int i, std::span<const double> x,
                                                std::span<double> grad) const {
  return smooth_.component_value_grad(x, i, grad);
}

double CompositeObjective::component_value(int i,
                                           std::span<const double> x) const {
  return smooth_.component_value(x, i);
}

double CompositeObjective::value(std::span<const double> x) const {
  return full_value(x) + reg_.value(x);
}

}  // namespace vrada
