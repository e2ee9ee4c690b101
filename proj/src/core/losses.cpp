#include "core/losses.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace vrada {

std::string LossSpec::kind_name() const {
  switch (kind) {
    case LossKind::BinaryLogistic: return "binary-logistic";
    case LossKind::MultinomialLogistic: return "multinomial-logistic";
    case LossKind::Squared: return "squared";
  }
  return "?";
}

LossSpec parse_loss_kind(const std::string& name, const SparseDataset& data) {
  if (name == "binary-logistic") {
    if (data.class_count != 2)
      throw ConfigError("binary-logistic needs exactly 2 distinct labels, found " +
                        std::to_string(data.class_count));
    return {LossKind::BinaryLogistic, 2};
  }
  if (name == "multinomial-logistic") {
    if (data.class_count < 2)
      throw ConfigError("multinomial-logistic needs >= 2 distinct labels");
    return {LossKind::MultinomialLogistic, data.class_count};
  }
  if (name == "squared") return {LossKind::Squared, 1};
  throw ConfigError("unknown loss kind '" + name + "'");
}

SmoothLoss::SmoothLoss(LossSpec spec, std::shared_ptr<const SparseDataset> data)
    : spec_(spec), data_(std::move(data)) {
  if (!data_) throw ConfigError("loss needs a dataset");
  if (spec_.kind != LossKind::Squared) {
    if (spec_.class_count < 2)
      throw ConfigError("logistic loss needs class_count >= 2");
    if (spec_.kind == LossKind::BinaryLogistic && spec_.class_count != 2)
      throw ConfigError("binary logistic has class_count = 2");
    for (const auto& row : data_->rows)
      if (row.label < 0 || row.label >= spec_.class_count)
        throw IndexError("sample label " + std::to_string(row.label) +
                         " out of range for " +
                         std::to_string(spec_.class_count) + " classes");
  }
}

void SmoothLoss::check_args(std::span<const double> w, int i) const {
  require_length(w, static_cast<std::size_t>(param_dim()), "loss weights");
  if (i < 0 || i >= components())
    throw IndexError("component index " + std::to_string(i) +
                     " out of range [0, " + std::to_string(components()) + ")");
}

double SmoothLoss::component_cores(std::span<const double> w, int i,
                                   std::span<double> cores) const {
  check_args(w, i);
  require_length(cores, static_cast<std::size_t>(spec_.blocks()), "cores");
  const LabeledSample& row = data_->rows[i];

  if (spec_.kind == LossKind::Squared) {
    double z = 0.0;
    for (const Feature& f : row.features) z += w[f.index] * f.value;
    const double r = z - row.raw_label;
    cores[0] = r;
    return 0.5 * r * r;
  }

  const int blocks = spec_.blocks();
  const int d = data_->d;
  double zmax = 0.0;  // the pinned class scores 0
  double z_stack[8];
  Vec z_heap;
  double* z = blocks <= 8 ? z_stack : (z_heap.resize(blocks), z_heap.data());
  for (int b = 0; b < blocks; ++b) {
    double s = 0.0;
    const double* wb = w.data() + static_cast<std::size_t>(b) * d;
    for (const Feature& f : row.features) s += wb[f.index] * f.value;
    z[b] = s;
    zmax = std::max(zmax, s);
  }
  double denom = std::exp(-zmax);  // the pinned class term
  for (int b = 0; b < blocks; ++b) denom += std::exp(z[b] - zmax);
  const double lse = zmax + std::log(denom);
  for (int b = 0; b < blocks; ++b) {
    const double p = std::exp(z[b] - zmax) / denom;
    cores[b] = p - (row.label == b ? 1.0 : 0.0);
  }
  double value = lse;
  if (row.label < blocks) value -= z[row.label];
  return value;
}

void SmoothLoss::scatter_cores(int i, std::span<const double> cores,
                               double scale, std::span<double> acc) const {
  const LabeledSample& row = data_->rows[i];
  const int d = data_->d;
  for (int b = 0; b < spec_.blocks(); ++b) {
    const double c = scale * cores[b];
    if (c == 0.0) continue;
    double* out = acc.data() + static_cast<std::size_t>(b) * d;
    for (const Feature& f : row.features) out[f.index] += c * f.value;
  }
}

double SmoothLoss::component_value(std::span<const double> w, int i) const {
  double cores_stack[8];
  Vec heap;
  const int blocks = spec_.blocks();
  std::span<double> cores =
      blocks <= 8 ? std::span<double>(cores_stack, blocks)
                  : (heap.resize(blocks), std::span<double>(heap));
  return component_cores(w, i, cores);
}

double SmoothLoss::component_value_grad(std::span<const double> w, int i,
                                        std::span<double> grad) const {
  require_length(grad, static_cast<std::size_t>(param_dim()), "gradient out");
  double cores_stack[8];
  Vec heap;
  const int blocks = spec_.blocks();
  std::span<double> cores =
      blocks <= 8 ? std::span<double>(cores_stack, blocks)
                  : (heap.resize(blocks), std::span<double>(heap));
  const double v = component_cores(w, i, cores);
  fill(grad, 0.0);
  scatter_cores(i, cores, 1.0, grad);
  return v;
}

double smoothness_bound(const LossSpec& spec, const SparseDataset& data,
                        bool* warned_unnormalized) {
  if (warned_unnormalized) *warned_unnormalized = false;
  const double max_sq = data.max_row_squared_norm();
  if (spec.kind == LossKind::Squared) return max_sq;

  const double factor = spec.blocks() == 1 ? 0.25 : 0.5;
  if (data.normalized) return factor;
  if (warned_unnormalized) *warned_unnormalized = true;
  return factor * max_sq;
}

}  // namespace vrada
