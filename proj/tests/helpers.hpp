#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "core/objective.hpp"
#include "core/rng.hpp"

namespace vrada::test {

// Hand-built dataset from (features, raw_label) rows; class indices follow
// the parser's sorted-raw-label rule.
inline SparseDataset make_dataset(
    std::vector<std::pair<std::vector<Feature>, double>> rows) {
  SparseDataset ds;
  std::vector<double> labels;
  int maxidx = -1;
  for (auto& [feats, label] : rows) {
    LabeledSample s;
    s.features = feats;
    s.raw_label = label;
    for (const Feature& f : feats) maxidx = std::max(maxidx, f.index);
    if (feats.empty()) ++ds.zero_rows;
    ds.rows.push_back(std::move(s));
    labels.push_back(label);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  ds.label_values = labels;
  for (auto& r : ds.rows)
    r.label = static_cast<int>(
        std::lower_bound(labels.begin(), labels.end(), r.raw_label) -
        labels.begin());
  ds.n = static_cast<int>(ds.rows.size());
  ds.d = maxidx + 1;
  ds.class_count = static_cast<int>(labels.size());
  return ds;
}

// The two-component quadratic g_i(x) = 1/2 (x - b_i)^2 with b = (0, 2):
// squared loss over rows with a single unit feature.
inline std::shared_ptr<const SparseDataset> quad2() {
  return std::make_shared<SparseDataset>(
      make_dataset({{{{0, 1.0}}, 0.0}, {{{0, 1.0}}, 2.0}}));
}

// One-component 1-d quadratic g(x) = 1/2 (x - b)^2.
inline std::shared_ptr<const SparseDataset> quad1(double b = 0.0) {
  return std::make_shared<SparseDataset>(make_dataset({{{{0, 1.0}}, b}}));
}

inline CompositeObjective make_objective(std::shared_ptr<const SparseDataset> ds,
                                         LossSpec spec, Regularizer reg) {
  return CompositeObjective(std::move(ds), spec, std::move(reg));
}

inline CompositeObjective squared_objective(
    std::shared_ptr<const SparseDataset> ds, Regularizer reg = Regularizer::zero()) {
  return make_objective(std::move(ds), {LossKind::Squared, 1}, std::move(reg));
}

// Random multiclass dataset with normalized rows for the loss property tests.
inline std::shared_ptr<SparseDataset> random_classification(
    int n, int d, int classes, std::uint64_t seed, bool normalize = true) {
  CounterRng rng(seed);
  std::vector<std::pair<std::vector<Feature>, double>> rows;
  for (int j = 0; j < n; ++j) {
    std::vector<Feature> feats;
    for (int i = 0; i < d; ++i)
      if (rng.uniform_real(0.0, 1.0) < 0.7)
        feats.push_back({i, rng.uniform_real(-1.0, 1.0)});
    if (feats.empty()) feats.push_back({0, 1.0});
    rows.push_back({feats, static_cast<double>(rng.uniform_index(classes))});
  }
  auto ds = std::make_shared<SparseDataset>(make_dataset(std::move(rows)));
  // make_dataset maps labels by sorted value; force the expected class count
  // even if some class is absent in a small draw
  ds->class_count = std::max(ds->class_count, classes);
  if (normalize) normalize_rows(*ds);
  return ds;
}

inline Vec random_vec(int d, CounterRng& rng, double lo = -1.0, double hi = 1.0) {
  Vec v(d);
  for (double& x : v) x = rng.uniform_real(lo, hi);
  return v;
}

// Central finite differences with per-coordinate step 1e-6 * max(1, |x_j|).
template <typename F>
Vec finite_difference_gradient(F&& f, const Vec& x) {
  Vec g(x.size());
  Vec p = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
    p[j] = x[j] + h;
    const double fp = f(p);
    p[j] = x[j] - h;
    const double fm = f(p);
    p[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace vrada::test
