#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/vec.hpp"

namespace vrada {

struct Feature {
  int index;  // 0-based internally; LibSVM's 1-based indices are shifted at parse time
  double value;
  bool operator==(const Feature&) const = default;
};

struct LabeledSample {
  std::vector<Feature> features;  // strictly increasing indices
  double raw_label = 0.0;         // as parsed; squared loss reads this as the target
  int label = 0;                  // class index in {0..c-1}, by sorted raw label
  bool operator==(const LabeledSample&) const = default;
};

// Row-wise sparse design matrix with labels.
struct SparseDataset {
  std::vector<LabeledSample> rows;
  int n = 0;
  int d = 0;                        // max feature index + 1 unless overridden
  int class_count = 0;              // number of distinct raw labels
  bool normalized = false;
  int zero_rows = 0;                // rows with no features / zero norm, kept but counted
  bool has_bias = false;
  std::vector<double> label_values; // sorted distinct raw labels; class i = label_values[i]

  double row_squared_norm(int j) const;
  double max_row_squared_norm() const;
};

// `<label> <index>:<value> ...`, 1-based strictly increasing indices,
// `#` starts a comment. Throws ParseError with the offending line number.
SparseDataset parse_libsvm(std::istream& in);
SparseDataset parse_libsvm_string(const std::string& text);
// Transparently gunzips when the path ends in ".gz".
SparseDataset parse_libsvm_file(const std::string& path);

void serialize_libsvm(const SparseDataset& ds, std::ostream& out);
void write_libsvm_file(const SparseDataset& ds, const std::string& path);

// Scales every nonzero row to unit Euclidean norm. Idempotent; zero rows
// pass through and bump zero_rows.
void normalize_rows(SparseDataset& ds);

// Appends a constant-1 coordinate at index d. Applied after normalization on
// purpose: the bias coordinate itself is never normalized.
void add_bias_column(SparseDataset& ds);

// Widen the dimension (for train/test splits parsed separately).
void override_dim(SparseDataset& ds, int d);

struct RidgeSolution {
  Vec x_star;
  double f_star = 0.0;
  bool unique = true;  // false when sigma == 0 and the least-squares solution is non-unique
};

// Exact minimizer of (1/n) sum_j 1/2 (<a_j,x> - b_j)^2 + (sigma/2)||x||^2 by
// direct linear solve; the independent oracle for the solver audits.
RidgeSolution solve_ridge_exact(const SparseDataset& ds, double sigma);

// Random dense-row least-squares instance (targets from a planted model plus
// noise). Feature values and the planted model come from the seeded stream.
SparseDataset synth_ridge_data(int n, int d, std::uint64_t seed);

// Sparse binary-feature two-class sample in the style of the LibSVM adult
// data: nnz active features per row, labels +-1 from a planted logistic
// model. Used for desk-scale benchmark runs.
SparseDataset synth_binary_classification(int n, int d, int nnz,
                                          std::uint64_t seed);

}  // namespace vrada
