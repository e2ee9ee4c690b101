#include "core/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace vrada {

double SparseDataset::row_squared_norm(int j) const {
  double s = 0.0;
  for (const Feature& f : rows[j].features) s += f.value * f.value;
  return s;
}

double SparseDataset::max_row_squared_norm() const {
  double m = 0.0;
  for (int j = 0; j < n; ++j) m = std::max(m, row_squared_norm(j));
  return m;
}

namespace {

double parse_double_token(const std::string& tok, int line_no,
                          const char* what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects "+1"
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (first == last || ec != std::errc() || ptr != last)
    throw ParseError(std::string("bad ") + what + " token '" + tok + "'",
                     line_no);
  return v;
}

long parse_index_token(const std::string& tok, int line_no) {
  long v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (first == last || ec != std::errc() || ptr != last)
    throw ParseError("bad feature index '" + tok + "'", line_no);
  return v;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in) {
  SparseDataset ds;
  std::map<double, int> seen_labels;
  std::string line;
  int line_no = 0;
  int max_index = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank or comment-only line

    LabeledSample sample;
    sample.raw_label = parse_double_token(tok, line_no, "label");
    seen_labels.emplace(sample.raw_label, 0);

    long prev_index = 0;  // 1-based in the file
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw ParseError("expected <index>:<value>, got '" + tok + "'",
                         line_no);
      const long idx = parse_index_token(tok.substr(0, colon), line_no);
      if (idx < 1)
        throw ParseError("feature index must be >= 1, got " +
                             std::to_string(idx),
                         line_no);
      if (idx == prev_index)
        throw ParseError("duplicate feature index " + std::to_string(idx),
                         line_no);
      if (idx < prev_index)
        throw ParseError("feature indices not strictly increasing at " +
                             std::to_string(idx),
                         line_no);
      prev_index = idx;
      const double val =
          parse_double_token(tok.substr(colon + 1), line_no, "feature value");
      sample.features.push_back({static_cast<int>(idx - 1), val});
      max_index = std::max(max_index, static_cast<int>(idx - 1));
    }
    if (sample.features.empty()) ++ds.zero_rows;
    ds.rows.push_back(std::move(sample));
  }

  if (ds.rows.empty()) throw ParseError("no samples in input");

  ds.n = static_cast<int>(ds.rows.size());
  ds.d = max_index + 1;
  ds.class_count = static_cast<int>(seen_labels.size());
  int next_class = 0;
  for (auto& [value, cls] : seen_labels) cls = next_class++;
  for (auto& row : ds.rows) row.label = seen_labels.at(row.raw_label);
  ds.label_values.reserve(seen_labels.size());
  for (const auto& [value, cls] : seen_labels) ds.label_values.push_back(value);
  return ds;
}

SparseDataset parse_libsvm_string(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in);
}

namespace {

std::string read_gzip_file(const std::string& path) {
  gzFile gz = gzopen(path.c_str(), "rb");
  if (!gz) throw IoError("cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, got);
  const bool bad = got < 0;
  gzclose(gz);
  if (bad) throw IoError("gzip read error in '" + path + "'");
  return out;
}

}  // namespace

SparseDataset parse_libsvm_file(const std::string& path) {
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0)
    return parse_libsvm_string(read_gzip_file(path));
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_libsvm(in);
}

void serialize_libsvm(const SparseDataset& ds, std::ostream& out) {
  char buf[64];
  for (const auto& row : ds.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.raw_label);
    out << buf;
    for (const Feature& f : row.features) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", f.index + 1, f.value);
      out << buf;
    }
    out << '\n';
  }
}

void write_libsvm_file(const SparseDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  serialize_libsvm(ds, out);
}

void normalize_rows(SparseDataset& ds) {
  int zero = 0;
  for (int j = 0; j < ds.n; ++j) {
    const double nrm = std::sqrt(ds.row_squared_norm(j));
    if (nrm == 0.0) {
      ++zero;
      continue;
    }
    for (Feature& f : ds.rows[j].features) f.value /= nrm;
  }
  ds.zero_rows = zero;
  ds.normalized = true;
}

void add_bias_column(SparseDataset& ds) {
  if (ds.has_bias) return;
  for (auto& row : ds.rows) row.features.push_back({ds.d, 1.0});
  ++ds.d;
  ds.has_bias = true;
}

void override_dim(SparseDataset& ds, int d) {
  if (d < ds.d)
    throw ConfigError("dim override " + std::to_string(d) +
                      " is below inferred dimension " + std::to_string(ds.d));
  ds.d = d;
}

namespace {

// Gaussian elimination with partial pivoting; a is k x k row-major.
Vec solve_dense(std::vector<double> a, Vec b, int k, const char* what) {
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::fabs(a[r * k + col]) > std::fabs(a[piv * k + col])) piv = r;
    if (std::fabs(a[piv * k + col]) < 1e-300)
      throw NumericError(std::string(what) + ": singular system");
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a[piv * k + c], a[col * k + c]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / a[col * k + col];
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
      b[r] -= f * b[col];
    }
  }
  Vec x(k, 0.0);
  for (int r = k - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < k; ++c) s -= a[r * k + c] * x[c];
    x[r] = s / a[r * k + r];
  }
  return x;
}

}  // namespace

RidgeSolution solve_ridge_exact(const SparseDataset& ds, double sigma) {
  if (sigma < 0) throw ConfigError("sigma must be nonnegative");
  const int n = ds.n;
  const int d = ds.d;
  RidgeSolution sol;

  if (sigma == 0.0 && n < d) {
    // Underdetermined least squares: minimum-norm interpolant x = A^T y with
    // (A A^T) y = b. Residuals are zero, so f* = 0 and the minimizer set is
    // an affine subspace.
    std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        auto& fi = ds.rows[i].features;
        auto& fj = ds.rows[j].features;
        std::size_t p = 0, q = 0;
        while (p < fi.size() && q < fj.size()) {
          if (fi[p].index == fj[q].index)
            s += fi[p++].value * fj[q++].value;
          else if (fi[p].index < fj[q].index)
            ++p;
          else
            ++q;
        }
        gram[i * n + j] = gram[j * n + i] = s;
      }
    Vec b(n);
    for (int i = 0; i < n; ++i) b[i] = ds.rows[i].raw_label;
    Vec y = solve_dense(std::move(gram), std::move(b), n, "ridge oracle");
    sol.x_star.assign(d, 0.0);
    for (int i = 0; i < n; ++i)
      for (const Feature& f : ds.rows[i].features)
        sol.x_star[f.index] += y[i] * f.value;
    sol.unique = false;
  } else {
    // Normal equations (A^T A / n + sigma I) x = A^T b / n.
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    Vec rhs(d, 0.0);
    for (int j = 0; j < n; ++j) {
      const auto& feats = ds.rows[j].features;
      for (const Feature& fa : feats) {
        for (const Feature& fb : feats)
          m[static_cast<std::size_t>(fa.index) * d + fb.index] +=
              fa.value * fb.value;
        rhs[fa.index] += fa.value * ds.rows[j].raw_label;
      }
    }
    for (auto& v : m) v /= n;
    for (auto& v : rhs) v /= n;
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] += sigma;
    sol.x_star = solve_dense(std::move(m), std::move(rhs), d, "ridge oracle");
    sol.unique = true;
  }

  double f = 0.0;
  for (int j = 0; j < n; ++j) {
    double pred = 0.0;
    for (const Feature& fe : ds.rows[j].features)
      pred += fe.value * sol.x_star[fe.index];
    const double r = pred - ds.rows[j].raw_label;
    f += 0.5 * r * r;
  }
  f /= n;
  f += 0.5 * sigma * squared_norm(sol.x_star);
  sol.f_star = f;
  return sol;
}

SparseDataset synth_ridge_data(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigError("synth_ridge needs n, d >= 1");
  CounterRng rng(seed);
  Vec planted(d);
  for (double& w : planted) w = rng.uniform_real(-1.0, 1.0);

  SparseDataset ds;
  ds.n = n;
  ds.d = d;
  ds.class_count = 1;
  ds.rows.resize(n);
  for (int j = 0; j < n; ++j) {
    auto& row = ds.rows[j];
    row.features.reserve(d);
    double z = 0.0;
    for (int i = 0; i < d; ++i) {
      const double v = rng.uniform_real(-1.0, 1.0);
      row.features.push_back({i, v});
      z += v * planted[i];
    }
    row.raw_label = z + 0.1 * rng.uniform_real(-1.0, 1.0);
    row.label = 0;
  }
  return ds;
}

SparseDataset synth_binary_classification(int n, int d, int nnz,
                                          std::uint64_t seed) {
  if (n < 1 || d < 1 || nnz < 1 || nnz > d)
    throw ConfigError("synth_binary_classification needs n,d >= 1, 1 <= nnz <= d");
  CounterRng rng(seed);
  Vec planted(d);
  for (double& w : planted) w = rng.uniform_real(-1.0, 1.0);

  SparseDataset ds;
  ds.n = n;
  ds.d = d;
  ds.class_count = 2;
  ds.label_values = {-1.0, 1.0};
  ds.rows.resize(n);
  std::vector<int> idx;
  for (int j = 0; j < n; ++j) {
    idx.clear();
    while (static_cast<int>(idx.size()) < nnz) {
      const int cand = static_cast<int>(rng.uniform_index(d));
      if (std::find(idx.begin(), idx.end(), cand) == idx.end())
        idx.push_back(cand);
    }
    std::sort(idx.begin(), idx.end());
    auto& row = ds.rows[j];
    double z = 0.0;
    for (int i : idx) {
      row.features.push_back({i, 1.0});
      z += planted[i];
    }
    const double p = 1.0 / (1.0 + std::exp(-1.5 * z));
    const bool positive = rng.uniform_real(0.0, 1.0) < p;
    row.raw_label = positive ? 1.0 : -1.0;
    row.label = positive ? 1 : 0;
  }
  return ds;
}

}  // namespace vrada
