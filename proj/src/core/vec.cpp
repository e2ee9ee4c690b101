#include "core/vec.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace vrada {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double l1_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<double> x, double alpha) {
  for (double& v : x) v *= alpha;
}

void fill(std::span<double> x, double value) {
  for (double& v : x) v = value;
}

void lincomb(double ca, std::span<const double> a, double cb,
             std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ca * a[i] + cb * b[i];
}

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

void require_finite(std::span<const double> a, const char* what) {
  if (!all_finite(a))
    throw NumericError(std::string(what) + ": non-finite entry");
}

void require_length(std::span<const double> a, std::size_t len,
                    const char* what) {
  if (a.size() != len)
    throw ShapeError(std::string(what) + ": expected length " +
                     std::to_string(len) + ", got " + std::to_string(a.size()));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace vrada
