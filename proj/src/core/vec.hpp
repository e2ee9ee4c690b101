#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vrada {

// Parameter vectors are dense doubles; data rows are sparse (see dataset.hpp).
using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);
double l1_norm(std::span<const double> a);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(std::span<double> x, double alpha);
void fill(std::span<double> x, double value);

// out = ca*a + cb*b
void lincomb(double ca, std::span<const double> a, double cb,
             std::span<const double> b, std::span<double> out);

bool all_finite(std::span<const double> a);
void require_finite(std::span<const double> a, const char* what);
void require_length(std::span<const double> a, std::size_t len, const char* what);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace vrada
