#include "core/regularizer.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace vrada {

Regularizer::Regularizer(RegKind kind, double lambda2, double lambda1)
    : kind_(kind), lambda2_(lambda2), lambda1_(lambda1) {
  if (lambda2 < 0 || lambda1 < 0)
    throw ConfigError("regularizer weights must be nonnegative");
  switch (kind) {
    case RegKind::Zero:
      if (lambda2 != 0 || lambda1 != 0)
        throw ConfigError("zero regularizer must have zero weights");
      break;
    case RegKind::L2:
      if (lambda1 != 0) throw ConfigError("l2 regularizer has lambda1 = 0");
      break;
    case RegKind::L1:
      if (lambda2 != 0) throw ConfigError("l1 regularizer has lambda2 = 0");
      break;
    case RegKind::Elastic:
      break;
  }
}

double Regularizer::value(std::span<const double> x) const {
  if (kind_ == RegKind::Zero) return 0.0;
  double v = 0.0;
  if (lambda2_ > 0) v += 0.5 * lambda2_ * squared_norm(x);
  if (lambda1_ > 0) v += lambda1_ * l1_norm(x);
  return v;
}

void Regularizer::prox(std::span<const double> v, double t,
                       std::span<double> out) const {
  if (t < 0) throw ConfigError("prox step must be nonnegative");
  require_length(out, v.size(), "prox output");
  const double thr = t * lambda1_;
  const double shrink = 1.0 / (1.0 + t * lambda2_);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double z = v[i];
    if (thr > 0) {
      if (z > thr)
        z -= thr;
      else if (z < -thr)
        z += thr;
      else
        z = 0.0;
    }
    out[i] = z * shrink;
  }
}

Vec Regularizer::prox(std::span<const double> v, double t) const {
  Vec out(v.size());
  prox(v, t, out);
  return out;
}

std::string Regularizer::kind_name() const {
  switch (kind_) {
    case RegKind::Zero: return "zero";
    case RegKind::L2: return "l2";
    case RegKind::L1: return "l1";
    case RegKind::Elastic: return "elastic";
  }
  return "?";
}

}  // namespace vrada
