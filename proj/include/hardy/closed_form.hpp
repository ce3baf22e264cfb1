#pragma once

#include <stdexcept>

namespace hardy {

/// Hardy success probability P(Y1=+1, Y2=+1) for a pair of Schmidt weights:
///   p1^2 p2^2 (p1 - p2)^2 / (p1^2 + p2^2 - p1 p2)^2.
/// Exact over any ordered field scalar; zero when p1 == p2.
template <typename Scalar>
Scalar hardy_closed_form(const Scalar& p1, const Scalar& p2) {
  if (p1 < Scalar(0) || p2 < Scalar(0))
    throw std::invalid_argument("hardy_closed_form: weights must be nonnegative");
  if (p1 == Scalar(0) && p2 == Scalar(0))
    throw std::invalid_argument("hardy_closed_form: both weights are zero");
  const Scalar diff = p1 - p2;
  const Scalar num = p1 * p1 * p2 * p2 * diff * diff;
  const Scalar den = p1 * p1 + p2 * p2 - p1 * p2;
  return num / (den * den);
}

}  // namespace hardy
