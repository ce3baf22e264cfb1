#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hardy {

/// Outcome of the feasibility question {x >= 0 : Ax = b}.
/// Feasible: `solution` is one such x. Infeasible: `farkas` is a vector y
/// with y^T A <= 0 (entrywise) and y^T b > 0, which no nonnegative x can
/// satisfy; both sides are checkable by direct arithmetic.
template <typename Scalar>
struct FeasibilityCertificate {
  bool feasible = false;
  std::vector<Scalar> solution;
  std::vector<Scalar> farkas;
  Scalar infeasibility{};  // optimal phase-1 objective (0 when feasible)
};

/// Phase-1 simplex with Bland's rule on a dense row-major m x n matrix.
/// Scalar may be floating point (pass a small positive eps) or an exact
/// rational type (pass eps = 0). Plain vectors rather than matrix types keep
/// the arithmetic scalar-agnostic.
template <typename Scalar>
FeasibilityCertificate<Scalar> solve_feasibility(std::size_t m, std::size_t n,
                                                 const std::vector<Scalar>& a,
                                                 std::vector<Scalar> b, const Scalar& eps,
                                                 std::size_t max_pivots = 1000000) {
  if (a.size() != m * n) throw std::invalid_argument("solve_feasibility: matrix size mismatch");
  if (b.size() != m) throw std::invalid_argument("solve_feasibility: rhs size mismatch");

  // Sign-flip rows so b >= 0; remember flips to unflip the Farkas vector.
  std::vector<int> row_sign(m, 1);
  const std::size_t cols = n + m + 1;  // originals, artificials, rhs
  std::vector<std::vector<Scalar>> t(m, std::vector<Scalar>(cols, Scalar(0)));
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < Scalar(0)) row_sign[i] = -1;
    for (std::size_t j = 0; j < n; ++j)
      t[i][j] = row_sign[i] == 1 ? a[i * n + j] : -a[i * n + j];
    t[i][n + i] = Scalar(1);
    t[i][cols - 1] = row_sign[i] == 1 ? b[i] : -b[i];
  }

  // Reduced-cost row for minimizing the sum of artificials, with the
  // artificial basis priced out. The rhs cell holds minus the objective so
  // one uniform elimination keeps the whole row consistent.
  std::vector<Scalar> reduced(cols, Scalar(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < cols; ++j) reduced[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) reduced[n + i] += Scalar(1);

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw std::runtime_error("solve_feasibility: pivot limit exceeded");

    // Bland: entering column = smallest index with negative reduced cost.
    std::size_t enter = cols - 1;
    for (std::size_t j = 0; j < cols - 1; ++j) {
      if (reduced[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols - 1) break;  // optimal

    // Ratio test; Bland tie-break on the smallest basis variable.
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(t[i][enter] > eps)) continue;
      if (leave == m) {
        leave = i;
        continue;
      }
      const Scalar lhs = t[i][cols - 1] * t[leave][enter];
      const Scalar rhs = t[leave][cols - 1] * t[i][enter];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
    }
    if (leave == m)
      throw std::logic_error("solve_feasibility: unbounded phase-1 objective");  // cannot happen

    // Pivot on (leave, enter).
    const Scalar piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    t[leave][enter] = Scalar(1);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const Scalar f = t[i][enter];
      if (f == Scalar(0)) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
      t[i][enter] = Scalar(0);
    }
    const Scalar fr = reduced[enter];
    if (fr != Scalar(0)) {
      for (std::size_t j = 0; j < cols; ++j) reduced[j] -= fr * t[leave][j];
      reduced[enter] = Scalar(0);
    }
    basis[leave] = enter;
  }

  const Scalar objective = -reduced[cols - 1];
  FeasibilityCertificate<Scalar> cert;
  cert.infeasibility = objective;
  if (objective <= eps) {
    cert.feasible = true;
    cert.solution.assign(n, Scalar(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) cert.solution[basis[i]] = t[i][cols - 1];
  } else {
    // Dual prices: y_i = 1 - reduced cost of artificial i; undo row flips.
    cert.farkas.assign(m, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) {
      const Scalar yi = Scalar(1) - reduced[n + i];
      cert.farkas[i] = row_sign[i] == 1 ? yi : -yi;
    }
  }
  return cert;
}

}  // namespace hardy
