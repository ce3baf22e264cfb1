#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hardy {

using Complex = std::complex<double>;

// Numerical policy shared across the library.
inline constexpr double kNormTol = 1e-12;              // state normalization slack
inline constexpr double kZeroWeightTol = 1e-12;        // Schmidt weight below this counts as zero
inline constexpr double kDistinctWeightRelTol = 1e-9;  // |p_i - p_j| > tol*max(p_i,p_j) means distinct
inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kDefaultConditionTol = 1e-10;  // Hardy zero-condition threshold
inline constexpr Eigen::Index kDefaultMaxTotalDim = 4096;

/// Total-dimension cap for state construction. The HARDY_MAX_DIM
/// environment variable overrides the default of 4096.
Eigen::Index max_total_dim();

}  // namespace hardy
