#pragma once

#include <optional>
#include <utility>

#include "hardy/state.hpp"
#include "hardy/types.hpp"

namespace hardy {

/// Schmidt form of a state across a bipartition:
///   psi = sum_i coefficients[i] * left_basis.col(i) (x) right_basis.col(i)
/// Coefficients are the Schmidt coefficients (singular values), sorted
/// descending with sum of squares 1; basis columns are orthonormal. Phases
/// follow a fixed gauge: the largest-magnitude entry of each left column
/// (first such entry on ties) is real positive.
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;  // p_i, descending, sum p_i^2 = 1
  Eigen::MatrixXcd left_basis;   // group1_dim x count
  Eigen::MatrixXcd right_basis;  // group2_dim x count
  Eigen::Index rank = 0;         // coefficients above kZeroWeightTol
};

SchmidtDecomposition schmidt_decompose(const MultipartiteState& state, const Bipartition& cut);

enum class EligibilityTag {
  Product,          // rank 1
  UniformSpectrum,  // rank >= 2 but no two distinct nonzero weights
  HardyEligible,    // some pair of distinct nonzero weights exists
};

const char* to_string(EligibilityTag tag);

struct EligibilityClass {
  EligibilityTag tag = EligibilityTag::Product;
  /// For HardyEligible: indices (i, j), i < j, of the distinct nonzero weight
  /// pair maximizing the Hardy success probability.
  std::optional<std::pair<Eigen::Index, Eigen::Index>> witness_pair;
};

/// Classifies a Schmidt spectrum. Two weights count as distinct when
/// |p_i - p_j| > distinct_tol * max(p_i, p_j); a weight counts as nonzero
/// when it exceeds kZeroWeightTol.
EligibilityClass classify(const SchmidtDecomposition& sd,
                          double distinct_tol = kDistinctWeightRelTol);

class IneligibleStateError : public std::runtime_error {
 public:
  IneligibleStateError(EligibilityTag tag, const std::string& what)
      : std::runtime_error(what), tag_(tag) {}
  EligibilityTag tag() const { return tag_; }

 private:
  EligibilityTag tag_;
};

}  // namespace hardy
