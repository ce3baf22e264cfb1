#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/schmidt.hpp"
#include "hardy/state.hpp"

namespace hardy {

/// The pair of 2x2 unitaries generating the Hardy measurement bases from a
/// distinct, nonzero weight pair (p1, p2). U maps the Schmidt pair to the
/// x basis; V maps the x basis to the y basis.
struct HardyUnitaries {
  double p1 = 0, p2 = 0;
  Eigen::Matrix2cd U, V;
};

/// pre: p1, p2 > 0. Scale-invariant in (p1, p2); a uniform pair degenerates
/// to U = H-like rotation and V = swap, which is valid but useless downstream.
HardyUnitaries build_unitaries(double p1, double p2);

/// Hardy basis vectors for both sides of the cut, expressed in the ambient
/// group spaces. x/y are the two measurement settings; +/- the outcomes
/// that, together with the orthogonal complement, exhaust each space.
struct HardyBases {
  Eigen::VectorXcd x_plus_1, x_minus_1, y_plus_1, y_minus_1;
  Eigen::VectorXcd x_plus_2, x_minus_2, y_plus_2, y_minus_2;
};

HardyBases build_bases(const SchmidtDecomposition& sd, std::pair<Eigen::Index, Eigen::Index> pair);

/// One outcome of a coarse observable: eigenvalue plus the orthonormal
/// columns spanning its eigenspace. A complement outcome owns whatever the
/// explicit outcomes of the family leave over (identity minus their sum).
struct ObservableOutcome {
  double eigenvalue = 0;
  Eigen::MatrixXcd basis;  // space_dim x subspace_dim (empty for complement)
  bool complement = false;
};

/// Observable acting on a group of parties (ascending order) of the state.
struct ObservableFamily {
  std::string name;
  std::vector<int> parties;
  Eigen::Index space_dim = 0;
  std::vector<ObservableOutcome> outcomes;

  const ObservableOutcome* find(double eigenvalue) const;
};

/// The four Hardy observables X1, Y1, X2, Y2. Outcomes +1 and -1 are the
/// corresponding basis rays; outcome 0 is the complement and is omitted when
/// the side is two-dimensional.
struct HardyObservables {
  ObservableFamily x1, y1, x2, y2;
};

HardyObservables build_observables(const HardyBases& bases, const Bipartition& cut,
                                   const std::vector<Eigen::Index>& dims);

/// Everything derived from one eligible state and cut.
struct HardySettings {
  Bipartition cut;
  SchmidtDecomposition schmidt;
  std::pair<Eigen::Index, Eigen::Index> pair{0, 1};
  double p1 = 0, p2 = 0;
  HardyUnitaries unitaries;
  HardyBases bases;
  HardyObservables observables;
};

/// Runs the full pipeline: Schmidt decomposition, eligibility check, basis
/// and observable construction. Throws IneligibleStateError when the cut is
/// product or uniform-spectrum; pair_override selects a specific weight pair
/// (must be distinct and nonzero) instead of the classifier's choice.
HardySettings build_hardy_settings(
    const MultipartiteState& state, const Bipartition& cut,
    std::optional<std::pair<Eigen::Index, Eigen::Index>> pair_override = std::nullopt,
    double distinct_tol = kDistinctWeightRelTol);

/// Residual norms of the three equivalent expansions of the state: in the
/// Schmidt pair bases, in (y1, x2), and in (x1, y2), each rebuilt from the
/// construction's coefficients and compared against the original amplitudes.
std::array<double, 3> equivalent_forms_residual(const MultipartiteState& state,
                                                const HardySettings& settings);

}  // namespace hardy
