#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/born.hpp"
#include "hardy/construct.hpp"
#include "hardy/lhv.hpp"
#include "hardy/state.hpp"

namespace hardy {

// Raised when no component of a peeling decomposition admits the two-party
// construction (e.g. GHZ- or W-like states).
class NoEligibleComponentError : public std::runtime_error {
 public:
  explicit NoEligibleComponentError(const std::string& what) : std::runtime_error(what) {}
};

// psi = sum_k q_k phi_k (x) tau_k across the {1,2} | {3} cut, with the
// eligible component moved to the front. selected_rank records its position
// in the original descending-weight order.
struct TripartiteDecomposition {
  Eigen::VectorXd q_coefficients;
  Eigen::MatrixXcd pair_states;  // (d1*d2) x k columns phi_k
  Eigen::MatrixXcd tail_basis;   // d3 x k columns tau_k
  Eigen::Index eligible_index = 0;
  Eigen::Index selected_rank = 0;
  std::vector<Eigen::Index> pair_dims;
};

TripartiteDecomposition tripartite_decompose(const MultipartiteState& state,
                                             double distinct_tol = kDistinctWeightRelTol);

// Binary observable on one party: eigenvalue 1 on span{tau_selected},
// eigenvalue 0 on its orthogonal complement.
ObservableFamily build_T_observable(const Eigen::MatrixXcd& tau_basis, Eigen::Index selected,
                                    int party, const std::string& name = "T");

// Which pair of parties carries the two-party construction and in which
// order the remaining parties are peeled off (outermost first).
struct PeelingPlan {
  std::pair<int, int> hardy_pair{0, 1};
  std::vector<int> peel_order;

  static PeelingPlan standard(int party_count);
};

// Result of a successful peel: the two-party core plus one record per peeled
// party. The core's observables act on the original parties of hardy_pair;
// its cut/schmidt data live in the coordinates of `component`, the final
// two-party state the construction was built on.
struct NpartiteSettings {
  HardySettings core;
  std::vector<PeelRecord> peels;  // outermost first
  MultipartiteState component;
};

NpartiteSettings build_npartite_settings(const MultipartiteState& state, const PeelingPlan& plan,
                                         double distinct_tol = kDistinctWeightRelTol);

HardyReport npartite_report(const MultipartiteState& state, const PeelingPlan& plan,
                            double tolerance = kDefaultConditionTol);

HardyReport tripartite_report(const MultipartiteState& state,
                              double tolerance = kDefaultConditionTol);

// Probability table over hardy_scenario(#peels) for the pinned measurement
// layout: party 0 -> {X1, Y1}, party 1 -> {X2, Y2}, tail k -> peels[k].
std::vector<double> npartite_quantum_table(const MultipartiteState& state,
                                           const NpartiteSettings& settings);

// Exhaustive impossibility certificate for the three-party scenario (two
// full parties plus one binary tail): 162 strategies.
ContradictionCertificate tripartite_contradiction(const Scenario& scenario);
ContradictionCertificate tripartite_contradiction();

}  // namespace hardy
