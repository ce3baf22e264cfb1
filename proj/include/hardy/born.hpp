#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardy/closed_form.hpp"
#include "hardy/construct.hpp"
#include "hardy/state.hpp"

namespace hardy {

/// One measured observable together with the outcome whose probability is
/// being asked for. At most one entry per party group.
struct OutcomeChoice {
  const ObservableFamily* observable = nullptr;
  double eigenvalue = 0;
};
using OutcomeAssignment = std::vector<OutcomeChoice>;

/// Born rule: squared norm of the state after applying every listed outcome
/// projector (identity on unmeasured parties). Observables must act on
/// disjoint party groups; the eigenvalue must exist in the family.
double joint_probability(const MultipartiteState& state, const OutcomeAssignment& assignment);

/// Like joint_probability but treats an eigenvalue absent from a family
/// (e.g. the 0 outcome on a two-dimensional side) as an impossible event
/// with probability exactly 0.
double joint_probability_or_zero(const MultipartiteState& state,
                                 const std::vector<std::pair<const ObservableFamily*, double>>& events);

struct HardyCondition {
  std::string label;
  double value = 0;
  bool expect_zero = true;
  bool pass = false;
};

struct PeelRecord {
  int party = 0;               // 0-based party index in the original state
  Eigen::Index selected = 0;   // rank of the selected component (descending weights)
  double weight = 0;           // Schmidt coefficient q of the component
  double t1_probability = 0;   // q^2 = P(T=t1) given the outer selections
  ObservableFamily t_observable;
};

/// Result of checking the five zero conditions and the positive success
/// condition on a state. For peeled multiparty runs each condition carries
/// the extra T=t1 clauses and `peels` records one entry per peeled party.
struct HardyReport {
  std::vector<HardyCondition> conditions;  // order: the five zeros, then the success condition
  double closed_form = 0;                  // success probability predicted from (p1, p2)
  double predicted_success = 0;            // closed_form times all selected t1 probabilities
  std::pair<Eigen::Index, Eigen::Index> pair{0, 1};
  double p1 = 0, p2 = 0;
  double tolerance = kDefaultConditionTol;
  std::array<double, 3> form_residuals{};
  std::vector<PeelRecord> peels;

  bool pass() const;
};

/// Builds the measurement setup for the cut (unless given one) and evaluates
/// all six conditions by projector contraction.
HardyReport hardy_report(const MultipartiteState& state, const Bipartition& cut,
                         std::optional<std::pair<Eigen::Index, Eigen::Index>> pair_override =
                             std::nullopt,
                         double tolerance = kDefaultConditionTol);
HardyReport hardy_report(const MultipartiteState& state, const HardySettings& settings,
                         double tolerance = kDefaultConditionTol);

struct ScanPoint {
  double theta = 0, p1 = 0, p2 = 0, probability = 0;
};

struct ScanResult {
  std::vector<ScanPoint> points;  // theta from 0 to pi/4 inclusive
  std::size_t argmax = 0;
  double max_probability = 0;
  double theta_max = 0;
  double p1p2_max = 0;
};

/// Success probability over the two-qubit family p1 = cos(theta),
/// p2 = sin(theta), theta on [0, pi/4] sampled at resolution+1 points.
ScanResult scan_hardy(int resolution);

/// Monte-Carlo draws from the exact joint distribution of two observables.
struct OutcomeCounts {
  std::vector<std::string> observables;          // family names, in order
  std::vector<std::vector<double>> eigenvalues;  // per entry, one eigenvalue per family
  std::vector<double> probabilities;             // exact Born probabilities
  std::vector<std::uint64_t> counts;
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
  std::string generator;  // PRNG identity, e.g. "mt19937-64"
};

/// Inverse-CDF sampling over the enumerated joint-outcome grid (row-major
/// over the two families' outcome lists). Reproducible: depends only on
/// (state, settings, n, seed). Throws std::logic_error when the enumerated
/// distribution does not sum to 1 within 1e-8.
OutcomeCounts sample_outcomes(const MultipartiteState& state, const ObservableFamily& first,
                              const ObservableFamily& second, std::uint64_t n, std::uint64_t seed);

}  // namespace hardy
