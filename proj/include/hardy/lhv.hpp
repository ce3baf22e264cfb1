#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hardy/born.hpp"
#include "hardy/construct.hpp"
#include "hardy/rational.hpp"
#include "hardy/state.hpp"

namespace hardy {

inline constexpr std::size_t kDefaultStrategyCap = 10000000;

/// One measurement setting: a label plus its eigenvalue list.
struct SettingSpec {
  std::string label;
  std::vector<double> outcomes;
};

/// Finite measurement scenario: per party, the list of available settings.
struct Scenario {
  std::vector<std::vector<SettingSpec>> parties;

  int party_count() const { return static_cast<int>(parties.size()); }
  /// Number of deterministic strategies, or nullopt when it exceeds `cap`.
  std::optional<std::size_t> strategy_count(std::size_t cap = kDefaultStrategyCap) const;
  /// Total length of a joint-probability table over this scenario.
  std::size_t table_size() const;
  void validate() const;
};

/// A local deterministic response: outcome[party][setting] is an index into
/// that setting's eigenvalue list.
struct DeterministicStrategy {
  std::vector<std::vector<int>> outcome;
};

/// Discrete hidden-variable model: mixture of deterministic strategies.
struct HiddenVariableModel {
  std::vector<DeterministicStrategy> strategies;
  std::vector<double> weights;  // nonnegative, sum 1 within 1e-12
};

/// Lexicographic, duplicate-free enumeration of all deterministic
/// strategies; outcome indices ordered with the last (party, setting) digit
/// varying fastest. Throws std::runtime_error above `cap`.
std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& scenario,
                                                        std::size_t cap = kDefaultStrategyCap);

/// One party's contribution to a joint event: under `setting`, the party
/// answers with outcome index `outcome`.
struct EventAtom {
  int party = 0;
  int setting = 0;
  int outcome = 0;
};

/// A joint outcome of one global setting choice (at most one atom per party).
struct JointEvent {
  std::string label;
  std::vector<EventAtom> atoms;
};

/// True when the strategy answers every atom of the event as specified.
bool strategy_selects(const Scenario& scenario, const DeterministicStrategy& strategy,
                      const JointEvent& event);

enum class VerdictKind { FailsTarget, ViolatesConstraint, Survives };

struct StrategyVerdict {
  VerdictKind kind = VerdictKind::Survives;
  std::size_t constraint = 0;  // index into zero_constraints when ViolatesConstraint
};

/// Exhaustive-enumeration impossibility certificate: every strategy either
/// fails to realize the target event or violates one of the zero
/// constraints (the first violated one, in list order, is cited).
struct ContradictionCertificate {
  Scenario scenario;
  std::vector<JointEvent> zero_constraints;
  JointEvent target;
  std::vector<DeterministicStrategy> strategies;
  std::vector<StrategyVerdict> verdicts;
  std::vector<std::size_t> survivors;
  bool conclusion = false;  // true iff no strategy survives
};

ContradictionCertificate contradiction_certificate(const Scenario& scenario,
                                                   std::vector<JointEvent> zero_constraints,
                                                   JointEvent target,
                                                   std::size_t cap = kDefaultStrategyCap);

/// The canonical scenario: two parties, settings X and Y, outcomes
/// {+1, -1, 0} each, plus `tail_parties` extra parties carrying one binary
/// setting T with outcomes {1, 0}.
Scenario hardy_scenario(int tail_parties = 0);

/// The five zero constraints in citation order (so that the first violated
/// constraint reproduces the case split of the impossibility argument:
/// strategies answering X1 != +1 cite an (X1, Y2) constraint, strategies
/// answering X1 = +1, X2 != +1 cite a (Y1, X2) constraint, and strategies
/// answering +1 to both cite the (X1, X2) constraint). With tail parties,
/// every constraint carries the extra T = t1 atoms.
std::vector<JointEvent> hardy_zero_constraints(int tail_parties = 0);
JointEvent hardy_target_event(int tail_parties = 0);

/// The 0/1 joint-outcome table of one strategy over the scenario's grid.
/// Layout: blocks by setting tuple (row-major, first party slowest), entries
/// within a block by outcome tuple (row-major, first party slowest).
std::vector<double> strategy_table(const Scenario& scenario, const DeterministicStrategy& strategy);

/// Quantum joint-probability table over the same layout. `settings[p][s]`
/// supplies the observable realizing setting s of party p; eigenvalues come
/// from the scenario (absent eigenvalues contribute probability 0).
std::vector<double> quantum_table(const MultipartiteState& state, const Scenario& scenario,
                                  const std::vector<std::vector<const ObservableFamily*>>& settings);

/// Convenience: the full table of a state under a Hardy measurement setup
/// (scenario = hardy_scenario()). The measured state may differ from the
/// one the setup was built from, as long as the cut dimensions match.
std::vector<double> hardy_quantum_table(const MultipartiteState& state, const HardySettings& setup);

/// Exact table of a rank-2 state with rational Schmidt coefficients
/// (p1^2 + p2^2 = 1 required) under its own Hardy setup; both sides
/// two-dimensional. Used by the exact LP path.
std::vector<Rational> hardy_quantum_table_exact(const Rational& p1, const Rational& p2);

enum class LhvVerdict { Feasible, Infeasible };

const char* to_string(LhvVerdict verdict);

/// LP feasibility of the table over the local polytope, with a re-checkable
/// certificate either way: a reproducing mixture, or a witness w with
/// <w, table> < 0 and <w, vertex> >= 0 for every deterministic strategy.
struct LhvFeasibilityResult {
  LhvVerdict verdict = LhvVerdict::Feasible;
  bool exact = false;
  Scenario scenario;
  std::vector<double> table;
  std::vector<Rational> table_exact;

  // Feasible: mixture over the canonical strategy enumeration.
  std::vector<std::size_t> mixture_indices;
  std::vector<double> mixture_weights;
  std::vector<Rational> mixture_weights_exact;
  double max_residual = 0;  // reproduction error, max over entries

  // Infeasible: separating witness, normalized to unit max-norm.
  std::vector<double> witness;
  std::vector<Rational> witness_exact;
  double margin = 0;          // -<w, table>  (> 0)
  double min_vertex_dot = 0;  // min over strategies of <w, vertex>
};

LhvFeasibilityResult lhv_lp_feasibility(const Scenario& scenario, const std::vector<double>& table,
                                        std::size_t cap = kDefaultStrategyCap);
LhvFeasibilityResult lhv_lp_feasibility_exact(const Scenario& scenario,
                                              const std::vector<Rational>& table,
                                              std::size_t cap = kDefaultStrategyCap);

/// Re-checks a certificate by direct arithmetic, independent of the solver.
bool verify_certificate(const LhvFeasibilityResult& result);
bool verify_certificate(const ContradictionCertificate& certificate);

/// Materializes the feasible mixture as an explicit model.
HiddenVariableModel to_model(const LhvFeasibilityResult& result);

}  // namespace hardy
