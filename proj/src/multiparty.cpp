#include "hardy/multiparty.hpp"

#include <algorithm>
#include <optional>

#include "hardy/schmidt.hpp"

namespace hardy {

ObservableFamily build_T_observable(const Eigen::MatrixXcd& tau_basis, Eigen::Index selected,
                                    int party, const std::string& name) {
  if (party < 0) throw std::invalid_argument("build_T_observable: negative party index");
  if (tau_basis.cols() < 1 || tau_basis.rows() < 2)
    throw std::invalid_argument("build_T_observable: basis must have >= 1 column in dim >= 2");
  if (selected < 0 || selected >= tau_basis.cols())
    throw std::invalid_argument("build_T_observable: selected column out of range");
  const Eigen::MatrixXcd gram =
      tau_basis.adjoint() * tau_basis -
      Eigen::MatrixXcd::Identity(tau_basis.cols(), tau_basis.cols());
  if (gram.cwiseAbs().maxCoeff() > kOrthonormalTol)
    throw std::invalid_argument("build_T_observable: columns are not orthonormal");

  ObservableFamily fam;
  fam.name = name;
  fam.parties = {party};
  fam.space_dim = tau_basis.rows();
  fam.outcomes.push_back({1.0, tau_basis.col(selected), false});
  fam.outcomes.push_back({0.0, Eigen::MatrixXcd(tau_basis.rows(), 0), true});
  return fam;
}

TripartiteDecomposition tripartite_decompose(const MultipartiteState& state, double distinct_tol) {
  if (state.party_count() != 3)
    throw std::invalid_argument("tripartite_decompose: exactly three parties required");
  const auto cut = Bipartition::of(3, {0, 1});
  const auto sd = schmidt_decompose(state, cut);

  std::optional<Eigen::Index> eligible;
  const std::vector<Eigen::Index> pair_dims{state.dim(0), state.dim(1)};
  for (Eigen::Index k = 0; k < sd.rank && !eligible; ++k) {
    const MultipartiteState component(pair_dims, sd.left_basis.col(k), true);
    const auto cls = classify(schmidt_decompose(component, Bipartition::of(2, {0})), distinct_tol);
    if (cls.tag == EligibilityTag::HardyEligible) eligible = k;
  }
  if (!eligible)
    throw NoEligibleComponentError(
        "tripartite_decompose: no component across {1,2}|{3} admits the construction");

  // Move the eligible component to the front; the rest keep their
  // descending-weight order.
  const Eigen::Index n = sd.coefficients.size();
  std::vector<Eigen::Index> order{*eligible};
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != *eligible) order.push_back(k);

  TripartiteDecomposition out;
  out.q_coefficients.resize(n);
  out.pair_states.resize(sd.left_basis.rows(), n);
  out.tail_basis.resize(sd.right_basis.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.q_coefficients(k) = sd.coefficients(order[k]);
    out.pair_states.col(k) = sd.left_basis.col(order[k]);
    out.tail_basis.col(k) = sd.right_basis.col(order[k]);
  }
  out.eligible_index = 0;
  out.selected_rank = *eligible;
  out.pair_dims = pair_dims;
  return out;
}

PeelingPlan PeelingPlan::standard(int party_count) {
  if (party_count < 2) throw std::invalid_argument("PeelingPlan: need at least two parties");
  PeelingPlan plan;
  plan.hardy_pair = {0, 1};
  for (int p = party_count - 1; p >= 2; --p) plan.peel_order.push_back(p);
  return plan;
}

namespace {

void check_plan(const PeelingPlan& plan, int party_count) {
  std::vector<bool> used(party_count, false);
  auto mark = [&](int p, const char* what) {
    if (p < 0 || p >= party_count)
      throw std::invalid_argument(std::string("peeling plan: ") + what + " out of range");
    if (used[p]) throw std::invalid_argument(std::string("peeling plan: ") + what + " repeated");
    used[p] = true;
  };
  mark(plan.hardy_pair.first, "pair party");
  mark(plan.hardy_pair.second, "pair party");
  for (int p : plan.peel_order) mark(p, "peel party");
  if (static_cast<int>(plan.peel_order.size()) + 2 != party_count)
    throw std::invalid_argument("peeling plan: parties not covered exactly once");
}

struct PeelFrame {
  MultipartiteState state;
  std::vector<int> ids;  // original party index of each local party
};

// Depth-first search over component choices: at each peel level try the
// components in descending weight, recursing into the induced pair state;
// the innermost level demands Hardy eligibility of the remaining two-party
// state. Returns the first success in this order.
std::optional<NpartiteSettings> try_build(const PeelFrame& frame, const PeelingPlan& plan,
                                          std::size_t level, double distinct_tol) {
  if (level == plan.peel_order.size()) {
    const int first_local = static_cast<int>(
        std::find(frame.ids.begin(), frame.ids.end(), plan.hardy_pair.first) - frame.ids.begin());
    HardySettings core;
    try {
      core = build_hardy_settings(frame.state, Bipartition::of(2, {first_local}), std::nullopt,
                                  distinct_tol);
    } catch (const IneligibleStateError&) {
      return std::nullopt;
    }
    core.observables.x1.parties = {plan.hardy_pair.first};
    core.observables.y1.parties = {plan.hardy_pair.first};
    core.observables.x2.parties = {plan.hardy_pair.second};
    core.observables.y2.parties = {plan.hardy_pair.second};
    return NpartiteSettings{std::move(core), {}, frame.state};
  }

  const int target = plan.peel_order[level];
  const int local = static_cast<int>(std::find(frame.ids.begin(), frame.ids.end(), target) -
                                     frame.ids.begin());
  const int n_local = frame.state.party_count();
  std::vector<int> rest;
  for (int p = 0; p < n_local; ++p)
    if (p != local) rest.push_back(p);

  const auto sd = schmidt_decompose(frame.state, Bipartition::of(n_local, rest));

  std::vector<Eigen::Index> sub_dims;
  std::vector<int> sub_ids;
  for (int p : rest) {
    sub_dims.push_back(frame.state.dim(p));
    sub_ids.push_back(frame.ids[p]);
  }

  for (Eigen::Index k = 0; k < sd.rank; ++k) {
    PeelFrame sub{MultipartiteState(sub_dims, sd.left_basis.col(k), true), sub_ids};
    auto built = try_build(sub, plan, level + 1, distinct_tol);
    if (!built) continue;
    PeelRecord rec;
    rec.party = target;
    rec.selected = k;
    rec.weight = sd.coefficients(k);
    rec.t1_probability = rec.weight * rec.weight;
    rec.t_observable =
        build_T_observable(sd.right_basis, k, target, "T" + std::to_string(target + 1));
    built->peels.insert(built->peels.begin(), std::move(rec));
    return built;
  }
  return std::nullopt;
}

}  // namespace

NpartiteSettings build_npartite_settings(const MultipartiteState& state, const PeelingPlan& plan,
                                         double distinct_tol) {
  check_plan(plan, state.party_count());

  if (plan.peel_order.empty()) {
    // Pure two-party case: keep the informative eligibility error.
    HardySettings core = build_hardy_settings(state, Bipartition::of(2, {plan.hardy_pair.first}),
                                              std::nullopt, distinct_tol);
    core.observables.x1.parties = {plan.hardy_pair.first};
    core.observables.y1.parties = {plan.hardy_pair.first};
    core.observables.x2.parties = {plan.hardy_pair.second};
    core.observables.y2.parties = {plan.hardy_pair.second};
    return NpartiteSettings{std::move(core), {}, state};
  }

  std::vector<int> ids(state.party_count());
  for (int p = 0; p < state.party_count(); ++p) ids[p] = p;
  auto built = try_build(PeelFrame{state, ids}, plan, 0, distinct_tol);
  if (!built)
    throw NoEligibleComponentError(
        "build_npartite_settings: no component chain admits the construction");
  return std::move(*built);
}

HardyReport npartite_report(const MultipartiteState& state, const PeelingPlan& plan,
                            double tolerance) {
  const auto settings = build_npartite_settings(state, plan);
  const auto& obs = settings.core.observables;

  // T pins appended to every condition, ordered by party for stable labels.
  std::vector<const PeelRecord*> pins;
  for (const auto& rec : settings.peels) pins.push_back(&rec);
  std::sort(pins.begin(), pins.end(),
            [](const PeelRecord* a, const PeelRecord* b) { return a->party < b->party; });
  std::string suffix;
  for (const auto* rec : pins) suffix += ", T" + std::to_string(rec->party + 1) + "=t1";

  struct Entry {
    const ObservableFamily* a;
    double va;
    const ObservableFamily* b;
    double vb;
    std::string inner;
    bool zero;
  };
  const std::vector<Entry> plan6{
      {&obs.x1, +1, &obs.x2, +1, "X1=+1, X2=+1", true},
      {&obs.y1, +1, &obs.x2, -1, "Y1=+1, X2=-1", true},
      {&obs.x1, -1, &obs.y2, +1, "X1=-1, Y2=+1", true},
      {&obs.y1, +1, &obs.x2, 0, "Y1=+1, X2=0", true},
      {&obs.x1, 0, &obs.y2, +1, "X1=0, Y2=+1", true},
      {&obs.y1, +1, &obs.y2, +1, "Y1=+1, Y2=+1", false},
  };

  HardyReport report;
  report.tolerance = tolerance;
  for (const auto& e : plan6) {
    std::vector<std::pair<const ObservableFamily*, double>> events{{e.a, e.va}, {e.b, e.vb}};
    for (const auto* rec : pins) events.emplace_back(&rec->t_observable, 1.0);
    HardyCondition cond;
    cond.label = "P(" + e.inner + suffix + ")";
    cond.value = joint_probability_or_zero(state, events);
    cond.expect_zero = e.zero;
    cond.pass = e.zero ? cond.value <= tolerance : cond.value > tolerance;
    report.conditions.push_back(std::move(cond));
  }

  report.pair = settings.core.pair;
  report.p1 = settings.core.p1;
  report.p2 = settings.core.p2;
  report.closed_form = hardy_closed_form(report.p1, report.p2);
  report.predicted_success = report.closed_form;
  for (const auto& rec : settings.peels) report.predicted_success *= rec.t1_probability;
  report.form_residuals = equivalent_forms_residual(settings.component, settings.core);
  report.peels = settings.peels;
  return report;
}

HardyReport tripartite_report(const MultipartiteState& state, double tolerance) {
  if (state.party_count() != 3)
    throw std::invalid_argument("tripartite_report: exactly three parties required");
  return npartite_report(state, PeelingPlan::standard(3), tolerance);
}

std::vector<double> npartite_quantum_table(const MultipartiteState& state,
                                           const NpartiteSettings& settings) {
  const auto scenario = hardy_scenario(static_cast<int>(settings.peels.size()));
  const auto& obs = settings.core.observables;
  std::vector<std::vector<const ObservableFamily*>> families{{&obs.x1, &obs.y1},
                                                             {&obs.x2, &obs.y2}};
  for (const auto& rec : settings.peels) families.push_back({&rec.t_observable});
  return quantum_table(state, scenario, families);
}

ContradictionCertificate tripartite_contradiction(const Scenario& scenario) {
  scenario.validate();
  const auto expected = hardy_scenario(1);
  auto shape_error = []() {
    return std::invalid_argument(
        "tripartite_contradiction: scenario must have two parties with settings X, Y over "
        "outcomes (+1, -1, 0) and one tail party with a binary setting over (1, 0)");
  };
  if (scenario.parties.size() != 3) throw shape_error();
  for (int p = 0; p < 2; ++p) {
    if (scenario.parties[p].size() < 2) throw shape_error();
    for (int s = 0; s < 2; ++s)
      if (scenario.parties[p][s].outcomes != expected.parties[p][s].outcomes) throw shape_error();
  }
  if (scenario.parties[2].empty() ||
      scenario.parties[2][0].outcomes != expected.parties[2][0].outcomes)
    throw shape_error();

  return contradiction_certificate(scenario, hardy_zero_constraints(1), hardy_target_event(1));
}

ContradictionCertificate tripartite_contradiction() {
  return tripartite_contradiction(hardy_scenario(1));
}

}  // namespace hardy
