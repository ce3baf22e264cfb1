#include "hardy/lhv.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/simplex.hpp"

namespace hardy {

void Scenario::validate() const {
  if (parties.empty()) throw std::invalid_argument("scenario: no parties");
  for (const auto& settings : parties) {
    if (settings.empty()) throw std::invalid_argument("scenario: party without settings");
    for (const auto& s : settings) {
      if (s.outcomes.size() < 2)
        throw std::invalid_argument("scenario: setting " + s.label + " has fewer than 2 outcomes");
      for (std::size_t i = 0; i < s.outcomes.size(); ++i)
        for (std::size_t j = i + 1; j < s.outcomes.size(); ++j)
          if (s.outcomes[i] == s.outcomes[j])
            throw std::invalid_argument("scenario: duplicate eigenvalue in setting " + s.label);
    }
    for (std::size_t i = 0; i < settings.size(); ++i)
      for (std::size_t j = i + 1; j < settings.size(); ++j)
        if (settings[i].label == settings[j].label)
          throw std::invalid_argument("scenario: duplicate setting label " + settings[i].label);
  }
}

std::optional<std::size_t> Scenario::strategy_count(std::size_t cap) const {
  std::size_t count = 1;
  for (const auto& settings : parties) {
    for (const auto& s : settings) {
      const std::size_t k = s.outcomes.size();
      if (count > cap / k) return std::nullopt;
      count *= k;
    }
  }
  return count <= cap ? std::optional(count) : std::nullopt;
}

std::size_t Scenario::table_size() const {
  // Sum over setting tuples of the outcome-grid size of that tuple.
  std::size_t total = 0;
  std::vector<std::size_t> tuple(parties.size(), 0);
  for (bool more = true; more;) {
    std::size_t block = 1;
    for (std::size_t p = 0; p < parties.size(); ++p) block *= parties[p][tuple[p]].outcomes.size();
    total += block;
    more = false;
    for (std::size_t p = parties.size(); p-- > 0;) {
      if (++tuple[p] < parties[p].size()) {
        more = true;
        break;
      }
      tuple[p] = 0;
    }
  }
  return total;
}

std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& scenario, std::size_t cap) {
  scenario.validate();
  const auto count = scenario.strategy_count(cap);
  if (!count)
    throw std::runtime_error("enumerate_strategies: strategy space exceeds cap " +
                             std::to_string(cap));

  std::vector<DeterministicStrategy> all;
  all.reserve(*count);
  DeterministicStrategy cur;
  for (const auto& settings : scenario.parties)
    cur.outcome.emplace_back(settings.size(), 0);

  for (bool more = true; more;) {
    all.push_back(cur);
    // Lexicographic successor: last (party, setting) digit varies fastest.
    more = false;
    for (std::size_t p = scenario.parties.size(); p-- > 0 && !more;) {
      for (std::size_t s = scenario.parties[p].size(); s-- > 0;) {
        if (++cur.outcome[p][s] < static_cast<int>(scenario.parties[p][s].outcomes.size())) {
          more = true;
          break;
        }
        cur.outcome[p][s] = 0;
      }
    }
  }
  return all;
}

namespace {

void check_event(const Scenario& scenario, const JointEvent& event) {
  std::vector<bool> seen(scenario.parties.size(), false);
  for (const auto& atom : event.atoms) {
    if (atom.party < 0 || atom.party >= scenario.party_count())
      throw std::invalid_argument("event " + event.label + ": party out of range");
    if (seen[atom.party])
      throw std::invalid_argument("event " + event.label + ": repeated party");
    seen[atom.party] = true;
    const auto& settings = scenario.parties[atom.party];
    if (atom.setting < 0 || atom.setting >= static_cast<int>(settings.size()))
      throw std::invalid_argument("event " + event.label + ": setting out of range");
    if (atom.outcome < 0 ||
        atom.outcome >= static_cast<int>(settings[atom.setting].outcomes.size()))
      throw std::invalid_argument("event " + event.label + ": outcome out of range");
  }
  if (event.atoms.empty()) throw std::invalid_argument("event " + event.label + ": no atoms");
}

}  // namespace

bool strategy_selects(const Scenario& scenario, const DeterministicStrategy& strategy,
                      const JointEvent& event) {
  (void)scenario;
  for (const auto& atom : event.atoms)
    if (strategy.outcome[atom.party][atom.setting] != atom.outcome) return false;
  return true;
}

ContradictionCertificate contradiction_certificate(const Scenario& scenario,
                                                   std::vector<JointEvent> zero_constraints,
                                                   JointEvent target, std::size_t cap) {
  scenario.validate();
  for (const auto& c : zero_constraints) check_event(scenario, c);
  check_event(scenario, target);

  ContradictionCertificate cert;
  cert.scenario = scenario;
  cert.zero_constraints = std::move(zero_constraints);
  cert.target = std::move(target);
  cert.strategies = enumerate_strategies(scenario, cap);
  cert.verdicts.reserve(cert.strategies.size());
  for (std::size_t i = 0; i < cert.strategies.size(); ++i) {
    const auto& strat = cert.strategies[i];
    StrategyVerdict v;
    if (!strategy_selects(scenario, strat, cert.target)) {
      v.kind = VerdictKind::FailsTarget;
    } else {
      v.kind = VerdictKind::Survives;
      for (std::size_t c = 0; c < cert.zero_constraints.size(); ++c) {
        if (strategy_selects(scenario, strat, cert.zero_constraints[c])) {
          v.kind = VerdictKind::ViolatesConstraint;
          v.constraint = c;
          break;
        }
      }
      if (v.kind == VerdictKind::Survives) cert.survivors.push_back(i);
    }
    cert.verdicts.push_back(v);
  }
  cert.conclusion = cert.survivors.empty();
  return cert;
}

Scenario hardy_scenario(int tail_parties) {
  if (tail_parties < 0) throw std::invalid_argument("hardy_scenario: negative tail count");
  Scenario sc;
  const std::vector<double> xyz{+1, -1, 0};
  sc.parties.push_back({{"X", xyz}, {"Y", xyz}});
  sc.parties.push_back({{"X", xyz}, {"Y", xyz}});
  for (int k = 0; k < tail_parties; ++k) sc.parties.push_back({{"T", {1, 0}}});
  return sc;
}

namespace {

// Outcome indices in the {+1, -1, 0} lists.
constexpr int kPlus = 0, kMinus = 1, kNull = 2;
constexpr int kX = 0, kY = 1;

JointEvent with_tails(JointEvent e, int tail_parties) {
  for (int k = 0; k < tail_parties; ++k) {
    e.atoms.push_back({2 + k, 0, 0});  // T = t1
    e.label += ", T" + std::to_string(3 + k) + "=t1";
  }
  return e;
}

}  // namespace

std::vector<JointEvent> hardy_zero_constraints(int tail_parties) {
  // Citation order: a strategy's first violated constraint mirrors the case
  // split of the impossibility argument (X1 != +1 branch, then X2 != +1
  // branch, then the X1 = X2 = +1 clash).
  std::vector<JointEvent> zs;
  zs.push_back(with_tails({"P(X1=-1, Y2=+1)", {{0, kX, kMinus}, {1, kY, kPlus}}}, tail_parties));
  zs.push_back(with_tails({"P(X1=0, Y2=+1)", {{0, kX, kNull}, {1, kY, kPlus}}}, tail_parties));
  zs.push_back(with_tails({"P(Y1=+1, X2=-1)", {{0, kY, kPlus}, {1, kX, kMinus}}}, tail_parties));
  zs.push_back(with_tails({"P(Y1=+1, X2=0)", {{0, kY, kPlus}, {1, kX, kNull}}}, tail_parties));
  zs.push_back(with_tails({"P(X1=+1, X2=+1)", {{0, kX, kPlus}, {1, kX, kPlus}}}, tail_parties));
  return zs;
}

JointEvent hardy_target_event(int tail_parties) {
  return with_tails({"P(Y1=+1, Y2=+1)", {{0, kY, kPlus}, {1, kY, kPlus}}}, tail_parties);
}

namespace {

// Row-major iteration over all (setting tuple, outcome tuple) table slots.
template <typename Fn>
void for_each_entry(const Scenario& sc, Fn&& fn) {
  const std::size_t n = sc.parties.size();
  std::vector<std::size_t> setting(n, 0);
  std::size_t flat = 0;
  for (bool more_settings = true; more_settings;) {
    std::vector<std::size_t> outcome(n, 0);
    for (bool more_outcomes = true; more_outcomes;) {
      fn(setting, outcome, flat++);
      more_outcomes = false;
      for (std::size_t p = n; p-- > 0;) {
        if (++outcome[p] < sc.parties[p][setting[p]].outcomes.size()) {
          more_outcomes = true;
          break;
        }
        outcome[p] = 0;
      }
    }
    more_settings = false;
    for (std::size_t p = n; p-- > 0;) {
      if (++setting[p] < sc.parties[p].size()) {
        more_settings = true;
        break;
      }
      setting[p] = 0;
    }
  }
}

}  // namespace

std::vector<double> strategy_table(const Scenario& scenario, const DeterministicStrategy& strategy) {
  std::vector<double> table(scenario.table_size(), 0.0);
  for_each_entry(scenario, [&](const auto& setting, const auto& outcome, std::size_t flat) {
    bool hit = true;
    for (std::size_t p = 0; p < setting.size() && hit; ++p)
      hit = strategy.outcome[p][setting[p]] == static_cast<int>(outcome[p]);
    if (hit) table[flat] = 1.0;
  });
  return table;
}

std::vector<double> quantum_table(const MultipartiteState& state, const Scenario& scenario,
                                  const std::vector<std::vector<const ObservableFamily*>>& settings) {
  scenario.validate();
  if (settings.size() != scenario.parties.size())
    throw std::invalid_argument("quantum_table: one observable list per party required");
  for (std::size_t p = 0; p < settings.size(); ++p) {
    if (settings[p].size() != scenario.parties[p].size())
      throw std::invalid_argument("quantum_table: observable count mismatch for a party");
    for (const auto* fam : settings[p])
      if (fam == nullptr) throw std::invalid_argument("quantum_table: null observable");
  }

  std::vector<double> table(scenario.table_size(), 0.0);
  for_each_entry(scenario, [&](const auto& setting, const auto& outcome, std::size_t flat) {
    std::vector<std::pair<const ObservableFamily*, double>> events;
    for (std::size_t p = 0; p < setting.size(); ++p) {
      events.emplace_back(settings[p][setting[p]],
                          scenario.parties[p][setting[p]].outcomes[outcome[p]]);
    }
    table[flat] = joint_probability_or_zero(state, events);
  });
  return table;
}

std::vector<double> hardy_quantum_table(const MultipartiteState& state, const HardySettings& setup) {
  const auto& o = setup.observables;
  return quantum_table(state, hardy_scenario(), {{&o.x1, &o.y1}, {&o.x2, &o.y2}});
}

std::vector<Rational> hardy_quantum_table_exact(const Rational& p1, const Rational& p2) {
  if (p1 <= 0 || p2 <= 0) throw std::invalid_argument("exact table: weights must be positive");
  if (p1 * p1 + p2 * p2 != 1)
    throw std::invalid_argument("exact table: p1^2 + p2^2 must equal 1 exactly");
  const Rational g = p1 * p2;               // p1 p2
  const Rational ds = (p1 - p2) * (p1 - p2);  // (p1 - p2)^2
  const Rational d = 1 - g;                 // p1^2 + p2^2 - p1 p2
  const Rational z = 0;
  // Blocks (X,X), (X,Y), (Y,X), (Y,Y); outcomes (+1,-1,0) x (+1,-1,0)
  // row-major; both sides are qubits so every 0-outcome slot is 0.
  return {
      z, g, z, /**/ g, ds, z, /**/ z, z, z,                                              // X,X
      g * g / d, g * ds / d, z, /**/ z, d, z, /**/ z, z, z,                              // X,Y
      g * g / d, z, z, /**/ g * ds / d, d, z, /**/ z, z, z,                              // Y,X
      g * g * ds / (d * d), g * g * g / (d * d), z, /**/ g * g * g / (d * d), ds / (d * d), z,
      /**/ z, z, z,  // Y,Y
  };
}

const char* to_string(LhvVerdict verdict) {
  return verdict == LhvVerdict::Feasible ? "Feasible" : "Infeasible";
}

namespace {

template <typename Scalar>
void check_table(const Scenario& sc, const std::vector<Scalar>& table) {
  if (table.size() != sc.table_size())
    throw std::invalid_argument("lhv feasibility: table length does not match scenario");
  for (const Scalar& x : table)
    if (x < Scalar(0) && -x > Scalar(1e-12))
      throw std::invalid_argument("lhv feasibility: negative table entry");
  // Per-block normalization.
  std::vector<Scalar> block_sums;
  for_each_entry(sc, [&](const auto& setting, const auto&, std::size_t flat) {
    std::size_t block = 0;
    for (std::size_t p = 0; p < setting.size(); ++p) block = block * sc.parties[p].size() + setting[p];
    if (block >= block_sums.size()) block_sums.resize(block + 1, Scalar(0));
    block_sums[block] += table[flat];
  });
  for (const Scalar& s : block_sums) {
    const Scalar dev = s - Scalar(1);
    if (dev > Scalar(1e-8) || -dev > Scalar(1e-8))
      throw std::invalid_argument("lhv feasibility: a setting block does not sum to 1");
  }
}

template <typename Scalar>
struct LpRun {
  bool feasible = false;
  std::vector<Scalar> solution;  // over strategies
  std::vector<Scalar> witness;   // over table entries, max-norm 1, <w, table> < 0
  Scalar margin{};
  Scalar min_vertex_dot{};
};

template <typename Scalar>
LpRun<Scalar> run_lp(const Scenario& scenario, const std::vector<DeterministicStrategy>& strategies,
                     const std::vector<Scalar>& table, const Scalar& eps) {
  const std::size_t m = table.size(), n = strategies.size();
  std::vector<Scalar> a(m * n, Scalar(0));
  for (std::size_t s = 0; s < n; ++s) {
    const std::vector<double> col = strategy_table(scenario, strategies[s]);
    for (std::size_t e = 0; e < m; ++e)
      if (col[e] != 0.0) a[e * n + s] = Scalar(1);
  }

  auto cert = solve_feasibility<Scalar>(m, n, a, table, eps);
  LpRun<Scalar> run;
  run.feasible = cert.feasible;
  if (cert.feasible) {
    run.solution = std::move(cert.solution);
    return run;
  }

  // Farkas direction: y with <y, table> > 0 and <y, vertex> <= 0. The
  // published witness is w = -y scaled to unit max-norm.
  std::vector<Scalar> w(m);
  Scalar scale(0);
  for (std::size_t e = 0; e < m; ++e) {
    const Scalar mag = cert.farkas[e] < Scalar(0) ? Scalar(-cert.farkas[e]) : cert.farkas[e];
    if (mag > scale) scale = mag;
  }
  if (scale == Scalar(0)) throw std::logic_error("lhv feasibility: zero Farkas certificate");
  for (std::size_t e = 0; e < m; ++e) w[e] = -cert.farkas[e] / scale;

  Scalar wb(0);
  for (std::size_t e = 0; e < m; ++e) wb += w[e] * table[e];
  run.margin = -wb;
  bool first = true;
  for (std::size_t s = 0; s < n; ++s) {
    Scalar dot(0);
    for (std::size_t e = 0; e < m; ++e) dot += w[e] * a[e * n + s];
    if (first || dot < run.min_vertex_dot) run.min_vertex_dot = dot;
    first = false;
  }
  run.witness = std::move(w);
  return run;
}

}  // namespace

LhvFeasibilityResult lhv_lp_feasibility(const Scenario& scenario, const std::vector<double>& table,
                                        std::size_t cap) {
  scenario.validate();
  check_table(scenario, table);
  LhvFeasibilityResult r;
  r.scenario = scenario;
  r.table = table;

  const auto strategies = enumerate_strategies(scenario, cap);
  auto run = run_lp<double>(scenario, strategies, table, 1e-9);
  if (run.feasible) {
    r.verdict = LhvVerdict::Feasible;
    std::vector<double> rebuilt(table.size(), 0.0);
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      if (run.solution[s] <= 1e-12) continue;
      r.mixture_indices.push_back(s);
      r.mixture_weights.push_back(run.solution[s]);
      const auto vertex = strategy_table(scenario, strategies[s]);
      for (std::size_t e = 0; e < rebuilt.size(); ++e) rebuilt[e] += run.solution[s] * vertex[e];
    }
    for (std::size_t e = 0; e < rebuilt.size(); ++e)
      r.max_residual = std::max(r.max_residual, std::abs(rebuilt[e] - table[e]));
  } else {
    r.verdict = LhvVerdict::Infeasible;
    r.witness = std::move(run.witness);
    r.margin = run.margin;
    r.min_vertex_dot = run.min_vertex_dot;
  }
  return r;
}

LhvFeasibilityResult lhv_lp_feasibility_exact(const Scenario& scenario,
                                              const std::vector<Rational>& table, std::size_t cap) {
  scenario.validate();
  check_table(scenario, table);
  LhvFeasibilityResult r;
  r.exact = true;
  r.scenario = scenario;
  r.table_exact = table;
  r.table.reserve(table.size());
  for (const auto& x : table) r.table.push_back(to_double(x));

  const auto strategies = enumerate_strategies(scenario, cap);
  auto run = run_lp<Rational>(scenario, strategies, table, Rational(0));
  if (run.feasible) {
    r.verdict = LhvVerdict::Feasible;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      if (run.solution[s] == 0) continue;
      r.mixture_indices.push_back(s);
      r.mixture_weights_exact.push_back(run.solution[s]);
      r.mixture_weights.push_back(to_double(run.solution[s]));
    }
    r.max_residual = 0;  // exact reproduction by construction; re-checked in verify
  } else {
    r.verdict = LhvVerdict::Infeasible;
    r.witness_exact = std::move(run.witness);
    r.witness.reserve(r.witness_exact.size());
    for (const auto& x : r.witness_exact) r.witness.push_back(to_double(x));
    r.margin = to_double(run.margin);
    r.min_vertex_dot = to_double(run.min_vertex_dot);
  }
  return r;
}

bool verify_certificate(const LhvFeasibilityResult& result) {
  try {
    const auto strategies = enumerate_strategies(result.scenario);
    const std::size_t m = result.scenario.table_size();

    if (result.verdict == LhvVerdict::Feasible) {
      if (result.mixture_indices.size() !=
          (result.exact ? result.mixture_weights_exact.size() : result.mixture_weights.size()))
        return false;
      if (result.exact) {
        if (result.table_exact.size() != m) return false;
        std::vector<Rational> rebuilt(m, Rational(0));
        Rational total(0);
        for (std::size_t k = 0; k < result.mixture_indices.size(); ++k) {
          const auto idx = result.mixture_indices[k];
          const Rational& w = result.mixture_weights_exact[k];
          if (idx >= strategies.size() || w < 0) return false;
          total += w;
          const auto vertex = strategy_table(result.scenario, strategies[idx]);
          for (std::size_t e = 0; e < m; ++e)
            if (vertex[e] != 0.0) rebuilt[e] += w;
        }
        if (total != 1) return false;
        for (std::size_t e = 0; e < m; ++e)
          if (rebuilt[e] != result.table_exact[e]) return false;
        return true;
      }
      if (result.table.size() != m) return false;
      std::vector<double> rebuilt(m, 0.0);
      double total = 0;
      for (std::size_t k = 0; k < result.mixture_indices.size(); ++k) {
        const auto idx = result.mixture_indices[k];
        const double w = result.mixture_weights[k];
        if (idx >= strategies.size() || w < -1e-12) return false;
        total += w;
        const auto vertex = strategy_table(result.scenario, strategies[idx]);
        for (std::size_t e = 0; e < m; ++e) rebuilt[e] += w * vertex[e];
      }
      if (std::abs(total - 1.0) > 1e-8) return false;
      for (std::size_t e = 0; e < m; ++e)
        if (std::abs(rebuilt[e] - result.table[e]) > 1e-8) return false;
      return true;
    }

    // Infeasible: witness must separate the table from every vertex.
    if (result.exact) {
      if (result.witness_exact.size() != m || result.table_exact.size() != m) return false;
      Rational wb(0);
      for (std::size_t e = 0; e < m; ++e) wb += result.witness_exact[e] * result.table_exact[e];
      if (!(wb < 0)) return false;
      for (const auto& strat : strategies) {
        const auto vertex = strategy_table(result.scenario, strat);
        Rational dot(0);
        for (std::size_t e = 0; e < m; ++e)
          if (vertex[e] != 0.0) dot += result.witness_exact[e];
        if (dot < 0) return false;
      }
      return true;
    }
    if (result.witness.size() != m || result.table.size() != m) return false;
    double wb = 0;
    for (std::size_t e = 0; e < m; ++e) wb += result.witness[e] * result.table[e];
    if (!(wb < 0)) return false;
    for (const auto& strat : strategies) {
      const auto vertex = strategy_table(result.scenario, strat);
      double dot = 0;
      for (std::size_t e = 0; e < m; ++e) dot += result.witness[e] * vertex[e];
      if (dot < -1e-9) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool verify_certificate(const ContradictionCertificate& certificate) {
  try {
    certificate.scenario.validate();
    for (const auto& c : certificate.zero_constraints) check_event(certificate.scenario, c);
    check_event(certificate.scenario, certificate.target);

    // The strategy list must be the complete enumeration, not a subset.
    const auto all = enumerate_strategies(certificate.scenario);
    if (certificate.strategies.size() != all.size()) return false;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (certificate.strategies[i].outcome != all[i].outcome) return false;
    if (certificate.verdicts.size() != all.size()) return false;

    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < all.size(); ++i) {
      StrategyVerdict expected;
      if (!strategy_selects(certificate.scenario, all[i], certificate.target)) {
        expected.kind = VerdictKind::FailsTarget;
      } else {
        expected.kind = VerdictKind::Survives;
        for (std::size_t c = 0; c < certificate.zero_constraints.size(); ++c) {
          if (strategy_selects(certificate.scenario, all[i], certificate.zero_constraints[c])) {
            expected.kind = VerdictKind::ViolatesConstraint;
            expected.constraint = c;
            break;
          }
        }
        if (expected.kind == VerdictKind::Survives) survivors.push_back(i);
      }
      const auto& got = certificate.verdicts[i];
      if (got.kind != expected.kind) return false;
      if (got.kind == VerdictKind::ViolatesConstraint && got.constraint != expected.constraint)
        return false;
    }
    if (survivors != certificate.survivors) return false;
    return certificate.conclusion == survivors.empty();
  } catch (const std::exception&) {
    return false;
  }
}

HiddenVariableModel to_model(const LhvFeasibilityResult& result) {
  if (result.verdict != LhvVerdict::Feasible)
    throw std::invalid_argument("to_model: result is not feasible");
  const auto strategies = enumerate_strategies(result.scenario);
  HiddenVariableModel model;
  for (std::size_t k = 0; k < result.mixture_indices.size(); ++k) {
    model.strategies.push_back(strategies.at(result.mixture_indices[k]));
    model.weights.push_back(result.mixture_weights[k]);
  }
  return model;
}

}  // namespace hardy
