#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hardy/lhv.hpp"
#include "hardy/simplex.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

MultipartiteState asym_bell() {
  Eigen::VectorXcd v(4);
  v << 0.6, 0, 0, 0.8;
  return MultipartiteState({2, 2}, v);
}

// Random mixture of deterministic strategies: always LHV-feasible.
std::vector<double> random_mixture_table(std::mt19937_64& rng, const Scenario& scenario,
                                         int terms) {
  const auto strategies = enumerate_strategies(scenario);
  std::uniform_int_distribution<std::size_t> pick(0, strategies.size() - 1);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> weights(terms);
  double total = 0;
  for (auto& w : weights) total += (w = unif(rng));
  std::vector<double> table(scenario.table_size(), 0.0);
  for (int t = 0; t < terms; ++t) {
    const auto vertex = strategy_table(scenario, strategies[pick(rng)]);
    for (std::size_t e = 0; e < table.size(); ++e) table[e] += weights[t] / total * vertex[e];
  }
  return table;
}

}  // namespace

TEST_CASE("scenario bookkeeping") {
  const auto sc = hardy_scenario();
  CHECK(sc.party_count() == 2);
  CHECK(*sc.strategy_count() == 81);
  CHECK(sc.table_size() == 36);

  const auto sc3 = hardy_scenario(1);
  CHECK(*sc3.strategy_count() == 162);
  CHECK(sc3.table_size() == 72);

  CHECK_FALSE(sc.strategy_count(80).has_value());
  CHECK_THROWS_AS(enumerate_strategies(sc, 80), std::runtime_error);

  Scenario bad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.parties = {{{"X", {1.0}}}};  // single-outcome setting
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.parties = {{{"X", {1.0, 1.0}}}};  // duplicate eigenvalue
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.parties = {{{"X", {1.0, 0.0}}, {"X", {1.0, 0.0}}}};  // duplicate label
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("enumeration is complete, duplicate-free, and ordered") {
  const auto sc = hardy_scenario();
  const auto all = enumerate_strategies(sc);
  REQUIRE(all.size() == 81);

  std::set<std::vector<std::vector<int>>> seen;
  for (const auto& s : all) seen.insert(s.outcome);
  CHECK(seen.size() == 81);

  // First strategy answers index 0 everywhere; the last digit moves fastest.
  CHECK(all[0].outcome == std::vector<std::vector<int>>{{0, 0}, {0, 0}});
  CHECK(all[1].outcome == std::vector<std::vector<int>>{{0, 0}, {0, 1}});
  CHECK(all[80].outcome == std::vector<std::vector<int>>{{2, 2}, {2, 2}});
}

TEST_CASE("every strategy answers each setting tuple exactly once") {
  const auto sc = hardy_scenario(1);
  for (const auto& strat : enumerate_strategies(sc)) {
    const auto table = strategy_table(sc, strat);
    // Blocks: (settings of party 0) x (party 1) x (party 2) = 2*2*1, each 3*3*2.
    REQUIRE(table.size() == 72);
    for (int block = 0; block < 4; ++block) {
      double sum = 0;
      for (int e = 0; e < 18; ++e) sum += table[18 * block + e];
      CHECK(sum == 1.0);
    }
  }
}

TEST_CASE("the constraint events carry their published labels") {
  const auto zs = hardy_zero_constraints();
  REQUIRE(zs.size() == 5);
  CHECK(zs[0].label == "P(X1=-1, Y2=+1)");
  CHECK(zs[1].label == "P(X1=0, Y2=+1)");
  CHECK(zs[2].label == "P(Y1=+1, X2=-1)");
  CHECK(zs[3].label == "P(Y1=+1, X2=0)");
  CHECK(zs[4].label == "P(X1=+1, X2=+1)");
  CHECK(hardy_target_event().label == "P(Y1=+1, Y2=+1)");

  const auto tailed = hardy_zero_constraints(2);
  CHECK(tailed[0].label == "P(X1=-1, Y2=+1), T3=t1, T4=t1");
  CHECK(tailed[0].atoms.size() == 4);
  CHECK(hardy_target_event(1).atoms.size() == 3);
}

TEST_CASE("exhaustive enumeration leaves no surviving strategy") {
  const auto cert = contradiction_certificate(hardy_scenario(), hardy_zero_constraints(),
                                              hardy_target_event());
  CHECK(cert.strategies.size() == 81);
  CHECK(cert.survivors.empty());
  CHECK(cert.conclusion);

  int fails = 0, violations = 0;
  for (const auto& v : cert.verdicts) {
    fails += v.kind == VerdictKind::FailsTarget;
    violations += v.kind == VerdictKind::ViolatesConstraint;
  }
  CHECK(fails == 72);       // 81 minus the 3*3 strategies answering (+1, +1) to (Y, Y)
  CHECK(violations == 9);
  CHECK(verify_certificate(cert));
}

TEST_CASE("cited constraints reproduce the case split of the argument") {
  const auto cert = contradiction_certificate(hardy_scenario(), hardy_zero_constraints(),
                                              hardy_target_event());
  const int kX = 0;
  const int kPlus = 0;
  for (std::size_t i = 0; i < cert.strategies.size(); ++i) {
    if (cert.verdicts[i].kind != VerdictKind::ViolatesConstraint) continue;
    const auto& s = cert.strategies[i];
    const std::size_t c = cert.verdicts[i].constraint;
    if (s.outcome[0][kX] != kPlus) {
      CHECK(c <= 1);  // an (X1, Y2) zero
      CHECK((c == 0 ? s.outcome[0][kX] == 1 : s.outcome[0][kX] == 2));
    } else if (s.outcome[1][kX] != kPlus) {
      CHECK((c == 2 || c == 3));  // a (Y1, X2) zero
    } else {
      CHECK(c == 4);  // the (X1, X2) clash
    }
  }
}

TEST_CASE("adding constraints only shrinks the surviving set") {
  std::mt19937_64 rng(400);
  const auto sc = hardy_scenario();
  std::uniform_int_distribution<int> setting(0, 1), outcome(0, 2);
  for (int round = 0; round < 25; ++round) {
    std::vector<JointEvent> zs;
    for (int k = 0; k < 3; ++k) {
      zs.push_back({"z" + std::to_string(k),
                    {{0, setting(rng), outcome(rng)}, {1, setting(rng), outcome(rng)}}});
    }
    const JointEvent target{"t", {{0, setting(rng), outcome(rng)}, {1, setting(rng), outcome(rng)}}};
    const auto base = contradiction_certificate(sc, zs, target);
    zs.push_back({"extra", {{0, setting(rng), outcome(rng)}, {1, setting(rng), outcome(rng)}}});
    const auto extended = contradiction_certificate(sc, zs, target);
    CHECK(std::includes(base.survivors.begin(), base.survivors.end(),
                        extended.survivors.begin(), extended.survivors.end()));
    CHECK(verify_certificate(base));
    CHECK(verify_certificate(extended));
  }
}

TEST_CASE("tampered contradiction certificates are rejected") {
  auto cert = contradiction_certificate(hardy_scenario(), hardy_zero_constraints(),
                                        hardy_target_event());
  REQUIRE(verify_certificate(cert));

  auto broken = cert;
  broken.verdicts[0].kind = VerdictKind::Survives;
  CHECK_FALSE(verify_certificate(broken));

  broken = cert;
  broken.strategies.pop_back();
  broken.verdicts.pop_back();
  CHECK_FALSE(verify_certificate(broken));

  broken = cert;
  broken.conclusion = false;
  CHECK_FALSE(verify_certificate(broken));

  broken = cert;
  std::swap(broken.strategies[0], broken.strategies[1]);  // still complete, wrong order
  CHECK_FALSE(verify_certificate(broken));

  broken = cert;
  broken.survivors.push_back(3);
  CHECK_FALSE(verify_certificate(broken));
}

TEST_CASE("quantum tables are normalized per block and nonnegative") {
  std::mt19937_64 rng(401);
  for (int round = 0; round < 10; ++round) {
    Eigen::Index total = 4 * 3;
    const MultipartiteState state({4, 3}, oracle::random_state(rng, total));
    const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
    const auto table = hardy_quantum_table(state, settings);
    REQUIRE(table.size() == 36);
    for (int block = 0; block < 4; ++block) {
      double sum = 0;
      for (int e = 0; e < 9; ++e) {
        CHECK(table[9 * block + e] >= 0.0);
        sum += table[9 * block + e];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("the exact table matches the numeric pipeline on the canonical state") {
  const auto exact = hardy_quantum_table_exact(Rational(4, 5), Rational(3, 5));
  REQUIRE(exact.size() == 36);
  const auto state = asym_bell();
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const auto numeric = hardy_quantum_table(state, settings);
  for (std::size_t e = 0; e < 36; ++e)
    CHECK(std::abs(numeric[e] - to_double(exact[e])) < 1e-12);

  // Spot values: the (X,X) block is [0, p1p2, p1p2, (p1-p2)^2] over the
  // 2x2 support, and the (Y,Y) success entry is 144/4225.
  CHECK(exact[0] == 0);
  CHECK(exact[1] == Rational(12, 25));
  CHECK(exact[3] == Rational(12, 25));
  CHECK(exact[4] == Rational(1, 25));
  CHECK(exact[27] == Rational(144, 4225));

  CHECK_THROWS_AS(hardy_quantum_table_exact(Rational(1, 2), Rational(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(hardy_quantum_table_exact(Rational(-4, 5), Rational(3, 5)),
                  std::invalid_argument);
}

TEST_CASE("feasibility solver accepts mixtures and reproduces them") {
  std::mt19937_64 rng(402);
  const auto sc = hardy_scenario();
  for (int round = 0; round < 25; ++round) {
    const auto table = random_mixture_table(rng, sc, 1 + round % 6);
    const auto result = lhv_lp_feasibility(sc, table);
    REQUIRE(result.verdict == LhvVerdict::Feasible);
    CHECK(result.max_residual < 1e-8);
    CHECK(verify_certificate(result));

    const auto model = to_model(result);
    double total = 0;
    for (double w : model.weights) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("feasibility solver rejects the canonical quantum table with a witness") {
  const auto state = asym_bell();
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const auto table = hardy_quantum_table(state, settings);
  const auto result = lhv_lp_feasibility(hardy_scenario(), table);

  REQUIRE(result.verdict == LhvVerdict::Infeasible);
  CHECK(result.margin > 1e-6);
  CHECK(result.min_vertex_dot > -1e-9);
  CHECK(verify_certificate(result));

  // The witness is scaled to unit max-norm.
  double top = 0;
  for (double w : result.witness) top = std::max(top, std::abs(w));
  CHECK(top == doctest::Approx(1.0));

  // Tampering is caught: lowering a coordinate far enough makes some vertex
  // dot negative (raising one could never invalidate a witness).
  auto broken = result;
  broken.witness[1] -= 10.0;
  CHECK_FALSE(verify_certificate(broken));
}

TEST_CASE("exact feasibility on pythagorean weight pairs") {
  const std::vector<std::pair<Rational, Rational>> pairs{
      {Rational(4, 5), Rational(3, 5)},
      {Rational(12, 13), Rational(5, 13)},
      {Rational(15, 17), Rational(8, 17)},
      {Rational(21, 29), Rational(20, 29)},
  };
  for (const auto& [p1, p2] : pairs) {
    const auto table = hardy_quantum_table_exact(p1, p2);
    const auto result = lhv_lp_feasibility_exact(hardy_scenario(), table);
    REQUIRE(result.verdict == LhvVerdict::Infeasible);
    CHECK(result.exact);
    CHECK(result.margin > 0);
    CHECK(result.min_vertex_dot >= 0);
    CHECK(verify_certificate(result));

    // Exact witness separates exactly: recompute the inner products here.
    Rational wb(0);
    for (std::size_t e = 0; e < table.size(); ++e) wb += result.witness_exact[e] * table[e];
    CHECK(wb < 0);
  }
}

TEST_CASE("exact feasibility accepts exactly reproducible rational mixtures") {
  const auto sc = hardy_scenario();
  const auto strategies = enumerate_strategies(sc);
  std::vector<Rational> table(sc.table_size(), Rational(0));
  const std::vector<std::pair<std::size_t, Rational>> mix{
      {0, Rational(1, 3)}, {40, Rational(1, 6)}, {80, Rational(1, 2)}};
  for (const auto& [idx, w] : mix) {
    const auto vertex = strategy_table(sc, strategies[idx]);
    for (std::size_t e = 0; e < table.size(); ++e)
      if (vertex[e] != 0.0) table[e] += w;
  }
  const auto result = lhv_lp_feasibility_exact(sc, table);
  REQUIRE(result.verdict == LhvVerdict::Feasible);
  CHECK(verify_certificate(result));
  Rational total(0);
  for (const auto& w : result.mixture_weights_exact) total += w;
  CHECK(total == 1);

  auto broken = result;
  broken.mixture_weights_exact[0] += Rational(1, 100);
  CHECK_FALSE(verify_certificate(broken));
}

TEST_CASE("table validation rejects malformed input") {
  const auto sc = hardy_scenario();
  std::vector<double> short_table(10, 0.1);
  CHECK_THROWS_AS(lhv_lp_feasibility(sc, short_table), std::invalid_argument);

  std::vector<double> negative(36, 1.0 / 9.0);
  negative[0] = -0.01;
  CHECK_THROWS_AS(lhv_lp_feasibility(sc, negative), std::invalid_argument);

  std::vector<double> unnormalized(36, 0.2);
  CHECK_THROWS_AS(lhv_lp_feasibility(sc, unnormalized), std::invalid_argument);
}

TEST_CASE("the simplex core handles tiny systems in both scalar types") {
  // x1 + x2 = 1 over two unit columns: feasible.
  {
    const std::vector<double> a{1, 1};
    const auto cert = solve_feasibility<double>(1, 2, a, {1.0}, 1e-9);
    CHECK(cert.feasible);
    CHECK(cert.solution[0] + cert.solution[1] == doctest::Approx(1.0));
  }
  // Two inconsistent equations: infeasible with a Farkas vector.
  {
    const std::vector<Rational> a{1, 1, 1, 1};  // rows: x1+x2 = 0 and x1+x2 = 1
    const auto cert = solve_feasibility<Rational>(2, 2, a, {Rational(0), Rational(1)}, Rational(0));
    REQUIRE_FALSE(cert.feasible);
    Rational yb = cert.farkas[0] * Rational(0) + cert.farkas[1] * Rational(1);
    CHECK(yb > 0);
    // y^T A <= 0 on both columns.
    CHECK(cert.farkas[0] + cert.farkas[1] <= 0);
  }
  // Negative right-hand sides are handled by row sign flips.
  {
    const std::vector<double> a{-1, 0, 0, 1};
    const auto cert = solve_feasibility<double>(2, 2, a, {-2.0, 3.0}, 1e-9);
    REQUIRE(cert.feasible);
    CHECK(cert.solution[0] == doctest::Approx(2.0));
    CHECK(cert.solution[1] == doctest::Approx(3.0));
  }
}

TEST_CASE("certificate soundness across mixed random tables") {
  std::mt19937_64 rng(403);
  const auto sc = hardy_scenario();
  const auto state = asym_bell();
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const auto quantum = hardy_quantum_table(state, settings);

  int feasible = 0, infeasible = 0;
  for (int round = 0; round < 50; ++round) {
    std::vector<double> table;
    if (round % 2 == 0) {
      table = random_mixture_table(rng, sc, 1 + round % 7);
    } else {
      // Blend the quantum table toward a mixture; strong quantum weight
      // stays infeasible, heavy mixing becomes feasible.
      const double lambda = (round % 10) / 10.0;
      const auto mix = random_mixture_table(rng, sc, 3);
      table.resize(36);
      for (std::size_t e = 0; e < 36; ++e)
        table[e] = lambda * mix[e] + (1 - lambda) * quantum[e];
    }
    const auto result = lhv_lp_feasibility(sc, table);
    CHECK(verify_certificate(result));
    feasible += result.verdict == LhvVerdict::Feasible;
    infeasible += result.verdict == LhvVerdict::Infeasible;
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("both routes certify impossibility for eligible states") {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 5; ++round) {
    const MultipartiteState state({3, 3}, oracle::random_state(rng, 9));
    const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
    const auto cert = contradiction_certificate(hardy_scenario(), hardy_zero_constraints(),
                                                hardy_target_event());
    CHECK(cert.conclusion);
    const auto lp = lhv_lp_feasibility(hardy_scenario(), hardy_quantum_table(state, settings));
    CHECK(lp.verdict == LhvVerdict::Infeasible);
    CHECK(verify_certificate(lp));
  }
}
