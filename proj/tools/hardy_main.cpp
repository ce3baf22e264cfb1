// hardy: build, check, and certify Hardy-type nonlocality setups from state
// files. See README.md for the document formats and exit codes.
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hardy/json_io.hpp"
#include "hardy/multiparty.hpp"
#include "hardy/rational.hpp"

namespace {

using hardy::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConditionFailed = 2;
constexpr int kExitIneligible = 3;

struct RunConfig {
  std::string command;
  std::string input;
  std::string settings_from;
  std::string cut_spec;
  std::string pair_spec;
  std::string peel_spec;
  std::string settings = "Y,Y";
  std::string expect = "auto";
  std::string format = "csv";
  std::string out;
  std::string p1_spec, p2_spec;
  double tolerance = hardy::kDefaultConditionTol;
  std::uint64_t n = 100000;
  std::uint64_t seed = 1;
  int resolution = 10000;
  int tail = 1;
  bool search = false;
  bool exact = false;
  bool enumerate = false;
  bool certificate = false;
};

void emit(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + cfg.out);
  out << payload;
}

std::vector<int> parse_party_list(const std::string& text) {
  std::vector<int> parties;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed party index: " + item);
    }
    if (used != item.size() || value < 1)
      throw std::runtime_error("malformed party index: " + item);
    parties.push_back(value - 1);
  }
  if (parties.empty()) throw std::runtime_error("empty party list");
  return parties;
}

hardy::Bipartition parse_cut(const std::string& spec, int party_count) {
  if (spec.empty()) return hardy::Bipartition::of(party_count, {0});
  const auto bar = spec.find('|');
  const auto group1 = parse_party_list(bar == std::string::npos ? spec : spec.substr(0, bar));
  auto cut = hardy::Bipartition::of(party_count, group1);
  if (bar != std::string::npos) {
    auto group2 = parse_party_list(spec.substr(bar + 1));
    std::sort(group2.begin(), group2.end());
    if (group2 != cut.group2)
      throw std::runtime_error("cut groups do not partition the parties: " + spec);
  }
  return cut;
}

std::optional<std::pair<Eigen::Index, Eigen::Index>> parse_pair(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  const auto parts = parse_party_list(spec);  // same 1-based comma syntax
  if (parts.size() != 2) throw std::runtime_error("--pair wants exactly two indices");
  return std::make_pair<Eigen::Index, Eigen::Index>(parts[0], parts[1]);
}

Json cut_json(const hardy::Bipartition& cut) {
  Json g1 = Json::array(), g2 = Json::array();
  for (int p : cut.group1) g1.push_back(p + 1);
  for (int p : cut.group2) g2.push_back(p + 1);
  return Json{{"group1", std::move(g1)}, {"group2", std::move(g2)}};
}

Json ineligible_json(const std::string& tag, const std::string& message) {
  Json doc;
  doc["kind"] = "error";
  doc["error"] = "IneligibleState";
  doc["classification"] = tag;
  doc["message"] = message;
  return doc;
}

int emit_report(const RunConfig& cfg, hardy::HardyReport report, Json extra) {
  Json doc = hardy::report_json(report);
  for (auto& [key, value] : extra.items()) doc[key] = value;
  emit(cfg, hardy::dump_json(doc));
  return report.pass() ? kExitOk : kExitConditionFailed;
}

int run_schmidt(const RunConfig& cfg) {
  const auto state = hardy::parse_state_file(cfg.input);
  const auto cut = parse_cut(cfg.cut_spec, state.party_count());
  const auto sd = hardy::schmidt_decompose(state, cut);
  emit(cfg, hardy::dump_json(hardy::schmidt_json(sd, cut)));
  return kExitOk;
}

int run_classify(const RunConfig& cfg) {
  const auto state = hardy::parse_state_file(cfg.input);
  const auto cut = parse_cut(cfg.cut_spec, state.party_count());
  const auto sd = hardy::schmidt_decompose(state, cut);
  const auto cls = hardy::classify(sd);
  emit(cfg, hardy::dump_json(hardy::classify_json(cls, sd)));
  return cls.tag == hardy::EligibilityTag::HardyEligible ? kExitOk : kExitIneligible;
}

int run_hardy(const RunConfig& cfg) {
  const auto state = hardy::parse_state_file(cfg.input);
  const auto pair = parse_pair(cfg.pair_spec);

  if (!cfg.search) {
    const auto cut = parse_cut(cfg.cut_spec, state.party_count());
    auto report = hardy::hardy_report(state, cut, pair, cfg.tolerance);
    return emit_report(cfg, std::move(report), Json{{"cut", cut_json(cut)}});
  }

  // Search: every bipartition with party 1 on the left, best success wins.
  const int n = state.party_count();
  if (n > 16) throw std::runtime_error("--search supports at most 16 parties");
  std::optional<hardy::HardyReport> best;
  std::optional<hardy::Bipartition> best_cut;
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t(1) << (n - 1)); ++mask) {
    std::vector<int> group1{0};
    for (int p = 1; p < n; ++p)
      if (mask & (std::uint64_t(1) << (p - 1))) group1.push_back(p);
    const auto cut = hardy::Bipartition::of(n, group1);
    try {
      auto report = hardy::hardy_report(state, cut, pair, cfg.tolerance);
      if (!best || report.conditions.back().value > best->conditions.back().value) {
        best = std::move(report);
        best_cut = cut;
      }
    } catch (const hardy::IneligibleStateError&) {
      continue;
    }
  }
  if (!best) {
    emit(cfg, hardy::dump_json(ineligible_json(
                  "Ineligible", "no bipartition of this state admits the construction")));
    return kExitIneligible;
  }
  return emit_report(cfg, std::move(*best), Json{{"cut", cut_json(*best_cut)}});
}

int run_sample(const RunConfig& cfg) {
  const auto state = hardy::parse_state_file(cfg.input);
  const auto cut = parse_cut(cfg.cut_spec, state.party_count());
  const auto settings =
      hardy::build_hardy_settings(state, cut, parse_pair(cfg.pair_spec));

  if (cfg.settings.size() != 3 || cfg.settings[1] != ',')
    throw std::runtime_error("--settings wants a pair like X,Y");
  auto side = [&](char c, bool first) -> const hardy::ObservableFamily& {
    const auto& obs = settings.observables;
    if (c == 'X' || c == 'x') return first ? obs.x1 : obs.x2;
    if (c == 'Y' || c == 'y') return first ? obs.y1 : obs.y2;
    throw std::runtime_error("--settings letters must be X or Y");
  };
  const auto counts = hardy::sample_outcomes(state, side(cfg.settings[0], true),
                                             side(cfg.settings[2], false), cfg.n, cfg.seed);
  emit(cfg, hardy::dump_json(hardy::counts_json(counts)));
  return kExitOk;
}

int run_scan(const RunConfig& cfg) {
  const auto scan = hardy::scan_hardy(cfg.resolution);
  if (cfg.format == "json") {
    emit(cfg, hardy::dump_json(hardy::scan_json(scan)));
  } else if (cfg.format == "csv") {
    std::ostringstream out;
    hardy::scan_csv(scan, out);
    emit(cfg, out.str());
  } else {
    throw std::runtime_error("unknown --format (want csv or json)");
  }
  return kExitOk;
}

int expectation_exit(const RunConfig& cfg, const hardy::LhvFeasibilityResult& result,
                     bool verified) {
  if (!verified) return kExitConditionFailed;
  if (cfg.expect == "auto") return kExitOk;
  const bool feasible = result.verdict == hardy::LhvVerdict::Feasible;
  if (cfg.expect == "feasible") return feasible ? kExitOk : kExitConditionFailed;
  if (cfg.expect == "infeasible") return feasible ? kExitConditionFailed : kExitOk;
  throw std::runtime_error("unknown --expect (want auto, feasible, or infeasible)");
}

int run_lhv(const RunConfig& cfg) {
  if (cfg.enumerate) {
    const auto cert = hardy::contradiction_certificate(
        hardy::hardy_scenario(cfg.tail), hardy::hardy_zero_constraints(cfg.tail),
        hardy::hardy_target_event(cfg.tail));
    emit(cfg, hardy::dump_json(hardy::certificate_json(cert)));
    return cert.conclusion && hardy::verify_certificate(cert) ? kExitOk : kExitConditionFailed;
  }

  if (cfg.exact) {
    if (cfg.p1_spec.empty() || cfg.p2_spec.empty())
      throw std::runtime_error("--exact wants rational weights via --p1 and --p2");
    const auto table = hardy::hardy_quantum_table_exact(hardy::parse_rational(cfg.p1_spec),
                                                        hardy::parse_rational(cfg.p2_spec));
    const auto result = hardy::lhv_lp_feasibility_exact(hardy::hardy_scenario(), table);
    const bool verified = hardy::verify_certificate(result);
    Json doc = hardy::feasibility_json(result);
    doc["verified"] = verified;
    emit(cfg, hardy::dump_json(doc));
    return expectation_exit(cfg, result, verified);
  }

  if (cfg.input.empty()) throw std::runtime_error("--in is required without --enumerate/--exact");
  const auto state = hardy::parse_state_file(cfg.input);
  const auto settings_state =
      cfg.settings_from.empty() ? state : hardy::parse_state_file(cfg.settings_from);
  const auto cut = parse_cut(cfg.cut_spec, settings_state.party_count());
  const auto setup = hardy::build_hardy_settings(settings_state, cut, parse_pair(cfg.pair_spec));
  const auto table = hardy::hardy_quantum_table(state, setup);
  const auto result = hardy::lhv_lp_feasibility(hardy::hardy_scenario(), table);
  const bool verified = hardy::verify_certificate(result);
  Json doc = hardy::feasibility_json(result);
  doc["verified"] = verified;
  emit(cfg, hardy::dump_json(doc));
  return expectation_exit(cfg, result, verified);
}

hardy::PeelingPlan parse_plan(const RunConfig& cfg, int party_count) {
  auto plan = hardy::PeelingPlan::standard(party_count);
  if (!cfg.pair_spec.empty()) {
    const auto pair = *parse_pair(cfg.pair_spec);
    plan.hardy_pair = {static_cast<int>(pair.first), static_cast<int>(pair.second)};
    plan.peel_order.clear();
    for (int p = party_count - 1; p >= 0; --p)
      if (p != plan.hardy_pair.first && p != plan.hardy_pair.second) plan.peel_order.push_back(p);
  }
  if (!cfg.peel_spec.empty()) plan.peel_order = parse_party_list(cfg.peel_spec);
  return plan;
}

Json plan_json(const hardy::PeelingPlan& plan) {
  Json peel = Json::array();
  for (int p : plan.peel_order) peel.push_back(p + 1);
  return Json{{"pair", {plan.hardy_pair.first + 1, plan.hardy_pair.second + 1}},
              {"peel_order", std::move(peel)}};
}

int run_npartite(const RunConfig& cfg, bool tripartite) {
  if (cfg.certificate) {
    const auto cert = hardy::tripartite_contradiction();
    emit(cfg, hardy::dump_json(hardy::certificate_json(cert)));
    return cert.conclusion && hardy::verify_certificate(cert) ? kExitOk : kExitConditionFailed;
  }

  const auto state = hardy::parse_state_file(cfg.input);
  if (tripartite && state.party_count() != 3)
    throw std::runtime_error("tripartite wants a three-party state");

  if (!cfg.search) {
    const auto plan = parse_plan(cfg, state.party_count());
    auto report = hardy::npartite_report(state, plan, cfg.tolerance);
    return emit_report(cfg, std::move(report), Json{{"plan", plan_json(plan)}});
  }

  const int n = state.party_count();
  if (n > 8) throw std::runtime_error("--search supports at most 8 parties");
  std::optional<hardy::HardyReport> best;
  std::optional<hardy::PeelingPlan> best_plan;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> rest;
      for (int p = 0; p < n; ++p)
        if (p != a && p != b) rest.push_back(p);
      std::sort(rest.begin(), rest.end());
      do {
        hardy::PeelingPlan plan;
        plan.hardy_pair = {a, b};
        plan.peel_order = rest;
        try {
          auto report = hardy::npartite_report(state, plan, cfg.tolerance);
          if (!best || report.conditions.back().value > best->conditions.back().value) {
            best = std::move(report);
            best_plan = plan;
          }
        } catch (const hardy::NoEligibleComponentError&) {
        } catch (const hardy::IneligibleStateError&) {
        }
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
  }
  if (!best) {
    emit(cfg, hardy::dump_json(ineligible_json(
                  "NoEligibleComponent", "no pair/peel plan of this state admits the construction")));
    return kExitIneligible;
  }
  return emit_report(cfg, std::move(*best), Json{{"plan", plan_json(*best_plan)}});
}

int run_verify_cert(const RunConfig& cfg) {
  std::ifstream in(cfg.input);
  if (!in) throw std::runtime_error("cannot open certificate file: " + cfg.input);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("certificate is not valid JSON: ") + e.what());
  }
  const Json verdict = hardy::verify_certificate_document(doc);
  emit(cfg, hardy::dump_json(verdict));
  return verdict["verified"].get<bool>() ? kExitOk : kExitConditionFailed;
}

int dispatch(const RunConfig& cfg) {
  try {
    if (cfg.command == "schmidt") return run_schmidt(cfg);
    if (cfg.command == "classify") return run_classify(cfg);
    if (cfg.command == "hardy") return run_hardy(cfg);
    if (cfg.command == "sample") return run_sample(cfg);
    if (cfg.command == "scan") return run_scan(cfg);
    if (cfg.command == "lhv") return run_lhv(cfg);
    if (cfg.command == "tripartite") return run_npartite(cfg, true);
    if (cfg.command == "npartite") return run_npartite(cfg, false);
    if (cfg.command == "verify-cert") return run_verify_cert(cfg);
    throw std::runtime_error("unknown command " + cfg.command);
  } catch (const hardy::IneligibleStateError& e) {
    emit(cfg, hardy::dump_json(ineligible_json(hardy::to_string(e.tag()), e.what())));
    return kExitIneligible;
  } catch (const hardy::NoEligibleComponentError& e) {
    emit(cfg, hardy::dump_json(ineligible_json("NoEligibleComponent", e.what())));
    return kExitIneligible;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-type nonlocality: construction, verification, certification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--in", cfg.input, "state file (hardy-state/1 JSON)");
    if (needs_input) in->required();
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
  };

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition across a cut");
  add_common(schmidt, true);
  schmidt->add_option("--cut", cfg.cut_spec, "bipartition, e.g. 1,3|2,4 (default 1|rest)");

  auto* classify = app.add_subcommand("classify", "eligibility of a state across a cut");
  add_common(classify, true);
  classify->add_option("--cut", cfg.cut_spec, "bipartition (default 1|rest)");

  auto* hardy_cmd = app.add_subcommand("hardy", "build the setup and check all six conditions");
  add_common(hardy_cmd, true);
  hardy_cmd->add_option("--cut", cfg.cut_spec, "bipartition (default 1|rest)");
  hardy_cmd->add_option("--pair", cfg.pair_spec, "Schmidt weight pair, e.g. 1,2");
  hardy_cmd->add_option("--tol", cfg.tolerance, "zero-condition tolerance")
      ->check(CLI::PositiveNumber);
  hardy_cmd->add_flag("--search", cfg.search, "try every bipartition, report the best");

  auto* sample = app.add_subcommand("sample", "Monte-Carlo draws from a joint distribution");
  add_common(sample, true);
  sample->add_option("--cut", cfg.cut_spec, "bipartition (default 1|rest)");
  sample->add_option("--pair", cfg.pair_spec, "Schmidt weight pair, e.g. 1,2");
  sample->add_option("--settings", cfg.settings, "setting letters per side, e.g. Y,Y or X,X");
  sample->add_option("--n", cfg.n, "number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed, "PRNG seed");

  auto* scan = app.add_subcommand("scan", "success probability over the two-qubit family");
  add_common(scan, false);
  scan->add_option("--resolution", cfg.resolution, "number of grid intervals")
      ->check(CLI::Range(3, 100000000));
  scan->add_option("--format", cfg.format, "csv (default) or json");

  auto* lhv = app.add_subcommand("lhv", "LP feasibility of a quantum table, or enumeration");
  add_common(lhv, false);
  lhv->add_option("--cut", cfg.cut_spec, "bipartition for the measurement setup");
  lhv->add_option("--pair", cfg.pair_spec, "Schmidt weight pair, e.g. 1,2");
  lhv->add_option("--settings-from", cfg.settings_from,
                  "build the measurement setup from this state instead of --in");
  lhv->add_option("--expect", cfg.expect, "auto (default), feasible, or infeasible");
  lhv->add_flag("--exact", cfg.exact, "exact rational LP over --p1/--p2");
  lhv->add_option("--p1", cfg.p1_spec, "rational weight, e.g. 4/5 (with --exact)");
  lhv->add_option("--p2", cfg.p2_spec, "rational weight, e.g. 3/5 (with --exact)");
  lhv->add_flag("--enumerate", cfg.enumerate, "emit the exhaustive strategy certificate");
  lhv->add_option("--tail", cfg.tail, "tail parties for --enumerate (default 1)")
      ->check(CLI::Range(0, 16));

  auto* tripartite = app.add_subcommand("tripartite", "three-party peel + six conditions");
  add_common(tripartite, false);
  tripartite->add_option("--tol", cfg.tolerance, "zero-condition tolerance")
      ->check(CLI::PositiveNumber);
  tripartite->add_flag("--certificate", cfg.certificate,
                       "emit the 162-strategy contradiction certificate (no state needed)");

  auto* npartite = app.add_subcommand("npartite", "n-party peeling + six conditions");
  add_common(npartite, true);
  npartite->add_option("--tol", cfg.tolerance, "zero-condition tolerance")
      ->check(CLI::PositiveNumber);
  npartite->add_option("--pair", cfg.pair_spec, "parties carrying the construction, e.g. 1,2");
  npartite->add_option("--peel", cfg.peel_spec, "peel order, outermost first, e.g. 4,3");
  npartite->add_flag("--search", cfg.search, "try every pair/peel plan, report the best");

  auto* verify = app.add_subcommand("verify-cert", "re-check an emitted certificate");
  add_common(verify, true);

  CLI::App* subs[] = {schmidt, classify, hardy_cmd, sample, scan, lhv, tripartite, npartite, verify};
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (auto* sub : subs)
    if (sub->parsed()) cfg.command = sub->get_name();

  // lhv and tripartite --certificate run without a state file.
  if (cfg.command == "tripartite" && !cfg.certificate && cfg.input.empty()) {
    std::cerr << "tripartite: --in is required without --certificate\n";
    return kExitUsage;
  }
  if (cfg.command == "scan" && !cfg.input.empty()) {
    std::cerr << "scan: --in is not used\n";
    return kExitUsage;
  }

  try {
    return dispatch(cfg);
  } catch (const std::exception& e) {
    std::cerr << "hardy: " << e.what() << "\n";
    return kExitUsage;
  }
}
