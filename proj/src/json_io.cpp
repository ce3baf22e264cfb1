#include "hardy/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hardy/rational.hpp"

namespace hardy {

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

namespace {

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const Eigen::VectorXcd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_json(v(i)));
  return arr;
}

Json columns_json(const Eigen::MatrixXcd& m) {
  Json arr = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(vector_json(m.col(c)));
  return arr;
}

Json group_json(const std::vector<int>& group) {
  Json arr = Json::array();
  for (int p : group) arr.push_back(p + 1);
  return arr;
}

[[noreturn]] void bad_doc(const std::string& what) {
  throw std::runtime_error("json: " + what);
}

const Json& field(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) bad_doc(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

// --- state documents -------------------------------------------------------

Json state_json(const MultipartiteState& state) {
  Json doc;
  doc["format"] = "hardy-state/1";
  doc["dims"] = state.dims();
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < state.total_dim(); ++i)
    amps.push_back(complex_json(state.amplitudes()(i)));
  doc["amplitudes"] = std::move(amps);
  return doc;
}

std::string state_to_json(const MultipartiteState& state) { return dump_json(state_json(state)); }

MultipartiteState parse_state(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    bad_doc(std::string("state document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad_doc("state document must be an object");
  if (field(doc, "format") != "hardy-state/1") bad_doc("unsupported format (want hardy-state/1)");

  const Json& jdims = field(doc, "dims");
  if (!jdims.is_array() || jdims.empty()) bad_doc("dims must be a nonempty array");
  std::vector<Eigen::Index> dims;
  for (const auto& d : jdims) {
    if (!d.is_number_integer()) bad_doc("dims entries must be integers");
    dims.push_back(d.get<Eigen::Index>());
  }

  const Json& jamps = field(doc, "amplitudes");
  if (!jamps.is_array()) bad_doc("amplitudes must be an array");
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(jamps.size()));
  Eigen::Index i = 0;
  for (const auto& a : jamps) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      bad_doc("amplitudes entries must be [re, im] number pairs");
    amps(i++) = Complex(a[0].get<double>(), a[1].get<double>());
  }

  bool normalize = false;
  if (const auto it = doc.find("normalize"); it != doc.end()) {
    if (!it->is_boolean()) bad_doc("normalize must be a boolean");
    normalize = it->get<bool>();
  }
  return MultipartiteState(std::move(dims), std::move(amps), normalize);
}

MultipartiteState parse_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

// --- analysis documents ----------------------------------------------------

Json schmidt_json(const SchmidtDecomposition& sd, const Bipartition& cut) {
  Json doc;
  doc["kind"] = "schmidt";
  doc["cut"] = {{"group1", group_json(cut.group1)}, {"group2", group_json(cut.group2)}};
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) coeffs.push_back(sd.coefficients(i));
  doc["coefficients"] = std::move(coeffs);
  doc["rank"] = sd.rank;
  doc["left_basis"] = columns_json(sd.left_basis);
  doc["right_basis"] = columns_json(sd.right_basis);
  return doc;
}

Json classify_json(const EligibilityClass& cls, const SchmidtDecomposition& sd) {
  Json doc;
  doc["kind"] = "classification";
  doc["tag"] = to_string(cls.tag);
  if (cls.witness_pair)
    doc["witness_pair"] = {cls.witness_pair->first + 1, cls.witness_pair->second + 1};
  else
    doc["witness_pair"] = nullptr;
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) coeffs.push_back(sd.coefficients(i));
  doc["coefficients"] = std::move(coeffs);
  doc["rank"] = sd.rank;
  return doc;
}

Json report_json(const HardyReport& report) {
  Json doc;
  doc["kind"] = "hardy-report";
  doc["pass"] = report.pass();
  doc["tolerance"] = report.tolerance;
  doc["pair"] = {report.pair.first + 1, report.pair.second + 1};
  doc["p1"] = report.p1;
  doc["p2"] = report.p2;
  doc["closed_form"] = report.closed_form;
  doc["predicted_success"] = report.predicted_success;
  Json conds = Json::array();
  for (const auto& c : report.conditions) {
    conds.push_back({{"label", c.label},
                     {"value", c.value},
                     {"expect_zero", c.expect_zero},
                     {"pass", c.pass}});
  }
  doc["conditions"] = std::move(conds);
  doc["form_residuals"] = report.form_residuals;
  if (!report.peels.empty()) {
    Json peels = Json::array();
    for (const auto& rec : report.peels) {
      peels.push_back({{"party", rec.party + 1},
                       {"selected", rec.selected + 1},
                       {"weight", rec.weight},
                       {"t1_probability", rec.t1_probability}});
    }
    doc["peels"] = std::move(peels);
  }
  return doc;
}

Json counts_json(const OutcomeCounts& counts) {
  Json doc;
  doc["kind"] = "sample-counts";
  doc["generator"] = counts.generator;
  doc["seed"] = counts.seed;
  doc["draws"] = counts.draws;
  doc["observables"] = counts.observables;
  Json entries = Json::array();
  for (std::size_t i = 0; i < counts.probabilities.size(); ++i) {
    entries.push_back({{"eigenvalues", counts.eigenvalues[i]},
                       {"probability", counts.probabilities[i]},
                       {"count", counts.counts[i]}});
  }
  doc["entries"] = std::move(entries);
  return doc;
}

Json scan_json(const ScanResult& scan) {
  Json doc;
  doc["kind"] = "scan";
  doc["resolution"] = scan.points.empty() ? 0 : scan.points.size() - 1;
  doc["max_probability"] = scan.max_probability;
  doc["theta_max"] = scan.theta_max;
  doc["p1p2_max"] = scan.p1p2_max;
  doc["argmax"] = scan.argmax + 1;
  Json points = Json::array();
  for (const auto& pt : scan.points) {
    points.push_back({{"theta", pt.theta},
                      {"p1", pt.p1},
                      {"p2", pt.p2},
                      {"hardy_probability", pt.probability}});
  }
  doc["points"] = std::move(points);
  return doc;
}

void scan_csv(const ScanResult& scan, std::ostream& out) {
  out << "theta,p1,p2,hardy_probability\n";
  char line[160];
  for (const auto& pt : scan.points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", pt.theta, pt.p1, pt.p2,
                  pt.probability);
    out << line;
  }
}

// --- scenarios, events, certificates ----------------------------------------

Json scenario_json(const Scenario& scenario) {
  Json parties = Json::array();
  for (const auto& settings : scenario.parties) {
    Json party = Json::array();
    for (const auto& s : settings) party.push_back({{"label", s.label}, {"outcomes", s.outcomes}});
    parties.push_back(std::move(party));
  }
  return Json{{"parties", std::move(parties)}};
}

Scenario scenario_from_json(const Json& doc) {
  Scenario sc;
  for (const auto& party : field(doc, "parties")) {
    std::vector<SettingSpec> settings;
    for (const auto& s : party) {
      SettingSpec spec;
      spec.label = field(s, "label").get<std::string>();
      spec.outcomes = field(s, "outcomes").get<std::vector<double>>();
      settings.push_back(std::move(spec));
    }
    sc.parties.push_back(std::move(settings));
  }
  sc.validate();
  return sc;
}

Json event_json(const Scenario& scenario, const JointEvent& event) {
  Json atoms = Json::array();
  for (const auto& atom : event.atoms) {
    const auto& spec = scenario.parties.at(atom.party).at(atom.setting);
    atoms.push_back({{"party", atom.party + 1},
                     {"setting", spec.label},
                     {"outcome", spec.outcomes.at(atom.outcome)}});
  }
  return Json{{"label", event.label}, {"atoms", std::move(atoms)}};
}

JointEvent event_from_json(const Scenario& scenario, const Json& doc) {
  JointEvent event;
  event.label = field(doc, "label").get<std::string>();
  for (const auto& jatom : field(doc, "atoms")) {
    EventAtom atom;
    atom.party = field(jatom, "party").get<int>() - 1;
    if (atom.party < 0 || atom.party >= scenario.party_count()) bad_doc("event party out of range");
    const auto& settings = scenario.parties[atom.party];
    const std::string label = field(jatom, "setting").get<std::string>();
    const double outcome = field(jatom, "outcome").get<double>();
    atom.setting = -1;
    for (std::size_t s = 0; s < settings.size(); ++s)
      if (settings[s].label == label) atom.setting = static_cast<int>(s);
    if (atom.setting < 0) bad_doc("event references unknown setting " + label);
    atom.outcome = -1;
    const auto& outs = settings[atom.setting].outcomes;
    for (std::size_t o = 0; o < outs.size(); ++o)
      if (outs[o] == outcome) atom.outcome = static_cast<int>(o);
    if (atom.outcome < 0) bad_doc("event references unknown outcome of setting " + label);
    event.atoms.push_back(atom);
  }
  return event;
}

namespace {

Json strategy_json(const Scenario& scenario, const DeterministicStrategy& strategy) {
  Json per_party = Json::array();
  for (std::size_t p = 0; p < strategy.outcome.size(); ++p) {
    Json answers = Json::array();
    for (std::size_t s = 0; s < strategy.outcome[p].size(); ++s)
      answers.push_back(scenario.parties[p][s].outcomes.at(strategy.outcome[p][s]));
    per_party.push_back(std::move(answers));
  }
  return per_party;
}

DeterministicStrategy strategy_from_json(const Scenario& scenario, const Json& doc) {
  DeterministicStrategy strat;
  if (!doc.is_array() || doc.size() != scenario.parties.size())
    bad_doc("strategy must list answers for every party");
  for (std::size_t p = 0; p < scenario.parties.size(); ++p) {
    const auto& party = doc[p];
    if (!party.is_array() || party.size() != scenario.parties[p].size())
      bad_doc("strategy must answer every setting");
    std::vector<int> answers;
    for (std::size_t s = 0; s < scenario.parties[p].size(); ++s) {
      const double value = party[s].get<double>();
      const auto& outs = scenario.parties[p][s].outcomes;
      int idx = -1;
      for (std::size_t o = 0; o < outs.size(); ++o)
        if (outs[o] == value) idx = static_cast<int>(o);
      if (idx < 0) bad_doc("strategy answers with an unknown outcome");
      answers.push_back(idx);
    }
    strat.outcome.push_back(std::move(answers));
  }
  return strat;
}

}  // namespace

Json certificate_json(const ContradictionCertificate& cert) {
  Json doc;
  doc["kind"] = "contradiction-certificate";
  doc["scenario"] = scenario_json(cert.scenario);
  Json zeros = Json::array();
  for (const auto& c : cert.zero_constraints) zeros.push_back(event_json(cert.scenario, c));
  doc["zero_constraints"] = std::move(zeros);
  doc["target"] = event_json(cert.scenario, cert.target);
  doc["strategy_count"] = cert.strategies.size();
  Json strategies = Json::array();
  for (const auto& s : cert.strategies) strategies.push_back(strategy_json(cert.scenario, s));
  doc["strategies"] = std::move(strategies);
  Json verdicts = Json::array();
  for (const auto& v : cert.verdicts) {
    switch (v.kind) {
      case VerdictKind::FailsTarget:
        verdicts.push_back({{"verdict", "fails_target"}});
        break;
      case VerdictKind::ViolatesConstraint:
        verdicts.push_back({{"verdict", "violates_constraint"},
                            {"constraint", v.constraint + 1},
                            {"label", cert.zero_constraints.at(v.constraint).label}});
        break;
      case VerdictKind::Survives:
        verdicts.push_back({{"verdict", "survives"}});
        break;
    }
  }
  doc["verdicts"] = std::move(verdicts);
  Json survivors = Json::array();
  for (auto s : cert.survivors) survivors.push_back(s + 1);
  doc["survivors"] = std::move(survivors);
  doc["conclusion"] = cert.conclusion;
  return doc;
}

ContradictionCertificate certificate_from_json(const Json& doc) {
  ContradictionCertificate cert;
  cert.scenario = scenario_from_json(field(doc, "scenario"));
  for (const auto& c : field(doc, "zero_constraints"))
    cert.zero_constraints.push_back(event_from_json(cert.scenario, c));
  cert.target = event_from_json(cert.scenario, field(doc, "target"));
  for (const auto& s : field(doc, "strategies"))
    cert.strategies.push_back(strategy_from_json(cert.scenario, s));
  for (const auto& v : field(doc, "verdicts")) {
    StrategyVerdict verdict;
    const std::string kind = field(v, "verdict").get<std::string>();
    if (kind == "fails_target") {
      verdict.kind = VerdictKind::FailsTarget;
    } else if (kind == "violates_constraint") {
      verdict.kind = VerdictKind::ViolatesConstraint;
      const auto c = field(v, "constraint").get<std::size_t>();
      if (c < 1 || c > cert.zero_constraints.size()) bad_doc("verdict constraint out of range");
      verdict.constraint = c - 1;
    } else if (kind == "survives") {
      verdict.kind = VerdictKind::Survives;
    } else {
      bad_doc("unknown verdict kind " + kind);
    }
    cert.verdicts.push_back(verdict);
  }
  for (const auto& s : field(doc, "survivors")) {
    const auto idx = s.get<std::size_t>();
    if (idx < 1 || idx > cert.strategies.size()) bad_doc("survivor index out of range");
    cert.survivors.push_back(idx - 1);
  }
  cert.conclusion = field(doc, "conclusion").get<bool>();
  return cert;
}

Json feasibility_json(const LhvFeasibilityResult& result) {
  Json doc;
  doc["kind"] = "lhv-feasibility";
  doc["verdict"] = to_string(result.verdict);
  doc["exact"] = result.exact;
  doc["scenario"] = scenario_json(result.scenario);
  doc["table"] = result.table;
  if (result.exact) {
    Json exact = Json::array();
    for (const auto& x : result.table_exact) exact.push_back(to_string(x));
    doc["table_exact"] = std::move(exact);
  }
  if (result.verdict == LhvVerdict::Feasible) {
    Json mixture = Json::array();
    for (std::size_t k = 0; k < result.mixture_indices.size(); ++k) {
      Json term{{"strategy", result.mixture_indices[k] + 1},
                {"weight", result.mixture_weights[k]}};
      if (result.exact) term["weight_exact"] = to_string(result.mixture_weights_exact[k]);
      mixture.push_back(std::move(term));
    }
    doc["mixture"] = std::move(mixture);
    doc["max_residual"] = result.max_residual;
  } else {
    doc["witness"] = result.witness;
    if (result.exact) {
      Json exact = Json::array();
      for (const auto& x : result.witness_exact) exact.push_back(to_string(x));
      doc["witness_exact"] = std::move(exact);
    }
    doc["margin"] = result.margin;
    doc["min_vertex_dot"] = result.min_vertex_dot;
  }
  return doc;
}

LhvFeasibilityResult feasibility_from_json(const Json& doc) {
  LhvFeasibilityResult result;
  const std::string verdict = field(doc, "verdict").get<std::string>();
  if (verdict == "Feasible")
    result.verdict = LhvVerdict::Feasible;
  else if (verdict == "Infeasible")
    result.verdict = LhvVerdict::Infeasible;
  else
    bad_doc("unknown verdict " + verdict);
  result.exact = field(doc, "exact").get<bool>();
  result.scenario = scenario_from_json(field(doc, "scenario"));
  result.table = field(doc, "table").get<std::vector<double>>();
  if (result.exact)
    for (const auto& x : field(doc, "table_exact"))
      result.table_exact.push_back(parse_rational(x.get<std::string>()));

  if (result.verdict == LhvVerdict::Feasible) {
    for (const auto& term : field(doc, "mixture")) {
      const auto idx = field(term, "strategy").get<std::size_t>();
      if (idx < 1) bad_doc("mixture strategy index out of range");
      result.mixture_indices.push_back(idx - 1);
      result.mixture_weights.push_back(field(term, "weight").get<double>());
      if (result.exact)
        result.mixture_weights_exact.push_back(
            parse_rational(field(term, "weight_exact").get<std::string>()));
    }
    result.max_residual = field(doc, "max_residual").get<double>();
  } else {
    result.witness = field(doc, "witness").get<std::vector<double>>();
    if (result.exact)
      for (const auto& x : field(doc, "witness_exact"))
        result.witness_exact.push_back(parse_rational(x.get<std::string>()));
    result.margin = field(doc, "margin").get<double>();
    result.min_vertex_dot = field(doc, "min_vertex_dot").get<double>();
  }
  return result;
}

Json verify_certificate_document(const Json& doc) {
  const std::string kind = field(doc, "kind").get<std::string>();
  Json out;
  out["kind"] = "verification";
  out["certificate_kind"] = kind;
  if (kind == "contradiction-certificate") {
    out["verified"] = verify_certificate(certificate_from_json(doc));
  } else if (kind == "lhv-feasibility") {
    out["verified"] = verify_certificate(feasibility_from_json(doc));
  } else {
    bad_doc("unknown certificate kind " + kind);
  }
  return out;
}

}  // namespace hardy
