#include "hardy/born.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hardy {

namespace {

// Applies the projector of one outcome to a flat amplitude vector.
Eigen::VectorXcd apply_outcome(const Eigen::VectorXcd& amplitudes,
                               const std::vector<Eigen::Index>& dims, const ObservableFamily& fam,
                               double eigenvalue) {
  const ObservableOutcome* out = fam.find(eigenvalue);
  if (out == nullptr)
    throw std::invalid_argument("joint_probability: eigenvalue " + std::to_string(eigenvalue) +
                                " not in observable " + fam.name);
  if (fam.space_dim != group_dim(dims, fam.parties))
    throw std::invalid_argument("joint_probability: observable " + fam.name +
                                " does not match the state's party dimensions");
  Eigen::MatrixXcd m = reshape_group_rows(amplitudes, dims, fam.parties);
  if (out->complement) {
    for (const auto& other : fam.outcomes) {
      if (other.complement) continue;
      m -= other.basis * (other.basis.adjoint() * m);
    }
  } else {
    m = out->basis * (out->basis.adjoint() * m);
  }
  return flatten_group_rows(m, dims, fam.parties);
}

}  // namespace

double joint_probability(const MultipartiteState& state, const OutcomeAssignment& assignment) {
  std::vector<bool> measured(state.party_count(), false);
  Eigen::VectorXcd v = state.amplitudes();
  for (const auto& choice : assignment) {
    if (choice.observable == nullptr) throw std::invalid_argument("joint_probability: null observable");
    for (int p : choice.observable->parties) {
      if (p < 0 || p >= state.party_count())
        throw std::invalid_argument("joint_probability: party out of range");
      if (measured[p])
        throw std::invalid_argument("joint_probability: party " + std::to_string(p + 1) +
                                    " measured twice");
      measured[p] = true;
    }
    v = apply_outcome(v, state.dims(), *choice.observable, choice.eigenvalue);
  }
  return std::min(v.squaredNorm(), 1.0);
}

double joint_probability_or_zero(
    const MultipartiteState& state,
    const std::vector<std::pair<const ObservableFamily*, double>>& events) {
  OutcomeAssignment assignment;
  for (const auto& [fam, eigenvalue] : events) {
    if (fam->find(eigenvalue) == nullptr) return 0.0;
    assignment.push_back({fam, eigenvalue});
  }
  return joint_probability(state, assignment);
}

bool HardyReport::pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

HardyReport hardy_report(const MultipartiteState& state, const HardySettings& s, double tolerance) {
  if (!(tolerance > 0)) throw std::invalid_argument("hardy_report: tolerance must be positive");
  const auto& o = s.observables;
  struct Spec {
    std::string label;
    const ObservableFamily* a;
    double va;
    const ObservableFamily* b;
    double vb;
    bool expect_zero;
  };
  const Spec specs[6] = {
      {"P(X1=+1, X2=+1)", &o.x1, +1, &o.x2, +1, true},
      {"P(Y1=+1, X2=-1)", &o.y1, +1, &o.x2, -1, true},
      {"P(X1=-1, Y2=+1)", &o.x1, -1, &o.y2, +1, true},
      {"P(Y1=+1, X2=0)", &o.y1, +1, &o.x2, 0, true},
      {"P(X1=0, Y2=+1)", &o.x1, 0, &o.y2, +1, true},
      {"P(Y1=+1, Y2=+1)", &o.y1, +1, &o.y2, +1, false},
  };

  HardyReport r;
  r.pair = s.pair;
  r.p1 = s.p1;
  r.p2 = s.p2;
  r.tolerance = tolerance;
  r.closed_form = hardy_closed_form(s.p1, s.p2);
  r.predicted_success = r.closed_form;
  r.form_residuals = equivalent_forms_residual(state, s);
  for (const auto& spec : specs) {
    HardyCondition c;
    c.label = spec.label;
    c.expect_zero = spec.expect_zero;
    c.value = joint_probability_or_zero(state, {{spec.a, spec.va}, {spec.b, spec.vb}});
    c.pass = spec.expect_zero ? (c.value <= tolerance) : (c.value > tolerance);
    r.conditions.push_back(std::move(c));
  }
  return r;
}

HardyReport hardy_report(const MultipartiteState& state, const Bipartition& cut,
                         std::optional<std::pair<Eigen::Index, Eigen::Index>> pair_override,
                         double tolerance) {
  return hardy_report(state, build_hardy_settings(state, cut, pair_override), tolerance);
}

ScanResult scan_hardy(int resolution) {
  if (resolution < 3) throw std::invalid_argument("scan_hardy: resolution must be at least 3");
  ScanResult r;
  r.points.reserve(resolution + 1);
  for (int j = 0; j <= resolution; ++j) {
    ScanPoint pt;
    pt.theta = (std::numbers::pi / 4) * j / resolution;
    pt.p1 = std::cos(pt.theta);
    pt.p2 = std::sin(pt.theta);
    pt.probability = hardy_closed_form(pt.p1, pt.p2);
    if (pt.probability > r.max_probability) {
      r.max_probability = pt.probability;
      r.argmax = static_cast<std::size_t>(j);
    }
    r.points.push_back(pt);
  }
  r.theta_max = r.points[r.argmax].theta;
  r.p1p2_max = r.points[r.argmax].p1 * r.points[r.argmax].p2;
  return r;
}

OutcomeCounts sample_outcomes(const MultipartiteState& state, const ObservableFamily& first,
                              const ObservableFamily& second, std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_outcomes: need at least one draw");
  OutcomeCounts oc;
  oc.observables = {first.name, second.name};
  oc.draws = n;
  oc.seed = seed;
  oc.generator = "mt19937-64";

  for (const auto& a : first.outcomes) {
    for (const auto& b : second.outcomes) {
      oc.eigenvalues.push_back({a.eigenvalue, b.eigenvalue});
      oc.probabilities.push_back(joint_probability(
          state, {{&first, a.eigenvalue}, {&second, b.eigenvalue}}));
      oc.counts.push_back(0);
    }
  }

  double total = 0;
  for (double p : oc.probabilities) total += p;
  if (std::abs(total - 1.0) > 1e-8)
    throw std::logic_error("sample_outcomes: joint distribution sums to " + std::to_string(total));

  // Inverse CDF over the entries with nonzero probability only, so that
  // forbidden outcomes can never be drawn, not even on boundary hits.
  std::vector<std::size_t> support;
  std::vector<double> cdf;
  double acc = 0;
  for (std::size_t k = 0; k < oc.probabilities.size(); ++k) {
    if (oc.probabilities[k] <= 0) continue;
    acc += oc.probabilities[k];
    support.push_back(k);
    cdf.push_back(acc);
  }
  cdf.back() = std::max(cdf.back(), 1.0);

  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < n; ++t) {
    // 53-bit uniform in [0, 1); fixed construction for cross-platform
    // reproducibility (independent of std::uniform_real_distribution).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t k = support[static_cast<std::size_t>(it - cdf.begin())];
    ++oc.counts[k];
  }
  return oc;
}

}  // namespace hardy
