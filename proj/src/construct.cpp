#include "hardy/construct.hpp"

#include <cmath>

#include "hardy/closed_form.hpp"

namespace hardy {

HardyUnitaries build_unitaries(double p1, double p2) {
  if (!(p1 > 0) || !(p2 > 0)) throw std::invalid_argument("build_unitaries: weights must be positive");
  HardyUnitaries hu;
  hu.p1 = p1;
  hu.p2 = p2;
  const double nu = 1.0 / std::sqrt(p1 + p2);
  const Complex mi(0, -1);
  hu.U << nu * std::sqrt(p2), mi * (nu * std::sqrt(p1)),  //
      mi * (nu * std::sqrt(p1)), nu * std::sqrt(p2);
  const double d = p1 * p1 + p2 * p2 - p1 * p2;  // = (p1-p2)^2 + p1*p2 > 0
  const double nv = 1.0 / std::sqrt(d);
  hu.V << mi * (nv * (p2 - p1)), nv * std::sqrt(p1 * p2),  //
      nv * std::sqrt(p1 * p2), mi * (nv * (p2 - p1));
  return hu;
}

namespace {

void check_pair(const SchmidtDecomposition& sd, std::pair<Eigen::Index, Eigen::Index> pair) {
  const Eigen::Index k = sd.coefficients.size();
  if (pair.first < 0 || pair.second < 0 || pair.first >= k || pair.second >= k ||
      pair.first == pair.second)
    throw std::invalid_argument("pair: indices out of range or equal");
  if (sd.coefficients(pair.first) <= kZeroWeightTol || sd.coefficients(pair.second) <= kZeroWeightTol)
    throw std::invalid_argument("pair: zero weight at a pair index");
}

}  // namespace

HardyBases build_bases(const SchmidtDecomposition& sd, std::pair<Eigen::Index, Eigen::Index> pair) {
  check_pair(sd, pair);
  const HardyUnitaries hu =
      build_unitaries(sd.coefficients(pair.first), sd.coefficients(pair.second));

  // Stacked-symbol convention of the defining relations: the row vector of
  // new kets equals M times the row vector of old kets, i.e. columns of
  // [new_1 new_2] = [old_1 old_2] * M^T.
  Eigen::MatrixXcd a(sd.left_basis.rows(), 2), b(sd.right_basis.rows(), 2);
  a << sd.left_basis.col(pair.first), sd.left_basis.col(pair.second);
  b << sd.right_basis.col(pair.first), sd.right_basis.col(pair.second);

  const Eigen::MatrixXcd x1 = a * hu.U.transpose();
  const Eigen::MatrixXcd y1 = x1 * hu.V.transpose();
  const Eigen::MatrixXcd x2 = b * hu.U.transpose();
  const Eigen::MatrixXcd y2 = x2 * hu.V.transpose();

  HardyBases hb;
  hb.x_plus_1 = x1.col(0);
  hb.x_minus_1 = x1.col(1);
  hb.y_plus_1 = y1.col(0);
  hb.y_minus_1 = y1.col(1);
  hb.x_plus_2 = x2.col(0);
  hb.x_minus_2 = x2.col(1);
  hb.y_plus_2 = y2.col(0);
  hb.y_minus_2 = y2.col(1);
  return hb;
}

const ObservableOutcome* ObservableFamily::find(double eigenvalue) const {
  for (const auto& o : outcomes)
    if (o.eigenvalue == eigenvalue) return &o;
  return nullptr;
}

namespace {

ObservableFamily make_family(std::string name, std::vector<int> parties, Eigen::Index space_dim,
                             const Eigen::VectorXcd& plus, const Eigen::VectorXcd& minus) {
  if (plus.size() != space_dim || minus.size() != space_dim)
    throw std::invalid_argument("build_observables: basis vector does not match group dimension");
  ObservableFamily f;
  f.name = std::move(name);
  f.parties = std::move(parties);
  f.space_dim = space_dim;
  f.outcomes.push_back({+1.0, plus, false});
  f.outcomes.push_back({-1.0, minus, false});
  if (space_dim > 2) f.outcomes.push_back({0.0, Eigen::MatrixXcd(space_dim, 0), true});
  return f;
}

}  // namespace

HardyObservables build_observables(const HardyBases& bases, const Bipartition& cut,
                                   const std::vector<Eigen::Index>& dims) {
  const Eigen::Index dl = cut.group1_dim(dims), dr = cut.group2_dim(dims);
  HardyObservables obs;
  obs.x1 = make_family("X1", cut.group1, dl, bases.x_plus_1, bases.x_minus_1);
  obs.y1 = make_family("Y1", cut.group1, dl, bases.y_plus_1, bases.y_minus_1);
  obs.x2 = make_family("X2", cut.group2, dr, bases.x_plus_2, bases.x_minus_2);
  obs.y2 = make_family("Y2", cut.group2, dr, bases.y_plus_2, bases.y_minus_2);
  return obs;
}

HardySettings build_hardy_settings(const MultipartiteState& state, const Bipartition& cut,
                                   std::optional<std::pair<Eigen::Index, Eigen::Index>> pair_override,
                                   double distinct_tol) {
  HardySettings s;
  s.cut = cut;
  s.schmidt = schmidt_decompose(state, cut);
  if (pair_override) {
    check_pair(s.schmidt, *pair_override);
    const double pi = s.schmidt.coefficients(pair_override->first);
    const double pj = s.schmidt.coefficients(pair_override->second);
    if (std::abs(pi - pj) <= distinct_tol * std::max(pi, pj)) {
      const EligibilityClass c = classify(s.schmidt, distinct_tol);
      throw IneligibleStateError(c.tag == EligibilityTag::HardyEligible
                                     ? EligibilityTag::UniformSpectrum
                                     : c.tag,
                                 "selected pair has equal weights within tolerance");
    }
    s.pair = *pair_override;
  } else {
    const EligibilityClass c = classify(s.schmidt, distinct_tol);
    if (c.tag != EligibilityTag::HardyEligible)
      throw IneligibleStateError(c.tag, std::string("state is not Hardy-eligible for this cut: ") +
                                            to_string(c.tag));
    s.pair = *c.witness_pair;
  }
  s.p1 = s.schmidt.coefficients(s.pair.first);
  s.p2 = s.schmidt.coefficients(s.pair.second);
  s.unitaries = build_unitaries(s.p1, s.p2);
  s.bases = build_bases(s.schmidt, s.pair);
  s.observables = build_observables(s.bases, cut, state.dims());
  return s;
}

std::array<double, 3> equivalent_forms_residual(const MultipartiteState& state,
                                                const HardySettings& s) {
  const double p1 = s.p1, p2 = s.p2;
  const double d = p1 * p1 + p2 * p2 - p1 * p2;
  const Complex isg(0, std::sqrt(p1 * p2)), isd(0, std::sqrt(d));

  // Common tail: every Schmidt term outside the selected pair.
  const Eigen::Index dl = s.schmidt.left_basis.rows(), dr = s.schmidt.right_basis.rows();
  Eigen::MatrixXcd tail = Eigen::MatrixXcd::Zero(dl, dr);
  for (Eigen::Index i = 0; i < s.schmidt.coefficients.size(); ++i) {
    if (i == s.pair.first || i == s.pair.second) continue;
    tail += s.schmidt.coefficients(i) * s.schmidt.left_basis.col(i) *
            s.schmidt.right_basis.col(i).transpose();
  }

  const auto& hb = s.bases;
  // The three equivalent expansions of the pair part:
  //   i sqrt(p1 p2) [x+ x- + x- x+] + (p2 - p1) x- x-
  //   i sqrt(d) y- x-  +  i sqrt(p1 p2) x- x+
  //   i sqrt(p1 p2) x+ x-  +  i sqrt(d) x- y-
  const Eigen::MatrixXcd form1 =
      isg * (hb.x_plus_1 * hb.x_minus_2.transpose() + hb.x_minus_1 * hb.x_plus_2.transpose()) +
      (p2 - p1) * hb.x_minus_1 * hb.x_minus_2.transpose();
  const Eigen::MatrixXcd form2 = isd * hb.y_minus_1 * hb.x_minus_2.transpose() +
                                 isg * hb.x_minus_1 * hb.x_plus_2.transpose();
  const Eigen::MatrixXcd form3 = isg * hb.x_plus_1 * hb.x_minus_2.transpose() +
                                 isd * hb.x_minus_1 * hb.y_minus_2.transpose();

  std::array<double, 3> res{};
  const Eigen::MatrixXcd forms[3] = {form1, form2, form3};
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXcd rebuilt =
        flatten_group_rows(forms[k] + tail, state.dims(), s.cut.group1);
    res[k] = (rebuilt - state.amplitudes()).norm();
  }
  return res;
}

}  // namespace hardy
