#include "hardy/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "hardy/closed_form.hpp"

namespace hardy {

SchmidtDecomposition schmidt_decompose(const MultipartiteState& state, const Bipartition& cut) {
  if (cut.group1.size() + cut.group2.size() != static_cast<std::size_t>(state.party_count()))
    throw std::invalid_argument("schmidt_decompose: cut does not match state");
  const Eigen::MatrixXcd m = reshape_group_rows(state, cut.group1);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtDecomposition sd;
  const Eigen::Index k = svd.singularValues().size();
  sd.coefficients = svd.singularValues();
  sd.left_basis = svd.matrixU();
  // M = U S V^H, so psi = sum_i s_i u_i (x) conj(v_i).
  sd.right_basis = svd.matrixV().conjugate();

  // Gauge: rotate each pair so the largest-magnitude entry of the left
  // column (first such index on ties) is real positive.
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::Index at = 0;
    sd.left_basis.col(i).cwiseAbs().maxCoeff(&at);
    const Complex z = sd.left_basis(at, i);
    if (std::abs(z) > 0) {
      const Complex phase = z / std::abs(z);
      sd.left_basis.col(i) *= std::conj(phase);
      sd.right_basis.col(i) *= phase;
    }
  }

  sd.rank = 0;
  while (sd.rank < k && sd.coefficients(sd.rank) > kZeroWeightTol) ++sd.rank;
  return sd;
}

const char* to_string(EligibilityTag tag) {
  switch (tag) {
    case EligibilityTag::Product: return "Product";
    case EligibilityTag::UniformSpectrum: return "UniformSpectrum";
    case EligibilityTag::HardyEligible: return "HardyEligible";
  }
  throw std::logic_error("unknown eligibility tag");
}

EligibilityClass classify(const SchmidtDecomposition& sd, double distinct_tol) {
  EligibilityClass c;
  if (sd.rank <= 1) {
    c.tag = EligibilityTag::Product;
    return c;
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < sd.rank; ++i) {
    for (Eigen::Index j = i + 1; j < sd.rank; ++j) {
      const double pi = sd.coefficients(i), pj = sd.coefficients(j);
      if (std::abs(pi - pj) <= distinct_tol * std::max(pi, pj)) continue;
      const double value = hardy_closed_form(pi, pj);
      if (!c.witness_pair || value > best) {
        best = value;
        c.witness_pair = {i, j};
      }
    }
  }
  c.tag = c.witness_pair ? EligibilityTag::HardyEligible : EligibilityTag::UniformSpectrum;
  return c;
}

}  // namespace hardy
