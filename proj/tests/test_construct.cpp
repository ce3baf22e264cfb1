#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/construct.hpp"
#include "hardy/schmidt.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

MultipartiteState random_state(std::mt19937_64& rng, std::vector<Eigen::Index> dims) {
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  return MultipartiteState(std::move(dims), oracle::random_state(rng, total));
}

MultipartiteState diag_state(double p1, double p2) {
  Eigen::VectorXcd v(4);
  v << p2, 0, 0, p1;  // singular values sort to (p1, p2) when p1 > p2
  return MultipartiteState({2, 2}, v, true);
}

// Identity-basis Schmidt data with prescribed coefficients, for checking the
// construction formulas against hand-computed vectors.
SchmidtDecomposition identity_sd(std::vector<double> coefficients, Eigen::Index dim) {
  SchmidtDecomposition sd;
  const Eigen::Index k = static_cast<Eigen::Index>(coefficients.size());
  sd.coefficients = Eigen::Map<Eigen::VectorXd>(coefficients.data(), k);
  sd.left_basis = Eigen::MatrixXcd::Identity(dim, k);
  sd.right_basis = Eigen::MatrixXcd::Identity(dim, k);
  sd.rank = k;
  return sd;
}

}  // namespace

TEST_CASE("unitary generators match the closed-form matrices") {
  const auto hu = build_unitaries(0.8, 0.6);
  const double s = 1.0 / std::sqrt(1.4);
  Eigen::Matrix2cd u_expected;
  u_expected << s * std::sqrt(0.6), Complex(0, -s * std::sqrt(0.8)),
      Complex(0, -s * std::sqrt(0.8)), s * std::sqrt(0.6);
  CHECK((hu.U - u_expected).cwiseAbs().maxCoeff() < 1e-14);

  const double d = 0.64 + 0.36 - 0.48;  // p1^2 + p2^2 - p1 p2
  Eigen::Matrix2cd v_expected;
  v_expected << Complex(0, -(0.6 - 0.8) / std::sqrt(d)), std::sqrt(0.48 / d),
      std::sqrt(0.48 / d), Complex(0, -(0.6 - 0.8) / std::sqrt(d));
  CHECK((hu.V - v_expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("unitarity holds across random weight pairs") {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> unif(1e-6, 1.0);
  for (int round = 0; round < 1000; ++round) {
    const auto hu = build_unitaries(unif(rng), unif(rng));
    const Eigen::Matrix2cd iu = hu.U.adjoint() * hu.U - Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd iv = hu.V.adjoint() * hu.V - Eigen::Matrix2cd::Identity();
    CHECK(iu.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(iv.cwiseAbs().maxCoeff() < 1e-12);
    // Both matrices are symmetric by construction.
    CHECK((hu.U - hu.U.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((hu.V - hu.V.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("degenerate equal weights give the swap-like V") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto hu = build_unitaries(r, r);
  Eigen::Matrix2cd u_expected;
  u_expected << r, Complex(0, -r), Complex(0, -r), r;
  CHECK((hu.U - u_expected).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::Matrix2cd v_expected;
  v_expected << 0, 1, 1, 0;
  CHECK((hu.V - v_expected).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(build_unitaries(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_unitaries(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("basis vectors match the hand-computed qubit example") {
  // alpha1 = |0>, alpha2 = |1>, p = (0.8, 0.6):
  // x+(1) = (sqrt(0.6)|0> - i sqrt(0.8)|1>) / sqrt(1.4)
  const auto sd = identity_sd({0.8, 0.6}, 2);
  const auto bases = build_bases(sd, {0, 1});
  const double s = 1.0 / std::sqrt(1.4);
  Eigen::Vector2cd expected;
  expected << s * std::sqrt(0.6), Complex(0, -s * std::sqrt(0.8));
  CHECK((bases.x_plus_1 - expected).norm() < 1e-14);

  // Same formula on side 2.
  CHECK((bases.x_plus_2 - expected).norm() < 1e-14);
}

TEST_CASE("x and y bases are orthonormal and span the schmidt pair plane") {
  std::mt19937_64 rng(201);
  for (int round = 0; round < 25; ++round) {
    const auto state = random_state(rng, {4, 5});
    const auto cut = Bipartition::of(2, {0});
    const auto settings = build_hardy_settings(state, cut);
    const auto& b = settings.bases;

    auto check_pair = [](const Eigen::VectorXcd& plus, const Eigen::VectorXcd& minus) {
      CHECK(plus.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(minus.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(plus.dot(minus)) < 1e-10);
    };
    check_pair(b.x_plus_1, b.x_minus_1);
    check_pair(b.y_plus_1, b.y_minus_1);
    check_pair(b.x_plus_2, b.x_minus_2);
    check_pair(b.y_plus_2, b.y_minus_2);

    // y vectors lie in span{x+, x-}: projecting onto it preserves them.
    Eigen::MatrixXcd x(b.x_plus_1.size(), 2);
    x.col(0) = b.x_plus_1;
    x.col(1) = b.x_minus_1;
    CHECK((x * (x.adjoint() * b.y_plus_1) - b.y_plus_1).norm() < 1e-10);
    CHECK((x * (x.adjoint() * b.y_minus_1) - b.y_minus_1).norm() < 1e-10);
  }
}

TEST_CASE("basis overlaps follow the weight formulas") {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 25; ++round) {
    const auto state = random_state(rng, {3, 3});
    const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
    const double p1 = settings.p1, p2 = settings.p2;
    const double d = p1 * p1 + p2 * p2 - p1 * p2;
    const auto& b = settings.bases;

    CHECK(std::abs(b.y_plus_1.dot(b.x_plus_1)) ==
          doctest::Approx(std::abs(p2 - p1) / std::sqrt(d)).epsilon(1e-10));
    CHECK(std::abs(b.y_plus_1.dot(b.x_minus_1)) ==
          doctest::Approx(std::sqrt(p1 * p2 / d)).epsilon(1e-10));
  }
}

TEST_CASE("y vectors equal the composed rotation applied to the schmidt pair") {
  std::mt19937_64 rng(203);
  const auto state = random_state(rng, {4, 4});
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const auto& sd = settings.schmidt;

  Eigen::MatrixXcd a(sd.left_basis.rows(), 2);
  a.col(0) = sd.left_basis.col(settings.pair.first);
  a.col(1) = sd.left_basis.col(settings.pair.second);
  const Eigen::MatrixXcd vu = settings.unitaries.V * settings.unitaries.U;
  const Eigen::MatrixXcd y = a * vu.transpose();
  CHECK((y.col(0) - settings.bases.y_plus_1).norm() < 1e-12);
  CHECK((y.col(1) - settings.bases.y_minus_1).norm() < 1e-12);
}

TEST_CASE("x coordinates in the schmidt basis invert through U") {
  std::mt19937_64 rng(204);
  const auto state = random_state(rng, {5, 4});
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const auto& sd = settings.schmidt;

  Eigen::MatrixXcd a(sd.left_basis.rows(), 2);
  a.col(0) = sd.left_basis.col(settings.pair.first);
  a.col(1) = sd.left_basis.col(settings.pair.second);
  Eigen::MatrixXcd coords(2, 2);  // alpha-basis coordinates of (x+, x-)
  coords.col(0) = a.adjoint() * settings.bases.x_plus_1;
  coords.col(1) = a.adjoint() * settings.bases.x_minus_1;
  const Eigen::MatrixXcd recovered = settings.unitaries.U.inverse() * coords;
  CHECK((recovered - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("observables are complete and orthogonal on both sides") {
  std::mt19937_64 rng(205);
  for (const auto& dims : std::vector<std::vector<Eigen::Index>>{{2, 2}, {3, 2}, {6, 5}, {16, 16}}) {
    const auto state = random_state(rng, dims);
    const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
    for (const auto* fam : {&settings.observables.x1, &settings.observables.y1,
                            &settings.observables.x2, &settings.observables.y2}) {
      const Eigen::Index d = fam->space_dim;
      // Completeness: projectors sum to the identity.
      Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
      for (const auto& o : fam->outcomes) sum += oracle::outcome_projector(*fam, o.eigenvalue);
      CHECK((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
      // Orthogonality: distinct outcome projectors annihilate each other.
      for (const auto& o1 : fam->outcomes)
        for (const auto& o2 : fam->outcomes) {
          if (o1.eigenvalue == o2.eigenvalue) continue;
          const Eigen::MatrixXcd prod = oracle::outcome_projector(*fam, o1.eigenvalue) *
                                        oracle::outcome_projector(*fam, o2.eigenvalue);
          CHECK(prod.cwiseAbs().maxCoeff() < 1e-10);
        }
      // Spectrum: the 0 outcome exists exactly when the side has room for it.
      CHECK((fam->find(0.0) != nullptr) == (d > 2));
      CHECK(fam->find(+1.0) != nullptr);
      CHECK(fam->find(-1.0) != nullptr);
      CHECK(fam->find(0.5) == nullptr);
    }
  }
}

TEST_CASE("settings construction enforces eligibility and pair validity") {
  Eigen::VectorXcd prod(4);
  prod << 1, 0, 0, 0;
  const MultipartiteState product({2, 2}, prod);
  CHECK_THROWS_AS(build_hardy_settings(product, Bipartition::of(2, {0})), IneligibleStateError);
  try {
    build_hardy_settings(product, Bipartition::of(2, {0}));
  } catch (const IneligibleStateError& e) {
    CHECK(e.tag() == EligibilityTag::Product);
  }

  Eigen::VectorXcd sym(4);
  sym << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  const MultipartiteState uniform({2, 2}, sym);
  try {
    build_hardy_settings(uniform, Bipartition::of(2, {0}));
    CHECK(false);
  } catch (const IneligibleStateError& e) {
    CHECK(e.tag() == EligibilityTag::UniformSpectrum);
  }

  const auto state = diag_state(0.8, 0.6);
  CHECK_NOTHROW(build_hardy_settings(state, Bipartition::of(2, {0}), {{0, 1}}));
  CHECK_THROWS_AS(build_hardy_settings(state, Bipartition::of(2, {0}), {{0, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_hardy_settings(state, Bipartition::of(2, {0}), {{0, 5}}),
                  std::invalid_argument);
  // Pair override onto equal weights is rejected as ineligible.
  CHECK_THROWS_AS(build_hardy_settings(uniform, Bipartition::of(2, {0}), {{0, 1}}),
                  IneligibleStateError);
}

TEST_CASE("the three state expansions reproduce the amplitudes") {
  std::mt19937_64 rng(206);
  for (const auto& dims : std::vector<std::vector<Eigen::Index>>{{2, 2}, {3, 4}, {6, 6}}) {
    for (int round = 0; round < 10; ++round) {
      const auto state = random_state(rng, dims);
      const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
      const auto residuals = equivalent_forms_residual(state, settings);
      for (double r : residuals) CHECK(r < 1e-10);
    }
  }

  // The canonical asymmetric Bell state, exactly.
  const auto state = diag_state(0.8, 0.6);
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  for (double r : equivalent_forms_residual(state, settings)) CHECK(r < 1e-12);
}

TEST_CASE("the second expansion weights its terms by the derived moduli") {
  std::mt19937_64 rng(207);
  const auto state = random_state(rng, {3, 3});
  const auto settings = build_hardy_settings(state, Bipartition::of(2, {0}));
  const double p1 = settings.p1, p2 = settings.p2;
  const auto& b = settings.bases;

  // Contract the state against y-(1) (x) x-(2) and x-(1) (x) x+(2): the
  // coefficients must have moduli sqrt(p1^2+p2^2-p1p2) and sqrt(p1 p2).
  const Eigen::MatrixXcd m = reshape_group_rows(state, {0});
  const Complex c_yx = b.y_minus_1.dot(m * b.x_minus_2.conjugate());
  const Complex c_xx = b.x_minus_1.dot(m * b.x_plus_2.conjugate());
  CHECK(std::abs(c_yx) ==
        doctest::Approx(std::sqrt(p1 * p1 + p2 * p2 - p1 * p2)).epsilon(1e-10));
  CHECK(std::abs(c_xx) == doctest::Approx(std::sqrt(p1 * p2)).epsilon(1e-10));
}

TEST_CASE("grouped cuts build observables on the right parties") {
  std::mt19937_64 rng(208);
  const auto state = random_state(rng, {2, 2, 2, 2});
  const auto cut = Bipartition::of(4, {0, 2});
  const auto settings = build_hardy_settings(state, cut);
  CHECK(settings.observables.x1.parties == std::vector<int>{0, 2});
  CHECK(settings.observables.y2.parties == std::vector<int>{1, 3});
  CHECK(settings.observables.x1.space_dim == 4);
  for (double r : equivalent_forms_residual(state, settings)) CHECK(r < 1e-10);
}
