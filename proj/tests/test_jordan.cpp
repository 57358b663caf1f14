#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lcs/catalog.hpp"
#include "lcs/errors.hpp"
#include "lcs/expm.hpp"
#include "lcs/jordan.hpp"
#include "lcs/rng.hpp"

using lcs::JordanDecomposition;
using lcs::Matrix;
using lcs::Vector;

namespace {

double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

Matrix random_matrix(lcs::Rng& rng, lcs::Index n, double scale) {
  Matrix m(n, n);
  for (lcs::Index i = 0; i < n; ++i)
    for (lcs::Index j = 0; j < n; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

} // namespace

TEST_CASE("unipotent Jordan block splits into identity plus shift") {
  Matrix a(2, 2);
  a << 1.0, 1.0,
       0.0, 1.0;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  CHECK(jd.elliptic.norm() < 1e-10);
  CHECK((jd.hyperbolic - Matrix::Identity(2, 2)).norm() < 1e-10);
  Matrix shift(2, 2);
  shift << 0.0, 1.0,
           0.0, 0.0;
  CHECK((jd.nilpotent - shift).norm() < 1e-10);
  REQUIRE(jd.eigenvalues.size() == 1);
  CHECK(jd.eigenvalues[0].multiplicity == 2);
  CHECK(std::abs(jd.eigenvalues[0].value - lcs::Complex(1.0, 0.0)) < 1e-9);
}

TEST_CASE("real diagonal input is purely hyperbolic with sorted clusters") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -3.0;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  CHECK((jd.hyperbolic - a).norm() < 1e-12);
  CHECK(jd.elliptic.norm() < 1e-12);
  CHECK(jd.nilpotent.norm() < 1e-12);
  REQUIRE(jd.eigenvalues.size() == 2);
  CHECK(jd.eigenvalues[0].value.real() == doctest::Approx(-3.0));
  CHECK(jd.eigenvalues[1].value.real() == doctest::Approx(2.0));
}

TEST_CASE("rotation generator is purely elliptic") {
  Matrix a(2, 2);
  a << 0.0, -2.0,
       2.0, 0.0;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  CHECK((jd.elliptic - a).norm() < 1e-12);
  CHECK(jd.hyperbolic.norm() < 1e-12);
  CHECK(jd.nilpotent.norm() < 1e-12);
  REQUIRE(jd.eigenvalues.size() == 2);
  CHECK(jd.eigenvalues[0].value.imag() == doctest::Approx(-2.0));
  CHECK(jd.eigenvalues[1].value.imag() == doctest::Approx(2.0));
}

TEST_CASE("spiral block plus a real eigenvalue separates cleanly") {
  Matrix a(3, 3);
  a << 1.0, -2.0, 0.0,
       2.0,  1.0, 0.0,
       0.0,  0.0, -1.0;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  Matrix e(3, 3), h(3, 3);
  e << 0.0, -2.0, 0.0,
       2.0,  0.0, 0.0,
       0.0,  0.0, 0.0;
  h << 1.0, 0.0, 0.0,
       0.0, 1.0, 0.0,
       0.0, 0.0, -1.0;
  CHECK((jd.elliptic - e).norm() < 1e-9);
  CHECK((jd.hyperbolic - h).norm() < 1e-9);
  CHECK(jd.nilpotent.norm() < 1e-9);
}

TEST_CASE("shifted Jordan block keeps its nilpotent part") {
  Matrix a(2, 2);
  a << 0.5, 1.0,
       0.0, 0.5;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  CHECK((jd.hyperbolic - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-10);
  CHECK(std::abs(jd.nilpotent(0, 1) - 1.0) < 1e-10);
  CHECK(jd.elliptic.norm() < 1e-10);
}

TEST_CASE("decomposing one part again is idempotent") {
  Matrix a(3, 3);
  a << 1.0, -2.0, 0.0,
       2.0,  1.0, 0.0,
       0.0,  0.0, -1.0;
  JordanDecomposition jd = lcs::jordan_decompose(a);
  JordanDecomposition of_h = lcs::jordan_decompose(jd.hyperbolic);
  CHECK((of_h.hyperbolic - jd.hyperbolic).norm() < 1e-8);
  CHECK(of_h.elliptic.norm() < 1e-8);
  CHECK(of_h.nilpotent.norm() < 1e-8);
  JordanDecomposition of_e = lcs::jordan_decompose(jd.elliptic);
  CHECK((of_e.elliptic - jd.elliptic).norm() < 1e-8);
  CHECK(of_e.hyperbolic.norm() < 1e-8);

  Matrix n(2, 2);
  n << 0.0, 1.0,
       0.0, 0.0;
  JordanDecomposition of_n = lcs::jordan_decompose(n);
  CHECK((of_n.nilpotent - n).norm() < 1e-10);
  CHECK(of_n.elliptic.norm() < 1e-10);
  CHECK(of_n.hyperbolic.norm() < 1e-10);
}

TEST_CASE("random matrices reconstruct with commuting, typed parts") {
  lcs::Rng rng(41);
  int accepted = 0;
  for (int trial = 0; trial < 40 && accepted < 20; ++trial) {
    Matrix a = random_matrix(rng, 5, 1.0);
    JordanDecomposition jd;
    try {
      jd = lcs::jordan_decompose(a);
    } catch (const lcs::NumericalError&) {
      continue; // ambiguous clustering is a legitimate refusal
    }
    ++accepted;
    CHECK((jd.elliptic + jd.hyperbolic + jd.nilpotent - a).norm() < 1e-9);
    CHECK(commutator_norm(jd.elliptic, jd.hyperbolic) < 1e-8);
    CHECK(commutator_norm(jd.elliptic, jd.nilpotent) < 1e-8);
    CHECK(commutator_norm(jd.hyperbolic, jd.nilpotent) < 1e-8);

    Matrix n_power = jd.nilpotent;
    for (int k = 1; k < 5; ++k) n_power = (n_power * jd.nilpotent).eval();
    CHECK(n_power.norm() < 1e-8);

    Eigen::EigenSolver<Matrix> es_e(jd.elliptic);
    CHECK(es_e.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-7);
    Eigen::EigenSolver<Matrix> es_h(jd.hyperbolic);
    CHECK(es_h.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-7);
  }
  CHECK(accepted >= 20);
}

TEST_CASE("nearly coincident eigenvalues refuse to cluster") {
  Matrix a = Matrix::Identity(2, 2);
  a(1, 1) += 5e-7; // inside the ambiguity band, outside the cluster radius
  CHECK_THROWS_AS(lcs::jordan_decompose(a), lcs::NumericalError);
}

TEST_CASE("dynamical splitting of ad(H) on sl2") {
  lcs::LieAlgebra sl2 = lcs::catalog_algebra("sl2");
  Matrix ad_h = sl2.ad(Vector::Unit(3, 0));
  lcs::DynamicalSplitting split = lcs::dynamical_split(ad_h);
  CHECK(split.plus.dim() == 1);
  CHECK(split.zero.dim() == 1);
  CHECK(split.minus.dim() == 1);
  CHECK(split.plus.contains(Vector::Unit(3, 1)));
  CHECK(split.zero.contains(Vector::Unit(3, 0)));
  CHECK(split.minus.contains(Vector::Unit(3, 2)));
  CHECK(split.lambda_min_abs == doctest::Approx(2.0));
}

TEST_CASE("dynamical splitting of the se2 and so3 drifts") {
  Matrix d_se2 = Matrix::Zero(3, 3);
  d_se2(0, 0) = -1.0;
  d_se2(1, 1) = -1.0;
  lcs::DynamicalSplitting se2 = lcs::dynamical_split(d_se2);
  CHECK(se2.plus.is_trivial());
  CHECK(se2.minus.dim() == 2);
  CHECK(se2.zero.dim() == 1);
  CHECK(se2.lambda_min_abs == doctest::Approx(1.0));

  lcs::LieAlgebra so3 = lcs::catalog_algebra("so3");
  lcs::DynamicalSplitting rot = lcs::dynamical_split(so3.ad(Vector::Unit(3, 2)));
  CHECK(rot.zero.is_full());
  CHECK(std::isinf(rot.lambda_min_abs));

  Matrix d_heis = Matrix::Zero(3, 3);
  d_heis(0, 0) = 1.0;
  d_heis(1, 1) = -1.0;
  lcs::DynamicalSplitting hyp = lcs::dynamical_split(d_heis);
  CHECK(hyp.plus.contains(Vector::Unit(3, 0)));
  CHECK(hyp.minus.contains(Vector::Unit(3, 1)));
  CHECK(hyp.zero.contains(Vector::Unit(3, 2)));
}

TEST_CASE("contraction constants certify the decay inequality") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  lcs::DynamicalSplitting split = lcs::dynamical_split(a);
  lcs::ContractionConstants cc = lcs::contraction_constants(split, a);
  CHECK(cc.c == doctest::Approx(1.0));
  CHECK(cc.lambda == doctest::Approx(0.999));

  // Transient growth forces c < 1 while the certified inequality still holds.
  Matrix bump(2, 2);
  bump << -1.0, 10.0,
           0.0, -1.0;
  lcs::DynamicalSplitting split_bump = lcs::dynamical_split(bump);
  lcs::ContractionConstants cb = lcs::contraction_constants(split_bump, bump);
  CHECK(cb.c < 1.0);
  CHECK(cb.c > 0.0);

  lcs::Rng rng(77);
  for (double t = 0.0; t <= 50.0; t += 2.5) {
    Matrix flow = lcs::expm(t * bump);
    for (int k = 0; k < 5; ++k) {
      Vector v = rng.unit_vector(2);
      CHECK((flow * v).norm() <= std::exp(-cb.lambda * t) / cb.c * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("contraction constants respect a custom metric") {
  Matrix bump(2, 2);
  bump << -1.0, 10.0,
           0.0, -1.0;
  lcs::DynamicalSplitting split = lcs::dynamical_split(bump);
  Matrix gram(2, 2);
  gram << 2.0, 0.3,
          0.3, 1.0;
  lcs::ContractionConstants cc = lcs::contraction_constants(split, bump, gram);
  CHECK(cc.lambda == doctest::Approx(0.999));

  // The certified inequality in the weighted norm, in minus-basis coordinates.
  const Matrix& b = split.minus.basis();
  auto wnorm = [&](const Vector& x) { return std::sqrt(x.dot(gram * x)); };
  lcs::Rng rng(78);
  for (double t = 0.0; t <= 50.0; t += 2.5) {
    Matrix restricted = b.transpose() * lcs::expm(t * bump) * b;
    for (int k = 0; k < 5; ++k) {
      Vector x = rng.unit_vector(2);
      CHECK(wnorm(restricted * x) <= std::exp(-cc.lambda * t) / cc.c * wnorm(x) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("contraction constants reject unusable splittings") {
  Matrix expanding = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(
      lcs::contraction_constants(lcs::dynamical_split(expanding), expanding),
      lcs::ValidationError);

  Matrix rotation(2, 2);
  rotation << 0.0, -1.0,
              1.0, 0.0;
  CHECK_THROWS_AS(
      lcs::contraction_constants(lcs::dynamical_split(rotation), rotation),
      lcs::ValidationError);
}

TEST_CASE("grading holds for the catalog derivations") {
  lcs::LieAlgebra sl2 = lcs::catalog_algebra("sl2");
  lcs::GradingReport g = lcs::verify_grading(sl2, sl2.ad(Vector::Unit(3, 0)));
  CHECK(g.graded);
  CHECK(g.max_residual < 1e-10);
  REQUIRE(g.levels.size() == 3);
  CHECK(g.levels[0].eigenvalue == doctest::Approx(-2.0));
  CHECK(g.levels[1].eigenvalue == doctest::Approx(0.0));
  CHECK(g.levels[2].eigenvalue == doctest::Approx(2.0));
  CHECK(g.levels[2].space.contains(Vector::Unit(3, 1)));

  lcs::LieAlgebra heis = lcs::catalog_algebra("heisenberg3");
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  lcs::GradingReport gh = lcs::verify_grading(heis, d);
  CHECK(gh.graded);
  REQUIRE(gh.levels.size() == 3);
  CHECK(gh.levels[0].eigenvalue == doctest::Approx(-1.0));
  CHECK(gh.levels[2].eigenvalue == doctest::Approx(1.0));
}

TEST_CASE("grading rejects operators that are not derivations") {
  lcs::LieAlgebra so3 = lcs::catalog_algebra("so3");
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK_THROWS_AS(lcs::verify_grading(so3, d), lcs::ValidationError);
}

TEST_CASE("operator classification covers all five classes") {
  using lcs::OperatorClass;
  CHECK(lcs::classify_operator(Matrix::Zero(2, 2)) == OperatorClass::elliptic);
  Matrix rot(2, 2);
  rot << 0.0, -1.0,
         1.0, 0.0;
  CHECK(lcs::classify_operator(rot) == OperatorClass::elliptic);
  Matrix hyp = Matrix::Zero(2, 2);
  hyp(0, 0) = 1.0;
  hyp(1, 1) = -1.0;
  CHECK(lcs::classify_operator(hyp) == OperatorClass::hyperbolic);
  Matrix nil(2, 2);
  nil << 0.0, 1.0,
         0.0, 0.0;
  CHECK(lcs::classify_operator(nil) == OperatorClass::nilpotent);
  Matrix semi = Matrix::Zero(3, 3);
  semi(0, 0) = 1.0;
  semi(1, 2) = -2.0;
  semi(2, 1) = 2.0;
  CHECK(lcs::classify_operator(semi) == OperatorClass::semisimple);
  Matrix mixed(2, 2);
  mixed << 1.0, 1.0,
           0.0, 1.0;
  CHECK(lcs::classify_operator(mixed) == OperatorClass::mixed);
  CHECK(std::string(lcs::to_string(OperatorClass::semisimple)) == "semisimple");
}
