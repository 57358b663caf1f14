#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcs/catalog.hpp"
#include "lcs/control.hpp"
#include "lcs/errors.hpp"
#include "lcs/group.hpp"
#include "lcs/rng.hpp"
#include "lcs/system.hpp"

using lcs::ControlSignal;
using lcs::GroupElement;
using lcs::GroupMetadata;
using lcs::LCSSpec;
using lcs::Matrix;
using lcs::OmegaBox;
using lcs::Vector;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scaled Taylor series, independent of the production matrix exponential.
Matrix exp_series(const Matrix& a) {
  Matrix scaled = a;
  int squarings = 0;
  while (scaled.norm() > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = result;
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

Matrix rot2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta),
       std::sin(theta),  std::cos(theta);
  return r;
}

LCSSpec simple_spec(const std::string& group_name, Matrix d, std::vector<Vector> controls) {
  LCSSpec spec;
  spec.name = "test_" + group_name;
  spec.realization = lcs::catalog_group(group_name);
  spec.drift.kind = lcs::DriftKind::derivation;
  spec.drift.derivation = std::move(d);
  spec.controls = std::move(controls);
  spec.omega.radii = Vector::Ones(static_cast<lcs::Index>(spec.controls.size()));
  spec.validate();
  return spec;
}

} // namespace

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(lcs::wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(lcs::wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(lcs::wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(lcs::wrap_angle(0.3) == doctest::Approx(0.3));
  CHECK(lcs::wrap_angle(2.0 * kPi + 0.3) == doctest::Approx(0.3));
  CHECK(lcs::wrap_angle(-0.4 - 4.0 * kPi) == doctest::Approx(-0.4));
}

TEST_CASE("sl2 realization: exp, multiply, inverse against the 2x2 picture") {
  auto group = lcs::catalog_group("sl2");
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(group);
  REQUIRE(sl2);

  GroupElement eh = sl2->exp(Vector::Unit(3, 0));
  CHECK(std::abs(eh.mat(0, 0) - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(eh.mat(1, 1) - std::exp(-1.0)) < 1e-13);
  CHECK(std::abs(eh.mat(0, 1)) < 1e-14);

  lcs::Rng rng(21);
  Vector x = 0.4 * rng.unit_vector(3);
  Vector y = 0.4 * rng.unit_vector(3);
  GroupElement gx = sl2->exp(x);
  GroupElement gy = sl2->exp(y);
  CHECK((sl2->multiply(gx, gy).mat - gx.mat * gy.mat).norm() < 1e-13);
  CHECK((sl2->multiply(gx, sl2->inverse(gx)).mat - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((sl2->log(gx) - x).norm() < 1e-11);
  CHECK(sl2->gauge(gx) ==
        doctest::Approx((gx.mat - Matrix::Identity(2, 2)).norm()).epsilon(1e-12));
  CHECK(sl2->gauge(sl2->identity()) == 0.0);
  CHECK(sl2->distance(gx, gx) < 1e-12);
}

TEST_CASE("sl2 embed and unembed are inverse on the traceless image") {
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(lcs::catalog_group("sl2"));
  REQUIRE(sl2);
  Vector y(3);
  y << 0.3, -1.2, 0.8;
  Matrix m = sl2->embed(y);
  CHECK(std::abs(m.trace()) < 1e-14);
  CHECK((sl2->unembed(m) - y).norm() < 1e-13);
  CHECK_THROWS_AS(sl2->unembed(Matrix::Identity(2, 2)), lcs::ChartError);
}

TEST_CASE("sl2 chart failure on the negative real axis") {
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(lcs::catalog_group("sl2"));
  REQUIRE(sl2);
  GroupElement minus_id = sl2->from_matrix(-Matrix::Identity(2, 2));
  CHECK_THROWS_AS(sl2->log(minus_id), lcs::ChartError);
}

TEST_CASE("Ad on sl2 matches the exponential of ad") {
  auto group = lcs::catalog_group("sl2");
  const lcs::LieAlgebra& alg = group->algebra();
  lcs::Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = 0.5 * rng.unit_vector(3);
    Matrix expected = exp_series(alg.ad(x));
    CHECK((group->Ad(group->exp(x)) - expected).norm() < 1e-11);
  }
}

TEST_CASE("Ad is multiplicative and conjugate matches it") {
  auto group = lcs::catalog_group("sl2");
  lcs::Rng rng(23);
  Vector a = 0.4 * rng.unit_vector(3);
  Vector b = 0.4 * rng.unit_vector(3);
  GroupElement ga = group->exp(a);
  GroupElement gb = group->exp(b);
  CHECK((group->Ad(group->multiply(ga, gb)) - group->Ad(ga) * group->Ad(gb)).norm() < 1e-11);

  // conjugate(g, h) = g h g^{-1}; on the algebra this is Ad(g).
  Vector small = 1e-3 * rng.unit_vector(3);
  GroupElement conj = group->conjugate(ga, group->exp(small));
  CHECK((group->log(conj) - group->Ad(ga) * small).norm() < 1e-8);
}

TEST_CASE("inner vectors are recovered from inner derivations") {
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(lcs::catalog_group("sl2"));
  REQUIRE(sl2);
  const lcs::LieAlgebra& alg = sl2->algebra();
  Matrix ad_h = alg.ad(Vector::Unit(3, 0));
  Vector recovered = sl2->inner_vector_for(ad_h);
  CHECK((recovered - Vector::Unit(3, 0)).norm() < 1e-10);
  CHECK_THROWS_AS(sl2->inner_vector_for(Matrix::Identity(3, 3)), lcs::ValidationError);
}

TEST_CASE("heisenberg multiplication follows the closed product formula") {
  auto heis = lcs::catalog_group("heisenberg3");
  GroupElement a = heis->exp(Vector::Unit(3, 0));
  GroupElement b = heis->exp(Vector::Unit(3, 1));
  Vector expected(3);
  expected << 1.0, 1.0, 0.5;
  CHECK((heis->multiply(a, b).coords - expected).norm() < 1e-14);

  // Swapping the order flips the sign of the commutator term.
  expected(2) = -0.5;
  CHECK((heis->multiply(b, a).coords - expected).norm() < 1e-14);

  CHECK((heis->inverse(a).coords + a.coords).norm() < 1e-14);
  CHECK(heis->exp(Vector::Zero(3)).coords.norm() == 0.0);
}

TEST_CASE("heisenberg multiplication is associative") {
  auto heis = lcs::catalog_group("heisenberg3");
  lcs::Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    GroupElement a = heis->exp(rng.uniform_vector(3, -2.0, 2.0));
    GroupElement b = heis->exp(rng.uniform_vector(3, -2.0, 2.0));
    GroupElement c = heis->exp(rng.uniform_vector(3, -2.0, 2.0));
    GroupElement left = heis->multiply(heis->multiply(a, b), c);
    GroupElement right = heis->multiply(a, heis->multiply(b, c));
    CHECK((left.coords - right.coords).norm() < 1e-12);
  }
}

TEST_CASE("heisenberg Ad is unipotent") {
  auto heis = lcs::catalog_group("heisenberg3");
  Matrix ad1 = heis->algebra().ad(Vector::Unit(3, 0));
  Matrix expected = Matrix::Identity(3, 3) + ad1; // ad^2 vanishes
  CHECK((heis->Ad(heis->exp(Vector::Unit(3, 0))) - expected).norm() < 1e-13);
}

TEST_CASE("dexpinv matches the exact product expansion at class two") {
  auto heis =
      std::dynamic_pointer_cast<const lcs::ExpCoordinatesRealization>(lcs::catalog_group("heisenberg3"));
  REQUIRE(heis);
  const lcs::LieAlgebra& alg = heis->algebra();
  lcs::Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    Vector y = rng.uniform_vector(3, -1.5, 1.5);
    Vector u = rng.uniform_vector(3, -1.5, 1.5);
    double s = rng.uniform(-0.5, 0.5);
    // exp(s u) exp(y) = exp(y + s dexpinv(y, u)) holds exactly at class two.
    Vector product = heis->multiply(heis->exp(s * u), heis->exp(y)).coords;
    Vector predicted = y + s * heis->dexpinv(y, u);
    CHECK((product - predicted).norm() < 1e-12);
  }
  Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1);
  Vector frozen = heis->dexpinv(e1, e2);
  CHECK(frozen(1) == doctest::Approx(1.0));
  CHECK(frozen(2) == doctest::Approx(-0.5));
  (void)alg;
}

TEST_CASE("se2 multiplication matches the rotation-and-shift formula") {
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(lcs::catalog_group("se2"));
  REQUIRE(se2);
  lcs::Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    Vector v1 = rng.uniform_vector(2, -2.0, 2.0);
    Vector v2 = rng.uniform_vector(2, -2.0, 2.0);
    double t1 = rng.uniform(-3.0, 3.0), t2 = rng.uniform(-3.0, 3.0);
    GroupElement g1 = se2->from_parts(v1, Vector::Constant(1, t1));
    GroupElement g2 = se2->from_parts(v2, Vector::Constant(1, t2));
    GroupElement prod = se2->multiply(g1, g2);
    CHECK((se2->trans_part(prod) - (v1 + rot2(t1) * v2)).norm() < 1e-13);
    CHECK(se2->factor_part(prod)(0) == doctest::Approx(lcs::wrap_angle(t1 + t2)));
    GroupElement round = se2->multiply(prod, se2->inverse(g2));
    CHECK(se2->distance(round, g1) < 1e-12);
  }
}

TEST_CASE("se2 exponential agrees with quadrature of the rotation action") {
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(lcs::catalog_group("se2"));
  REQUIRE(se2);
  lcs::Rng rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    Vector y(3);
    y << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0);
    GroupElement g = se2->exp(y);

    // Simpson quadrature of v = int_0^1 R(s theta) y_v ds.
    const int steps = 1000;
    Vector acc = Vector::Zero(2);
    Vector yv = y.head(2);
    for (int i = 0; i < steps; ++i) {
      double a = static_cast<double>(i) / steps;
      double b = static_cast<double>(i + 1) / steps;
      acc += (b - a) / 6.0 *
             (rot2(a * y(2)) * yv + 4.0 * (rot2(0.5 * (a + b) * y(2)) * yv) + rot2(b * y(2)) * yv);
    }
    CHECK((se2->trans_part(g) - acc).norm() < 1e-10);
    CHECK(se2->factor_part(g)(0) == doctest::Approx(lcs::wrap_angle(y(2))));
  }
}

TEST_CASE("se2 log inverts exp on the principal branch") {
  auto se2 = lcs::catalog_group("se2");
  lcs::Rng rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    Vector y(3);
    y << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0);
    CHECK((se2->log(se2->exp(y)) - y).norm() < 1e-11);
  }
}

TEST_CASE("se2 gauge is the Euclidean norm of translation plus wrapped angle") {
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(lcs::catalog_group("se2"));
  REQUIRE(se2);
  Vector v(2);
  v << 3.0, 4.0;
  GroupElement g = se2->from_parts(v, Vector::Constant(1, 1.0));
  CHECK(se2->gauge(g) == doctest::Approx(std::sqrt(26.0)));
  GroupElement wrapped = se2->from_parts(Vector::Zero(2), Vector::Constant(1, 2.0 * kPi + 0.25));
  CHECK(se2->gauge(wrapped) == doctest::Approx(0.25));
}

TEST_CASE("aff_plus automorphism flow is exact on the mixed derivation") {
  auto aff = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(lcs::catalog_group("aff_plus"));
  REQUIRE(aff);
  Matrix d(2, 2);
  d << -1.0, 1.0,
        0.0, 0.0;
  REQUIRE(aff->algebra().is_derivation(d));

  // Closed form of exp(tD) through the global chart.
  double t = 0.8, v = 0.3, k = 0.7;
  GroupElement g = aff->from_parts(Vector::Constant(1, v), Vector::Constant(1, k));
  GroupElement moved = aff->drift_automorphism(d, t, g);
  // log (v,k) = (v/phi1(k), k); exp(tD) shears y_v by (1 - e^{-t}) y_k;
  // exp scales the head back by phi1(k).
  double phi1_k = (std::exp(k) - 1.0) / k;
  double expected_v = std::exp(-t) * v + phi1_k * (1.0 - std::exp(-t)) * k;
  CHECK(aff->trans_part(moved)(0) == doctest::Approx(expected_v).epsilon(1e-10));
  CHECK(aff->factor_part(moved)(0) == doctest::Approx(k));

  // Automorphism and one-parameter group laws.
  lcs::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    GroupElement a = aff->from_parts(rng.uniform_vector(1, -1.0, 1.0),
                                     rng.uniform_vector(1, -1.0, 1.0));
    GroupElement b = aff->from_parts(rng.uniform_vector(1, -1.0, 1.0),
                                     rng.uniform_vector(1, -1.0, 1.0));
    double t1 = rng.uniform(0.0, 2.0), t2 = rng.uniform(0.0, 2.0);
    GroupElement lhs = aff->drift_automorphism(d, t1, aff->multiply(a, b));
    GroupElement rhs =
        aff->multiply(aff->drift_automorphism(d, t1, a), aff->drift_automorphism(d, t1, b));
    CHECK(aff->distance(lhs, rhs) < 1e-10);
    GroupElement direct = aff->drift_automorphism(d, t1 + t2, a);
    GroupElement chained = aff->drift_automorphism(d, t1, aff->drift_automorphism(d, t2, a));
    CHECK(aff->distance(direct, chained) < 1e-10);
  }

  // Differential compatibility: log(phi_t(exp Y)) = e^{tD} Y on the chart.
  Vector y(2);
  y << 0.6, -0.9;
  Vector pushed = aff->log(aff->drift_automorphism(d, t, aff->exp(y)));
  CHECK((pushed - exp_series(t * d) * y).norm() < 1e-10);
}

TEST_CASE("semidirect derivations must keep factor coordinates still") {
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(lcs::catalog_group("se2"));
  REQUIRE(se2);
  Matrix d_trans, d_mixed;

  Matrix bad_bottom = Matrix::Zero(3, 3);
  bad_bottom(2, 0) = 1.0;
  CHECK_THROWS_AS(se2->split_derivation(bad_bottom, d_trans, d_mixed), lcs::ValidationError);

  // Feeding the angle into translations is a derivation of the algebra but has
  // no single-valued counterpart on the group, so the realization refuses it.
  Matrix angle_mix = Matrix::Zero(3, 3);
  angle_mix(0, 2) = 1.0;
  REQUIRE(se2->algebra().is_derivation(angle_mix));
  CHECK_THROWS_AS(se2->split_derivation(angle_mix, d_trans, d_mixed), lcs::ValidationError);

  Matrix good = Matrix::Zero(3, 3);
  good(0, 0) = -1.0;
  good(1, 1) = -1.0;
  se2->split_derivation(good, d_trans, d_mixed);
  CHECK((d_trans + Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(d_mixed.norm() == 0.0);
}

TEST_CASE("omega box membership and vertices") {
  OmegaBox box;
  box.radii = Vector::Ones(2);
  box.radii(1) = 2.0;
  box.validate();
  Vector inside(2);
  inside << 0.5, -1.5;
  CHECK(box.contains(inside));
  Vector outside(2);
  outside << 1.5, 0.0;
  CHECK(!box.contains(outside));
  Vector v = box.vertex(0b01u);
  CHECK(std::abs(std::abs(v(0)) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(v(1)) - 2.0) < 1e-15);

  OmegaBox degenerate;
  degenerate.radii = Vector::Zero(1);
  CHECK_THROWS_AS(degenerate.validate(), lcs::ValidationError);
}

TEST_CASE("control signals are right-continuous step functions") {
  Vector a = Vector::Constant(1, 1.0);
  Vector b = Vector::Constant(1, -1.0);
  ControlSignal u = ControlSignal::piecewise({0.0, 1.0}, {a, b});
  CHECK(u.value_at(0.0)(0) == 1.0);
  CHECK(u.value_at(0.999)(0) == 1.0);
  CHECK(u.value_at(1.0)(0) == -1.0);
  CHECK(u.value_at(50.0)(0) == -1.0);

  ControlSignal shifted = u.shifted(0.5);
  CHECK(shifted.value_at(0.25)(0) == 1.0);
  CHECK(shifted.value_at(0.5)(0) == -1.0);

  ControlSignal tail = ControlSignal::constant(Vector::Constant(1, 7.0));
  ControlSignal joined = u.concatenated(0.25, tail);
  CHECK(joined.value_at(0.1)(0) == 1.0);
  CHECK(joined.value_at(0.3)(0) == 7.0);

  CHECK_THROWS_AS(ControlSignal::piecewise({0.5}, {a}), lcs::ValidationError);
  CHECK_THROWS_AS(ControlSignal::piecewise({0.0, 0.0}, {a, b}), lcs::ValidationError);
}

TEST_CASE("sampled controls stay inside the box and reproduce per seed") {
  OmegaBox box;
  box.radii = Vector::Ones(2);
  lcs::Rng r1(5), r2(5);
  ControlSignal u1 = lcs::sample_control(r1, box, 10.0, 8, 0.5);
  ControlSignal u2 = lcs::sample_control(r2, box, 10.0, 8, 0.5);
  REQUIRE(u1.num_pieces() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(box.contains(u1.values()[i]));
    CHECK((u1.values()[i] - u2.values()[i]).norm() == 0.0);
  }
}

TEST_CASE("spec validation catches shape and admissibility errors") {
  LCSSpec spec;
  spec.name = "broken";
  spec.realization = lcs::catalog_group("heisenberg3");
  spec.drift.kind = lcs::DriftKind::derivation;
  spec.drift.derivation = Matrix::Zero(3, 3);
  spec.drift.derivation(0, 0) = 1.0; // not a derivation of heisenberg3
  spec.controls = {Vector::Unit(3, 0)};
  spec.omega.radii = Vector::Ones(1);
  CHECK_THROWS_AS(spec.validate(), lcs::ValidationError);

  spec.drift.derivation = Matrix::Zero(3, 3);
  spec.omega.radii = Vector::Ones(2); // one control, two radii
  CHECK_THROWS_AS(spec.validate(), lcs::ValidationError);
}

TEST_CASE("induced derivation of the inner sl2 drift is ad(H)") {
  lcs::ScenarioFixture fixture = lcs::catalog_scenario("sl2_adH");
  Matrix d = lcs::induced_derivation(fixture.lcs);
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 1) = 2.0;
  expected(2, 2) = -2.0;
  CHECK((d - expected).norm() < 1e-13);
  Vector x0 = lcs::resolved_inner_vector(fixture.lcs);
  CHECK((x0 - Vector::Unit(3, 0)).norm() < 1e-10);
}

TEST_CASE("derivation drifts resolve to inner vectors only when inner") {
  lcs::ScenarioFixture se2 = lcs::catalog_scenario("se2_bounded");
  CHECK_THROWS_AS(lcs::resolved_inner_vector(se2.lcs), lcs::ValidationError);
}

TEST_CASE("rank condition across the catalog") {
  lcs::LarcResult full = lcs::larc_check(lcs::catalog_scenario("se2_bounded").lcs);
  CHECK(full.satisfied);
  CHECK(full.achieved.is_full());

  lcs::LarcResult starved = lcs::larc_check(lcs::catalog_scenario("se2_push").lcs);
  CHECK(!starved.satisfied);
  CHECK(starved.achieved.dim() == 1);

  CHECK(lcs::larc_check(lcs::catalog_scenario("sl2_adH").lcs).satisfied);

  // Adding the rotation direction to the starved system restores the rank.
  LCSSpec repaired = lcs::catalog_scenario("se2_push").lcs;
  repaired.controls.push_back(Vector::Unit(3, 2));
  repaired.omega.radii = Vector::Ones(2);
  repaired.validate();
  CHECK(lcs::larc_check(repaired).satisfied);
}

TEST_CASE("drift flow on se2 contracts translations and fixes rotations") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(spec.realization);
  REQUIRE(se2);
  Vector v(2);
  v << 2.0, -1.0;
  GroupElement g = se2->from_parts(v, Vector::Constant(1, 0.9));
  GroupElement moved = lcs::drift_flow(spec, 1.5, g);
  CHECK((se2->trans_part(moved) - std::exp(-1.5) * v).norm() < 1e-12);
  CHECK(se2->factor_part(moved)(0) == doctest::Approx(0.9));
}

TEST_CASE("drift flow on sl2 is conjugation by the exponential arc") {
  LCSSpec spec = lcs::catalog_scenario("sl2_adH").lcs;
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(spec.realization);
  REQUIRE(sl2);
  GroupElement ge = sl2->exp(Vector::Unit(3, 1)); // exp(E), upper unipotent
  double t = 0.6;
  GroupElement moved = lcs::drift_flow(spec, t, ge);
  CHECK(std::abs(moved.mat(0, 1) - std::exp(2.0 * t)) < 1e-12);
  CHECK(std::abs(moved.mat(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(moved.mat(1, 0)) < 1e-13);
}

TEST_CASE("subgroup membership through the chart logarithm") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  Vector y_minus(3);
  y_minus << 0.3, 0.2, 0.0;
  lcs::SubgroupMembership in_minus =
      lcs::dynamical_subgroup_coords(spec, spec.realization->exp(y_minus));
  CHECK(in_minus.in_minus);
  CHECK(!in_minus.in_zero);
  CHECK(!in_minus.in_plus);

  Vector y_zero(3);
  y_zero << 0.0, 0.0, 0.4;
  lcs::SubgroupMembership in_zero =
      lcs::dynamical_subgroup_coords(spec, spec.realization->exp(y_zero));
  CHECK(in_zero.in_zero);
  CHECK(!in_zero.in_minus);

  Vector y_mixed(3);
  y_mixed << 0.3, 0.0, 0.4;
  lcs::SubgroupMembership neither =
      lcs::dynamical_subgroup_coords(spec, spec.realization->exp(y_mixed));
  CHECK(!neither.in_minus);
  CHECK(!neither.in_zero);
  CHECK((neither.log_coords - y_mixed).norm() < 1e-10);
}

TEST_CASE("decomposability routes depend on the certificate available") {
  using lcs::DecomposabilityRoute;
  lcs::DecomposabilityReport se2 =
      lcs::check_decomposability(lcs::catalog_scenario("se2_bounded").lcs);
  CHECK(se2.group_decomposes);
  CHECK(se2.route == DecomposabilityRoute::global_coordinates);

  lcs::DecomposabilityReport sl2 = lcs::check_decomposability(lcs::catalog_scenario("sl2_adH").lcs);
  CHECK(sl2.group_decomposes);
  CHECK(sl2.route == DecomposabilityRoute::declared_only);
  CHECK(sl2.algebra_splits);

  lcs::DecomposabilityReport so3 =
      lcs::check_decomposability(lcs::catalog_scenario("so3_rotation").lcs);
  CHECK(!so3.group_decomposes);
  CHECK(so3.route == DecomposabilityRoute::none);
}

TEST_CASE("a chartless solvable realization certifies by computed solvability") {
  // aff_plus as 2x2 matrices: e1 upper-triangular shift, r the diagonal scale.
  Matrix e1(2, 2), r(2, 2);
  e1 << 0.0, 1.0,
        0.0, 0.0;
  r << 1.0, 0.0,
       0.0, 0.0;
  GroupMetadata meta;
  auto group = std::make_shared<lcs::MatrixInnerRealization>(
      "aff_matrix", lcs::catalog_algebra("aff_plus"), meta, std::vector<Matrix>{e1, r});
  LCSSpec spec;
  spec.name = "aff_matrix_test";
  spec.realization = group;
  spec.drift.kind = lcs::DriftKind::derivation;
  spec.drift.derivation = Matrix::Zero(2, 2);
  spec.drift.derivation(0, 0) = -1.0;
  spec.controls = {Vector::Unit(2, 0)};
  spec.omega.radii = Vector::Ones(1);
  spec.validate();
  lcs::DecomposabilityReport report = lcs::check_decomposability(spec);
  CHECK(report.group_decomposes);
  CHECK(report.route == lcs::DecomposabilityRoute::solvable_computed);
}

TEST_CASE("minus-zero factorization on se2") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(spec.realization);
  REQUIRE(se2);
  lcs::DynamicalSplitting split = lcs::dynamical_split(lcs::induced_derivation(spec));
  Vector v(2);
  v << 0.5, -0.2;
  GroupElement g = se2->from_parts(v, Vector::Constant(1, 1.1));
  lcs::MinusZeroFactors parts = lcs::split_minus_zero(spec, split, g);
  CHECK(se2->distance(se2->multiply(parts.minus, parts.zero), g) < 1e-10);
  CHECK((se2->trans_part(parts.minus) - v).norm() < 1e-10);
  CHECK(se2->factor_part(parts.minus)(0) == doctest::Approx(0.0));
  CHECK(se2->trans_part(parts.zero).norm() < 1e-10);
  CHECK(parts.minus_coords.norm() == doctest::Approx(v.norm()));
}

TEST_CASE("minus-zero factorization on a nilpotent chart") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = -1.0;
  d(2, 2) = -1.0; // minus = span(e1, e3), zero = span(e2)
  LCSSpec spec = simple_spec("heisenberg3", d, {Vector::Unit(3, 0)});
  lcs::DynamicalSplitting split = lcs::dynamical_split(d);
  REQUIRE(split.minus.dim() == 2);

  Vector y(3);
  y << 0.4, 0.7, -0.3;
  GroupElement g = spec.realization->exp(y);
  lcs::MinusZeroFactors parts = lcs::split_minus_zero(spec, split, g);
  CHECK(spec.realization->distance(
            spec.realization->multiply(parts.minus, parts.zero), g) < 1e-10);
  CHECK(split.minus.distance(spec.realization->log(parts.minus)) < 1e-10);
  CHECK(split.zero.distance(spec.realization->log(parts.zero)) < 1e-10);
}

TEST_CASE("minus-zero factorization requires a trivial expanding part") {
  LCSSpec spec = lcs::catalog_scenario("heis_hyperbolic").lcs;
  lcs::DynamicalSplitting split = lcs::dynamical_split(lcs::induced_derivation(spec));
  CHECK_THROWS_AS(lcs::split_minus_zero(spec, split, spec.realization->identity()),
                  lcs::ValidationError);
}
