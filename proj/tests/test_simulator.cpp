#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lcs/catalog.hpp"
#include "lcs/errors.hpp"
#include "lcs/parallel.hpp"
#include "lcs/rng.hpp"
#include "lcs/simulator.hpp"

using lcs::ControlSignal;
using lcs::GroupElement;
using lcs::LCSSpec;
using lcs::Matrix;
using lcs::Trajectory;
using lcs::Vector;

namespace {

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

Vector combined(const LCSSpec& spec, const Vector& u) {
  Vector out = Vector::Zero(spec.algebra().dim());
  for (std::size_t i = 0; i < spec.controls.size(); ++i)
    out += u(static_cast<lcs::Index>(i)) * spec.controls[i];
  return out;
}

// Exact affine propagation x' = A x + b over a step h via one block exponential.
Vector affine_step(const Matrix& a, const Vector& b, const Vector& x, double h) {
  const lcs::Index n = x.size();
  Matrix block = Matrix::Zero(n + 1, n + 1);
  block.topLeftCorner(n, n) = h * a;
  block.topRightCorner(n, 1) = h * b;
  Matrix e = exp_series(block);
  return e.topLeftCorner(n, n) * x + e.topRightCorner(n, 1);
}

} // namespace

TEST_CASE("zero control from the identity stays at the identity") {
  for (const char* name : {"se2_bounded", "sl2_adH", "heis_nilpotent"}) {
    LCSSpec spec = lcs::catalog_scenario(name).lcs;
    Trajectory traj = lcs::integrate(spec, spec.realization->identity(),
                                     ControlSignal::zero(spec.omega.dim()), 2.0);
    CHECK(traj.max_gauge() < 1e-10);
  }
}

TEST_CASE("abelian integration matches the variation-of-constants formula") {
  LCSSpec spec = lcs::catalog_scenario("rn4_stable").lcs;
  Matrix d = lcs::induced_derivation(spec);
  lcs::Rng rng(31);
  ControlSignal u = lcs::sample_control(rng, spec.omega, 3.0, 6, 0.5);

  lcs::IntegrateOptions opts;
  opts.dt_out = 0.05;
  Trajectory traj = lcs::integrate(spec, spec.realization->identity(), u, 3.0, opts);

  // March the exact affine solution over the same grid, splitting at the
  // control switches.
  Vector x = Vector::Zero(4);
  double t = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    double t_out = traj.times[k];
    while (t < t_out - 1e-12) {
      double t_stop = t_out;
      for (double bp : u.breakpoints())
        if (bp > t + 1e-12 && bp < t_stop - 1e-12) t_stop = bp;
      x = affine_step(d, combined(spec, u.value_at(t)), x, t_stop - t);
      t = t_stop;
    }
    worst = std::max(worst, (traj.points[k].coords - x).norm());
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("sl2 trajectories match the per-piece product formula") {
  LCSSpec spec = lcs::catalog_scenario("sl2_adH").lcs;
  auto sl2 = std::dynamic_pointer_cast<const lcs::MatrixInnerRealization>(spec.realization);
  REQUIRE(sl2);
  Matrix x0 = sl2->embed(lcs::resolved_inner_vector(spec));

  lcs::Rng rng(32);
  ControlSignal u = lcs::sample_control(rng, spec.omega, 2.0, 4, 0.5);
  lcs::IntegrateOptions opts;
  opts.dt_out = 0.1;
  Trajectory traj = lcs::integrate(spec, spec.realization->identity(), u, 2.0, opts);

  Matrix g = Matrix::Identity(2, 2);
  double t = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    double t_out = traj.times[k];
    while (t < t_out - 1e-12) {
      double t_stop = t_out;
      for (double bp : u.breakpoints())
        if (bp > t + 1e-12 && bp < t_stop - 1e-12) t_stop = bp;
      double h = t_stop - t;
      Matrix u_hat = sl2->embed(combined(spec, u.value_at(t)));
      g = exp_series(h * (x0 + u_hat)) * g * exp_series(-h * x0);
      t = t_stop;
    }
    worst = std::max(worst, (traj.points[k].mat - g).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("drift-only sl2 run reproduces the conjugation flow") {
  LCSSpec spec = lcs::catalog_scenario("sl2_adH").lcs;
  GroupElement ge = spec.realization->exp(Vector::Unit(3, 1));
  lcs::IntegrateOptions opts;
  opts.dt_out = 0.25;
  Trajectory traj = lcs::integrate(spec, ge, ControlSignal::zero(1), 1.0, opts);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double t = traj.times[k];
    CHECK(std::abs(traj.points[k].mat(0, 1) - std::exp(2.0 * t)) < 1e-10);
    CHECK(std::abs(traj.points[k].mat(1, 0)) < 1e-12);
  }
}

TEST_CASE("se2 chart integration matches the affine closed form") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  auto se2 = std::dynamic_pointer_cast<const lcs::SemidirectRealization>(spec.realization);
  REQUIRE(se2);

  Vector u_val(2);
  u_val << 0.7, -0.4; // translation push plus steady rotation
  Vector y = combined(spec, u_val);
  Matrix m(2, 2);
  m << 0.0, -1.0,
       1.0, 0.0;
  Matrix a = -Matrix::Identity(2, 2) + y(2) * m;

  Trajectory traj = lcs::integrate(spec, spec.realization->identity(),
                                   ControlSignal::constant(u_val), 4.0);
  double worst_v = 0.0, worst_k = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double t = traj.times[k];
    Vector v_exact = affine_step(a, y.head(2), Vector::Zero(2), t);
    worst_v = std::max(worst_v, (se2->trans_part(traj.points[k]) - v_exact).norm());
    worst_k = std::max(worst_k,
                       std::abs(se2->factor_part(traj.points[k])(0) - lcs::wrap_angle(y(2) * t)));
  }
  CHECK(worst_v < 1e-8);
  CHECK(worst_k < 1e-8);
}

TEST_CASE("solutions satisfy the semigroup property under shifted controls") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  lcs::Rng rng(33);
  ControlSignal u = lcs::sample_control(rng, spec.omega, 3.0, 6, 0.5);
  const double t1 = 1.3, t2 = 1.2;

  lcs::IntegrateOptions opts;
  opts.dt_out = 0.1;
  Trajectory full = lcs::integrate(spec, spec.realization->identity(), u, t1 + t2, opts);
  Trajectory first = lcs::integrate(spec, spec.realization->identity(), u, t1, opts);
  Trajectory second = lcs::integrate(spec, first.points.back(), u.shifted(t1), t2, opts);
  CHECK(spec.realization->distance(full.points.back(), second.points.back()) < 1e-7);
}

TEST_CASE("cocycle identity holds on random draws") {
  lcs::CocycleCheckResult se2 = lcs::cocycle_check(lcs::catalog_scenario("se2_bounded").lcs, 91, 50);
  CHECK(se2.passed);
  CHECK(se2.draws == 50);
  lcs::CocycleCheckResult sl2 = lcs::cocycle_check(lcs::catalog_scenario("sl2_adH").lcs, 92, 50);
  CHECK(sl2.passed);
  CHECK(sl2.max_residual < sl2.tolerance);
}

TEST_CASE("gauge classification grades the running record") {
  std::vector<double> times, flat, ramp, burst, decay, wave;
  for (int i = 0; i <= 600; ++i) {
    double t = 0.1 * i;
    times.push_back(t);
    flat.push_back(2.0);
    ramp.push_back(30.0 * t);                   // linear escape past the gauge bar
    burst.push_back(std::exp(0.25 * t));        // exponential escape
    decay.push_back(3.0 * std::exp(-0.5 * t));
    wave.push_back(2.0 + std::sin(1.7 * t));    // recurrent, record settles early
  }
  CHECK(lcs::classify_gauge_curve(times, flat).verdict == lcs::Boundedness::bounded);
  CHECK(lcs::classify_gauge_curve(times, decay).verdict == lcs::Boundedness::bounded);
  CHECK(lcs::classify_gauge_curve(times, wave).verdict == lcs::Boundedness::bounded);

  lcs::BoundednessVerdict up = lcs::classify_gauge_curve(times, ramp);
  CHECK(up.verdict == lcs::Boundedness::unbounded);
  CHECK(up.growth_exponent == doctest::Approx(1.0).epsilon(0.05));

  lcs::BoundednessVerdict exp_up = lcs::classify_gauge_curve(times, burst);
  CHECK(exp_up.verdict == lcs::Boundedness::unbounded);
  CHECK(exp_up.exponential_rate == doctest::Approx(0.25).epsilon(0.05));

  // Slow growth that never clears the gauge bar stays inconclusive.
  std::vector<double> slow;
  for (double t : times) slow.push_back(0.1 * t + 0.1);
  CHECK(lcs::classify_gauge_curve(times, slow).verdict == lcs::Boundedness::inconclusive);

  std::vector<double> short_t(7, 0.0), short_g(7, 0.0);
  CHECK_THROWS_AS(lcs::classify_gauge_curve(short_t, short_g), lcs::ValidationError);
}

TEST_CASE("boundedness probe needs a long horizon") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  CHECK_THROWS_AS(lcs::boundedness_probe(spec, spec.realization->identity(),
                                         ControlSignal::zero(2), 10.0),
                  lcs::ValidationError);
  Vector y(3);
  y << 2.0, 0.0, 0.0;
  lcs::BoundednessVerdict v = lcs::boundedness_probe(spec, spec.realization->exp(y),
                                                     ControlSignal::zero(2), 60.0);
  CHECK(v.verdict == lcs::Boundedness::bounded);
  CHECK(v.sup_gauge == doctest::Approx(2.0));
}

TEST_CASE("reach samples are reproducible and worker-count independent") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  lcs::ReachSampleOptions opts;
  opts.n_controls = 16;
  opts.horizon = 1.0;

  lcs::ReachSample a = lcs::reach_sample(spec, 1234, opts);
  lcs::ReachSample b = lcs::reach_sample(spec, 1234, opts);
  REQUIRE(a.endpoints.size() == b.endpoints.size());
  for (std::size_t i = 0; i < a.endpoints.size(); ++i)
    CHECK((a.endpoints[i].coords - b.endpoints[i].coords).norm() == 0.0);

  lcs::detail::set_worker_override(2);
  lcs::ReachSample c = lcs::reach_sample(spec, 1234, opts);
  lcs::detail::set_worker_override(0);
  for (std::size_t i = 0; i < a.endpoints.size(); ++i)
    CHECK((a.endpoints[i].coords - c.endpoints[i].coords).norm() == 0.0);

  lcs::ReachSample other = lcs::reach_sample(spec, 1235, opts);
  bool all_equal = true;
  for (std::size_t i = 0; i < a.endpoints.size(); ++i)
    if ((a.endpoints[i].coords - other.endpoints[i].coords).norm() > 0.0) all_equal = false;
  CHECK(!all_equal);
}

TEST_CASE("vertex constants are prepended in mask order") {
  LCSSpec spec = lcs::catalog_scenario("se2_push").lcs; // one control direction
  lcs::ReachSampleOptions opts;
  opts.n_controls = 3;
  opts.include_vertex_constants = true;
  opts.horizon = 1.0;
  lcs::ReachSample sample = lcs::reach_sample(spec, 77, opts);
  // Two vertices, the zero control, then the random draws.
  CHECK(sample.endpoints.size() == 6);
  // The zero-control trajectory never leaves the identity.
  CHECK(sample.trajectory_max_gauge[2] < 1e-12);
  CHECK(sample.max_gauge > 0.0);

  const auto& first = sample.controls_used[0];
  CHECK(std::abs(first.value_at(0.0)(0)) == doctest::Approx(1.0));
}

TEST_CASE("reach extent scales with the control box") {
  lcs::ReachSampleOptions opts;
  opts.n_controls = 0;
  opts.include_vertex_constants = true;
  opts.horizon = 20.0;
  opts.dt_out = 0.1;

  LCSSpec narrow = lcs::catalog_scenario("se2_push").lcs;
  lcs::ReachSample small = lcs::reach_sample(narrow, 7, opts);

  LCSSpec wide = narrow;
  wide.omega.radii = 2.0 * Vector::Ones(1);
  lcs::ReachSample big = lcs::reach_sample(wide, 7, opts);

  CHECK(big.max_gauge == doctest::Approx(2.0 * small.max_gauge).epsilon(1e-6));
}

TEST_CASE("orbit radius bound is finite exactly under its preconditions") {
  lcs::TheoremMainOptions opts;
  opts.k_samples = 60;
  lcs::TheoremMainBound bound = lcs::theorem_main_bound(lcs::catalog_scenario("se2_bounded").lcs,
                                                        42, opts);
  CHECK(bound.R > 0.0);
  CHECK(std::isfinite(bound.R));
  CHECK(bound.c <= 1.0);
  CHECK(bound.lambda == doctest::Approx(0.999));
  CHECK(bound.diam_K > 0.0);
  CHECK(bound.metric == "adapted");
  CHECK(bound.R >= bound.diam_K / (bound.c * (1.0 - std::exp(-bound.lambda))) - 1e-9);

  // Expanding part present: no bound.
  CHECK_THROWS_AS(lcs::theorem_main_bound(lcs::catalog_scenario("sl2_adH").lcs, 42, opts),
                  lcs::ValidationError);
  // Critical part neither trivial nor declared compact.
  CHECK_THROWS_AS(lcs::theorem_main_bound(lcs::catalog_scenario("aff_stable").lcs, 42, opts),
                  lcs::ValidationError);

  // Zero drift leaves no contracting direction to anchor the estimate.
  LCSSpec no_drift = lcs::catalog_scenario("se2_bounded").lcs;
  no_drift.drift.derivation = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(lcs::theorem_main_bound(no_drift, 42, opts), lcs::ValidationError);
}

TEST_CASE("control set estimate needs the rank condition") {
  lcs::ControlSetOptions opts;
  opts.n_controls = 40;
  opts.probe_points = 8;
  lcs::ControlSetEstimate est =
      lcs::estimate_control_set(lcs::catalog_scenario("se2_bounded").lcs, 11, opts);
  CHECK(est.is_compact_candidate);
  CHECK(est.identity_in_closure);
  CHECK(est.hull_gauge > 0.0);

  CHECK_THROWS_AS(lcs::estimate_control_set(lcs::catalog_scenario("se2_push").lcs, 11, opts),
                  lcs::ValidationError);
}

TEST_CASE("stable manifold probe separates contracting and expanding starts") {
  lcs::StableManifoldProbe probe =
      lcs::stable_manifold_probe(lcs::catalog_scenario("sl2_adH").lcs, 13, 10, 10, 0.01);
  CHECK(probe.minus_trials == 10);
  CHECK(probe.contracted == 10);
  CHECK(probe.worst_final_gauge < 1e-6);
  CHECK(probe.plus_trials == 10);
  CHECK(probe.escaped == 10);
  CHECK(probe.t_star == doctest::Approx(40.0 / 1.998)); // 40 / lambda
}

TEST_CASE("csv export carries time, gauge, and payload columns") {
  LCSSpec spec = lcs::catalog_scenario("se2_bounded").lcs;
  Trajectory traj = lcs::integrate(spec, spec.realization->identity(),
                                   ControlSignal::zero(2), 1.0);
  std::string csv = lcs::trajectory_csv(spec, traj);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,gauge,x0,x1,x2");
  std::size_t rows = 0;
  std::string row;
  while (std::getline(lines, row))
    if (!row.empty()) ++rows;
  CHECK(rows == traj.times.size());
}
