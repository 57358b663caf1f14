#include "lcs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lcs/catalog.hpp"
#include "lcs/errors.hpp"
#include "lcs/json_io.hpp"
#include "lcs/parallel.hpp"
#include "lcs/rng.hpp"

namespace lcs {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Matrix random_matrix(Rng& rng, Index n, double lo, double hi) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(lo, hi);
  return a;
}

double spectral_abs_re_max(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i) worst = std::max(worst, std::abs(es.eigenvalues()(i).real()));
  return worst;
}

double spectral_abs_im_max(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i) worst = std::max(worst, std::abs(es.eigenvalues()(i).imag()));
  return worst;
}

CriterionResult criterion_jordan(std::uint64_t seed) {
  CriterionResult r{1, "jordan_reconstruction", false, ""};
  double worst = 0.0;
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::split(seed ^ 0xa11ce5u, static_cast<std::uint64_t>(trial));
    Matrix a = random_matrix(rng, 6, -2.0, 2.0);
    try {
      JordanDecomposition jd = jordan_decompose(a);
      const Matrix &e = jd.elliptic, &h = jd.hyperbolic, &n = jd.nilpotent;
      double res = (e + h + n - a).norm();
      res = std::max(res, (e * h - h * e).norm());
      res = std::max(res, (e * n - n * e).norm());
      res = std::max(res, (h * n - n * h).norm());
      Matrix npow = n;
      for (int k = 1; k < 6; ++k) npow = npow * n;
      res = std::max(res, npow.norm());
      res = std::max(res, spectral_abs_re_max(e));
      res = std::max(res, spectral_abs_im_max(h));
      worst = std::max(worst, res);
      if (res <= 1e-8) ++ok;
    } catch (const NumericalError&) {
      // counts as a failure below
    }
  }
  r.passed = ok == 100;
  r.detail = std::to_string(ok) + "/100 within 1e-8, worst residual " + fmt(worst);
  return r;
}

InternalVerdict eigenvalue_oracle(const Matrix& a) {
  const Index n = a.rows();
  Eigen::EigenSolver<Matrix> es(a);
  const double tol = 1e-7;
  bool any_pos = false, all_neg = true;
  for (Index i = 0; i < n; ++i) {
    double re = es.eigenvalues()(i).real();
    if (re > tol) any_pos = true;
    if (re >= -tol) all_neg = false;
  }
  if (any_pos) return InternalVerdict::unstable;
  if (all_neg) return InternalVerdict::asymptotically_stable;
  // Critical block: each near-imaginary eigenvalue must be semisimple.
  std::vector<Complex> crit;
  std::vector<int> mult;
  for (Index i = 0; i < n; ++i) {
    Complex lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) > tol) continue;
    bool merged = false;
    for (std::size_t k = 0; k < crit.size(); ++k)
      if (std::abs(lam - crit[k]) <= 1e-6) {
        ++mult[k];
        merged = true;
        break;
      }
    if (!merged) {
      crit.push_back(lam);
      mult.push_back(1);
    }
  }
  for (std::size_t k = 0; k < crit.size(); ++k) {
    CMatrix shifted = a.cast<Complex>() - crit[k] * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(shifted);
    Index rank = 0;
    double top = svd.singularValues()(0);
    for (Index i = 0; i < n; ++i)
      if (svd.singularValues()(i) > 1e-9 * std::max(1.0, top)) ++rank;
    if (n - rank != mult[k]) return InternalVerdict::unstable;
  }
  return InternalVerdict::stable;
}

CriterionResult criterion_classical(std::uint64_t seed) {
  CriterionResult r{2, "classical_recovery", false, ""};
  LieAlgebra rn = LieAlgebra::abelian(4, "R^4");
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::split(seed ^ 0xc1a55u, static_cast<std::uint64_t>(trial));
    Matrix a = random_matrix(rng, 4, -2.0, 2.0);
    if (classify_internal(rn, a).verdict == eigenvalue_oracle(a)) ++agree;
  }
  r.passed = agree == 100;
  r.detail = std::to_string(agree) + "/100 agree with the eigenvalue oracle";
  return r;
}

CriterionResult criterion_grading(std::uint64_t) {
  CriterionResult r{3, "grading_residuals", false, ""};
  double worst = 0.0;
  bool all = true;
  for (const DerivationFixture& f : catalog_derivation_fixtures()) {
    GradingReport rep = verify_grading(f.algebra, f.derivation);
    worst = std::max(worst, rep.max_residual);
    if (!rep.graded || rep.max_residual >= 1e-8) all = false;
  }
  r.passed = all;
  r.detail = "8 fixtures, worst residual " + fmt(worst);
  return r;
}

CriterionResult criterion_cocycle(std::uint64_t seed) {
  CriterionResult r{4, "cocycle_property", false, ""};
  bool all = true;
  double worst_matrix = 0.0, worst_chart = 0.0;
  for (const std::string& name : catalog_scenario_names()) {
    ScenarioFixture fixture = catalog_scenario(name);
    CocycleCheckResult c = cocycle_check(fixture.lcs, seed ^ 0xc0c1c1eu, 200);
    if (!c.passed) all = false;
    if (fixture.lcs.realization->has_chart()) worst_chart = std::max(worst_chart, c.max_residual);
    else worst_matrix = std::max(worst_matrix, c.max_residual);
  }
  r.passed = all;
  r.detail = "worst matrix residual " + fmt(worst_matrix) + ", worst chart residual " +
             fmt(worst_chart);
  return r;
}

CriterionResult criterion_manifold(std::uint64_t seed) {
  CriterionResult r{5, "stable_manifold_probes", false, ""};
  ScenarioFixture fixture = catalog_scenario("sl2_adH");
  StableManifoldProbe probe = stable_manifold_probe(fixture.lcs, seed ^ 0x5ab1eu, 50, 50, 0.01);
  r.passed = probe.minus_trials == 50 && probe.contracted == 50 && probe.plus_trials == 50 &&
             probe.escaped == 50;
  r.detail = std::to_string(probe.contracted) + "/50 contracted (worst gauge " +
             fmt(probe.worst_final_gauge) + "), " + std::to_string(probe.escaped) +
             "/50 escaped by t=" + fmt(probe.t_star);
  return r;
}

CriterionResult criterion_critical(std::uint64_t seed) {
  CriterionResult r{6, "critical_boundedness_probes", false, ""};
  ScenarioFixture fixture = catalog_scenario("heis_nilpotent");
  const LCSSpec& spec = fixture.lcs;
  const LieAlgebra& alg = spec.algebra();
  Matrix d = induced_derivation(spec);
  ControlSignal zero = ControlSignal::zero(spec.omega.dim());

  int ok = 0;
  double worst_exponent = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::split(seed ^ 0xd51f7u, static_cast<std::uint64_t>(trial));
    Vector y = rng.uniform_vector(3, -1.0, 1.0);
    y(1) = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(25.0, 60.0);
    if (is_recurrent_algebraic(alg, d, y)) continue;
    BoundednessVerdict v = boundedness_probe(spec, spec.realization->exp(y), zero, 60.0, 0.5);
    if (v.verdict == Boundedness::unbounded && v.growth_exponent >= 0.8 &&
        v.growth_exponent <= 1.2)
      ++ok;
    if (std::abs(v.growth_exponent - 1.0) > std::abs(worst_exponent - 1.0))
      worst_exponent = v.growth_exponent;
  }
  int ok_bounded = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::split(seed ^ 0xb07dedu, static_cast<std::uint64_t>(trial));
    Vector y = rng.uniform_vector(3, -1.0, 1.0);
    y(1) = 0.0;
    if (!is_recurrent_algebraic(alg, d, y)) continue;
    BoundednessVerdict v = boundedness_probe(spec, spec.realization->exp(y), zero, 60.0, 0.5);
    if (v.verdict == Boundedness::bounded) ++ok_bounded;
  }
  r.passed = ok == 20 && ok_bounded == 20;
  r.detail = std::to_string(ok) + "/20 drifting starts unbounded (exponent farthest from 1: " +
             fmt(worst_exponent) + "), " + std::to_string(ok_bounded) + "/20 recurrent bounded";
  return r;
}

CriterionResult criterion_orbit_bound(std::uint64_t seed) {
  CriterionResult r{7, "orbit_radius_bound", false, ""};
  ScenarioFixture fixture = catalog_scenario("se2_bounded");
  const LCSSpec& spec = fixture.lcs;
  TheoremMainBound bound = theorem_main_bound(spec, seed ^ 0x06b17u);

  Matrix d = induced_derivation(spec);
  DynamicalSplitting split = dynamical_split(d);
  Matrix gram_eff = Matrix::Identity(split.minus.dim(), split.minus.dim());
  if (bound.metric == "adapted") {
    AdaptedMetric metric = build_adapted_metric(spec.algebra(), d, spec.g0_torus);
    Matrix t = metric.basis_minus.transpose() * split.minus.basis();
    gram_eff = t.transpose() * metric.gram * t;
  }

  ReachSampleOptions rs;
  rs.n_controls = 1000;
  rs.pieces = 8;
  rs.horizon = 20.0;
  rs.dt_out = 0.25;
  std::vector<double> per_traj(1000, 0.0);
  reach_sample(spec, seed ^ 0x53eeb5u, rs, [&](std::size_t idx, double, const GroupElement& g) {
    Vector mc = split_minus_zero(spec, split, g).minus_coords;
    per_traj[idx] = std::max(per_traj[idx], std::sqrt(mc.dot(gram_eff * mc)));
  });
  double observed = *std::max_element(per_traj.begin(), per_traj.end());
  r.passed = std::isfinite(bound.R) && observed <= bound.R;
  r.detail = "R=" + fmt(bound.R) + " (" + bound.metric + "), observed sup " + fmt(observed) +
             " over 1000 horizon-20 trajectories";
  return r;
}

CriterionResult criterion_escape(std::uint64_t seed) {
  CriterionResult r{8, "escape_evidence", false, ""};
  ScenarioFixture fixture = catalog_scenario("sl2_adH");
  ReachSampleOptions rs;
  rs.n_controls = 32;
  rs.pieces = 4;
  rs.horizon = 10.0;
  rs.dt_out = 0.25;
  rs.vertex_prob = 0.7;
  rs.include_vertex_constants = true;
  ReachSample sample = reach_sample(fixture.lcs, seed ^ 0xe5ca9eu, rs);
  r.passed = sample.max_gauge > 1e3;
  r.detail = "max gauge " + fmt(sample.max_gauge) + " by horizon 10";
  return r;
}

CriterionResult criterion_bibo(std::uint64_t seed) {
  CriterionResult r{9, "bibo_crosscheck", false, ""};
  bool all = true;
  std::string detail;
  for (const HomomorphismFixture& f : catalog_homomorphism_fixtures()) {
    ScenarioFixture fixture = catalog_scenario(f.scenario);
    BiboCrosscheck cross = bibo_simulation_crosscheck(fixture.lcs, f.hom, seed ^ 0xb1b0u, 100, 50.0);
    if (!cross.agrees) all = false;
    if (!detail.empty()) detail += "; ";
    detail += f.hom.name() + ":" + to_string(cross.algebraic) + " (" +
              std::to_string(cross.bounded) + "b/" + std::to_string(cross.unbounded) + "u/" +
              std::to_string(cross.inconclusive) + "i)";
  }
  r.passed = all;
  r.detail = detail;
  return r;
}

CriterionResult criterion_metric(std::uint64_t) {
  CriterionResult r{10, "adapted_metric_residuals", false, ""};
  ScenarioFixture fixture = catalog_scenario("se2_bounded");
  const LCSSpec& spec = fixture.lcs;
  AdaptedMetric metric = build_adapted_metric(spec.algebra(), induced_derivation(spec),
                                              spec.g0_torus);
  r.passed = metric.invariance_residual < 1e-8 && metric.isometry_residual < 1e-8 &&
             metric.doubling_residual < 1e-10;
  r.detail = "invariance " + fmt(metric.invariance_residual) + ", isometry " +
             fmt(metric.isometry_residual) + ", doubling " + fmt(metric.doubling_residual);
  return r;
}

CriterionResult criterion_compact(std::uint64_t) {
  CriterionResult r{11, "compact_type_oracles", false, ""};
  bool all = true;
  std::string detail;

  auto check = [&](const std::string& name, const Matrix& killing_expected,
                   CompactType expected_class, const bool* expected_center_flag) {
    LieAlgebra alg = catalog_algebra(name);
    double kres = (alg.killing_form() - killing_expected).norm();
    CompactTypeReport rep = is_compact_type(alg);
    bool ok = kres <= 1e-12 && rep.classification == expected_class;
    if (expected_center_flag) ok = ok && rep.null_space_equals_center == *expected_center_flag;
    if (expected_class == CompactType::not_compact_type) {
      double w = rep.witness.size() > 0
                     ? rep.witness.dot(alg.killing_form() * rep.witness)
                     : 0.0;
      ok = ok && w > 0.0;
    }
    if (!ok) all = false;
    if (!detail.empty()) detail += "; ";
    detail += name + " killing residual " + fmt(kres);
  };

  Matrix k_so3 = -2.0 * Matrix::Identity(3, 3);
  Matrix k_sl2(3, 3);
  k_sl2 << 8, 0, 0, 0, 0, 4, 0, 4, 0;
  Matrix k_heis = Matrix::Zero(3, 3);
  Matrix k_aff(2, 2);
  k_aff << 0, 0, 0, 1;

  bool yes = true, no = false;
  check("so3", k_so3, CompactType::compact_semisimple_mod_center, &yes);
  check("sl2", k_sl2, CompactType::not_compact_type, nullptr);
  check("heisenberg3", k_heis, CompactType::compact_semisimple_mod_center, &no);
  check("aff_plus", k_aff, CompactType::not_compact_type, nullptr);

  r.passed = all;
  r.detail = detail;
  return r;
}

CriterionResult criterion_determinism(std::uint64_t seed, std::size_t ambient_workers) {
  CriterionResult r{12, "determinism", false, ""};
  detail::set_worker_override(2);
  std::string a = analyze_report(catalog_scenario("se2_bounded"), seed).dump();
  std::string a2 = analyze_report(catalog_scenario("sl2_adH"), seed).dump();
  detail::set_worker_override(1);
  std::string b = analyze_report(catalog_scenario("se2_bounded"), seed).dump();
  std::string b2 = analyze_report(catalog_scenario("sl2_adH"), seed).dump();
  detail::set_worker_override(ambient_workers);
  r.passed = a == b && a2 == b2;
  r.detail = r.passed ? "reports byte-identical across worker counts"
                      : "reports differ across worker counts";
  return r;
}

} // namespace

std::vector<CriterionResult> run_catalog_criteria(std::uint64_t seed, std::size_t workers) {
  if (workers > 0) detail::set_worker_override(workers);
  std::vector<CriterionResult> results;
  results.push_back(criterion_jordan(seed));
  results.push_back(criterion_classical(seed));
  results.push_back(criterion_grading(seed));
  results.push_back(criterion_cocycle(seed));
  results.push_back(criterion_manifold(seed));
  results.push_back(criterion_critical(seed));
  results.push_back(criterion_orbit_bound(seed));
  results.push_back(criterion_escape(seed));
  results.push_back(criterion_bibo(seed));
  results.push_back(criterion_metric(seed));
  results.push_back(criterion_compact(seed));
  results.push_back(criterion_determinism(seed, workers));
  if (workers > 0) detail::set_worker_override(0);
  return results;
}

nlohmann::ordered_json criteria_report(const std::vector<CriterionResult>& results,
                                       std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CriterionResult& r : results) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["name"] = r.name;
    row["passed"] = r.passed;
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
    if (!r.passed) all = false;
  }
  j["criteria"] = std::move(rows);
  j["all_passed"] = all;
  return j;
}

std::vector<CriterionResult> run_scenario_suites(const std::string& scenario_name,
                                                 std::uint64_t seed) {
  ScenarioFixture fixture;
  const auto names = catalog_scenario_names();
  if (std::find(names.begin(), names.end(), scenario_name) != names.end())
    fixture = catalog_scenario(scenario_name);
  else
    fixture = load_scenario_file(scenario_name);
  const LCSSpec& spec = fixture.lcs;
  Matrix d = induced_derivation(spec);

  std::vector<CriterionResult> results;

  GradingReport grading = verify_grading(spec.algebra(), d);
  results.push_back({1, "grading", grading.graded && grading.max_residual < 1e-8,
                     "residual " + fmt(grading.max_residual)});

  CocycleCheckResult cocycle = cocycle_check(spec, seed, 200);
  results.push_back({2, "cocycle", cocycle.passed,
                     "max residual " + fmt(cocycle.max_residual) + " over " +
                         std::to_string(cocycle.draws) + " draws (tol " + fmt(cocycle.tolerance) +
                         ")"});

  DynamicalSplitting split = dynamical_split(d);
  if (std::isfinite(split.lambda_min_abs)) {
    StableManifoldProbe probe = stable_manifold_probe(spec, seed, 20, 20, 0.01);
    bool ok = probe.contracted == probe.minus_trials && probe.escaped == probe.plus_trials;
    results.push_back({3, "stable_manifold", ok,
                       std::to_string(probe.contracted) + "/" + std::to_string(probe.minus_trials) +
                           " contracted, " + std::to_string(probe.escaped) + "/" +
                           std::to_string(probe.plus_trials) + " escaped"});
  } else {
    results.push_back({3, "stable_manifold", true, "not applicable: no hyperbolic part"});
  }

  try {
    TheoremMainBound bound = theorem_main_bound(spec, seed);
    results.push_back({4, "orbit_bound", std::isfinite(bound.R),
                       "R=" + fmt(bound.R) + " (" + bound.metric + ")"});
  } catch (const ValidationError& e) {
    results.push_back({4, "orbit_bound", true, std::string("not applicable: ") + e.what()});
  }

  if (fixture.homomorphisms.empty()) {
    results.push_back({5, "bibo_crosscheck", true, "not applicable: no homomorphisms"});
  } else {
    int id = 5;
    for (const HomomorphismSpec& hom : fixture.homomorphisms) {
      BiboCrosscheck cross = bibo_simulation_crosscheck(spec, hom, seed, 50, 50.0);
      results.push_back({id++, "bibo_crosscheck:" + hom.name(), cross.agrees,
                         std::string(to_string(cross.algebraic)) + " (" +
                             std::to_string(cross.bounded) + "b/" +
                             std::to_string(cross.unbounded) + "u/" +
                             std::to_string(cross.inconclusive) + "i)"});
    }
  }
  return results;
}

} // namespace lcs
