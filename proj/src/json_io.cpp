#include "lcs/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lcs/errors.hpp"

namespace lcs {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix json must be a nonempty array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols)
      throw ValidationError("matrix json rows have inconsistent lengths");
    for (Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("vector json must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

LieAlgebra algebra_from_json(const Json& j) {
  std::string name = j.value("name", std::string("algebra"));
  int dim = j.at("dim").get<int>();
  std::vector<std::string> basis;
  if (j.contains("basis")) basis = j.at("basis").get<std::vector<std::string>>();
  else
    for (int i = 1; i <= dim; ++i) basis.push_back("e" + std::to_string(i));
  if (static_cast<int>(basis.size()) != dim)
    throw ValidationError("algebra json: basis length does not match dim");
  std::vector<std::tuple<int, int, int, double>> entries;
  if (j.contains("structure_constants"))
    for (const Json& row : j.at("structure_constants")) {
      if (row.size() != 4) throw ValidationError("structure constant rows are [i, j, k, value]");
      entries.emplace_back(row.at(0).get<int>(), row.at(1).get<int>(), row.at(2).get<int>(),
                           row.at(3).get<double>());
    }
  return LieAlgebra::from_sparse(std::move(name), std::move(basis), entries);
}

Json algebra_to_json(const LieAlgebra& alg) {
  Json j;
  j["name"] = alg.name();
  j["dim"] = alg.dim();
  j["basis"] = alg.basis_names();
  Json entries = Json::array();
  for (Index i = 0; i < alg.dim(); ++i)
    for (Index jj = i + 1; jj < alg.dim(); ++jj) {
      Vector br = alg.bracket(Vector::Unit(alg.dim(), i), Vector::Unit(alg.dim(), jj));
      for (Index k = 0; k < alg.dim(); ++k)
        if (br(k) != 0.0) entries.push_back({i + 1, jj + 1, k + 1, br(k)});
    }
  j["structure_constants"] = std::move(entries);
  return j;
}

namespace {

std::shared_ptr<const GroupRealization> group_from_json(const Json& j) {
  if (j.is_string()) return catalog_group(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("scenario group must be a catalog name or an object");
  LieAlgebra alg = algebra_from_json(j.at("algebra"));
  std::string kind = j.value("realization", std::string("exp_coordinates"));
  if (kind != "exp_coordinates")
    throw ValidationError("inline groups support only exp_coordinates realizations");
  GroupMetadata meta;
  if (j.contains("metadata")) {
    const Json& m = j.at("metadata");
    meta.is_solvable = m.value("is_solvable", false);
    meta.is_nilpotent = m.value("is_nilpotent", false);
    meta.g0_compact_declared = m.value("g0_compact_declared", false);
    meta.toral_component_trivial = m.value("toral_component_trivial", true);
    meta.decomposable_declared = m.value("decomposable_declared", false);
  } else {
    meta.is_solvable = alg.is_solvable();
    meta.is_nilpotent = alg.is_nilpotent();
  }
  std::string name = j.value("name", alg.name());
  return std::make_shared<ExpCoordinatesRealization>(name, std::move(alg), meta);
}

Json group_to_json(const GroupRealization& group) {
  if (catalog_has_group(group.name())) return group.name();
  if (group.kind() != RealizationKind::exp_coordinates)
    throw ValidationError("only catalog groups and exp_coordinates realizations serialize");
  Json j;
  j["name"] = group.name();
  j["algebra"] = algebra_to_json(group.algebra());
  j["realization"] = "exp_coordinates";
  Json meta;
  meta["is_solvable"] = group.metadata().is_solvable;
  meta["is_nilpotent"] = group.metadata().is_nilpotent;
  meta["g0_compact_declared"] = group.metadata().g0_compact_declared;
  meta["toral_component_trivial"] = group.metadata().toral_component_trivial;
  meta["decomposable_declared"] = group.metadata().decomposable_declared;
  j["metadata"] = std::move(meta);
  return j;
}

Json splitting_json(const DynamicalSplitting& split) {
  Json j;
  j["dim_plus"] = split.plus.dim();
  j["dim_zero"] = split.zero.dim();
  j["dim_minus"] = split.minus.dim();
  if (std::isfinite(split.lambda_min_abs)) j["lambda_min_abs"] = split.lambda_min_abs;
  else j["lambda_min_abs"] = nullptr;
  return j;
}

} // namespace

ScenarioFixture scenario_from_json(const Json& j) {
  if (j.value("schema_version", 0) != 1)
    throw ValidationError("scenario json: unsupported schema_version");
  ScenarioFixture fixture;
  LCSSpec& spec = fixture.lcs;
  spec.name = j.at("name").get<std::string>();
  spec.realization = group_from_json(j.at("group"));

  const Json& drift = j.at("drift");
  std::string kind = drift.at("kind").get<std::string>();
  if (kind == "inner") {
    spec.drift.kind = DriftKind::inner;
    spec.drift.inner_vector = vector_from_json(drift.at("vector"));
  } else if (kind == "derivation") {
    spec.drift.kind = DriftKind::derivation;
    spec.drift.derivation = matrix_from_json(drift.at("matrix"));
  } else {
    throw ValidationError("drift kind must be inner or derivation");
  }

  for (const Json& c : j.at("controls")) spec.controls.push_back(vector_from_json(c));
  spec.omega.radii = vector_from_json(j.at("omega"));
  if (j.contains("g0_torus"))
    for (const Json& w : j.at("g0_torus")) spec.g0_torus.push_back(vector_from_json(w));
  spec.validate();

  if (j.contains("homomorphisms"))
    for (const Json& h : j.at("homomorphisms")) {
      if (!h.at("target").is_string())
        throw ValidationError("homomorphism targets must be catalog group names");
      fixture.homomorphisms.emplace_back(
          h.value("name", std::string("hom")), spec.realization,
          catalog_group(h.at("target").get<std::string>()), matrix_from_json(h.at("matrix")),
          h.value("image_g0_compact_declared", false));
    }
  return fixture;
}

ScenarioFixture load_scenario_file(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scenario file parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

Json scenario_to_json(const ScenarioFixture& fixture) {
  const LCSSpec& spec = fixture.lcs;
  Json j;
  j["schema_version"] = 1;
  j["name"] = spec.name;
  j["group"] = group_to_json(*spec.realization);
  Json drift;
  if (spec.drift.kind == DriftKind::inner) {
    drift["kind"] = "inner";
    drift["vector"] = vector_to_json(spec.drift.inner_vector);
  } else {
    drift["kind"] = "derivation";
    drift["matrix"] = matrix_to_json(spec.drift.derivation);
  }
  j["drift"] = std::move(drift);
  Json controls = Json::array();
  for (const Vector& c : spec.controls) controls.push_back(vector_to_json(c));
  j["controls"] = std::move(controls);
  j["omega"] = vector_to_json(spec.omega.radii);
  if (!spec.g0_torus.empty()) {
    Json torus = Json::array();
    for (const Vector& w : spec.g0_torus) torus.push_back(vector_to_json(w));
    j["g0_torus"] = std::move(torus);
  }
  if (!fixture.homomorphisms.empty()) {
    Json homs = Json::array();
    for (const HomomorphismSpec& hom : fixture.homomorphisms) {
      Json h;
      h["name"] = hom.name();
      h["target"] = hom.target().name();
      h["matrix"] = matrix_to_json(hom.matrix());
      h["image_g0_compact_declared"] = hom.image_g0_compact_declared();
      homs.push_back(std::move(h));
    }
    j["homomorphisms"] = std::move(homs);
  }
  return j;
}

Json analyze_report(const ScenarioFixture& fixture, std::uint64_t seed) {
  const LCSSpec& spec = fixture.lcs;
  const LieAlgebra& alg = spec.algebra();
  Matrix d = induced_derivation(spec);

  Json j;
  j["schema_version"] = 1;
  j["name"] = spec.name;
  j["group"] = spec.realization->name();
  j["dim"] = alg.dim();
  j["seed"] = seed;

  JordanDecomposition jd = jordan_decompose(d);
  Json eigs = Json::array();
  for (const EigenvalueCluster& c : jd.eigenvalues) {
    Json e;
    e["re"] = c.value.real();
    e["im"] = c.value.imag();
    e["multiplicity"] = c.multiplicity;
    eigs.push_back(std::move(e));
  }
  Json jordan;
  jordan["eigenvalues"] = std::move(eigs);
  jordan["elliptic_norm"] = jd.elliptic.norm();
  jordan["hyperbolic_norm"] = jd.hyperbolic.norm();
  jordan["nilpotent_norm"] = jd.nilpotent.norm();
  jordan["operator_class"] = to_string(classify_operator(d));
  j["jordan"] = std::move(jordan);

  DynamicalSplitting split = dynamical_split(jd, d);
  j["splitting"] = splitting_json(split);

  GradingReport grading = verify_grading(alg, d);
  Json gj;
  gj["graded"] = grading.graded;
  gj["max_residual"] = grading.max_residual;
  Json levels = Json::array();
  for (const GradingLevel& level : grading.levels) levels.push_back(level.eigenvalue);
  gj["levels"] = std::move(levels);
  j["grading"] = std::move(gj);

  LarcResult larc = larc_check(spec);
  Json lj;
  lj["satisfied"] = larc.satisfied;
  lj["achieved_dim"] = larc.achieved.dim();
  lj["iterations"] = larc.iterations;
  j["larc"] = std::move(lj);

  DecomposabilityReport dec = check_decomposability(spec);
  Json dj;
  dj["algebra_splits"] = dec.algebra_splits;
  dj["group_decomposes"] = dec.group_decomposes;
  switch (dec.route) {
    case DecomposabilityRoute::solvable_computed: dj["route"] = "solvable_computed"; break;
    case DecomposabilityRoute::global_coordinates: dj["route"] = "global_coordinates"; break;
    case DecomposabilityRoute::declared_only: dj["route"] = "declared_only"; break;
    case DecomposabilityRoute::none: dj["route"] = "none"; break;
  }
  j["decomposability"] = std::move(dj);

  if (!split.minus.is_trivial() && std::isfinite(split.lambda_min_abs)) {
    ContractionConstants cc = contraction_constants(split, d);
    Json cj;
    cj["c"] = cc.c;
    cj["lambda"] = cc.lambda;
    j["contraction"] = std::move(cj);
  } else {
    j["contraction"] = nullptr;
  }

  try {
    TheoremMainBound bound = theorem_main_bound(spec, seed);
    Json bj;
    bj["R"] = bound.R;
    bj["c"] = bound.c;
    bj["lambda"] = bound.lambda;
    bj["diam_K"] = bound.diam_K;
    bj["metric"] = bound.metric;
    j["orbit_bound"] = std::move(bj);
  } catch (const ValidationError& e) {
    j["orbit_bound"] = nullptr;
    j["orbit_bound_skipped"] = e.what();
  }

  InternalStabilityReport internal = classify_internal(alg, d);
  Json ij;
  ij["verdict"] = to_string(internal.verdict);
  ij["dim_plus"] = internal.dim_plus;
  ij["dim_zero"] = internal.dim_zero;
  ij["dim_minus"] = internal.dim_minus;
  ij["restriction_class"] = to_string(internal.restriction_class);
  ij["reason"] = internal.reason;
  j["internal_stability"] = std::move(ij);

  Json homs = Json::array();
  for (const HomomorphismSpec& hom : fixture.homomorphisms) {
    BiboReport bibo = classify_bibo(spec, hom);
    Json h;
    h["name"] = hom.name();
    h["target"] = hom.target().name();
    h["verdict"] = to_string(bibo.verdict);
    h["kernel_invariant"] = bibo.kernel_invariant;
    h["gplus_in_kernel"] = bibo.gplus_in_kernel;
    h["image_g0_zero"] = bibo.image_g0_zero;
    h["compactness_provenance"] = bibo.compactness_provenance;
    homs.push_back(std::move(h));
  }
  j["bibo"] = std::move(homs);

  Json prov;
  prov["solvable"] = spec.realization->metadata().is_solvable ? "declared" : "not declared";
  prov["g0_compact"] = spec.realization->metadata().g0_compact_declared ? "declared" : "not declared";
  prov["toral_component_trivial"] = spec.realization->metadata().toral_component_trivial;
  j["provenance"] = std::move(prov);
  return j;
}

Json trajectory_json(const LCSSpec& spec, const Trajectory& traj) {
  Json j;
  j["name"] = spec.name;
  j["times"] = Json::array();
  j["gauges"] = Json::array();
  j["points"] = Json::array();
  const GroupRealization& group = *spec.realization;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    j["times"].push_back(traj.times[k]);
    j["gauges"].push_back(traj.gauges[k]);
    if (group.has_chart()) {
      j["points"].push_back(vector_to_json(group.chart_state(traj.points[k])));
    } else {
      const Matrix& m = traj.points[k].mat;
      Vector flat(m.size());
      for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r) flat(c * m.rows() + r) = m(r, c);
      j["points"].push_back(vector_to_json(flat));
    }
  }
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

} // namespace lcs
