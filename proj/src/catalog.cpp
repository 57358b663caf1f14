#include "lcs/catalog.hpp"

#include <stdexcept>

#include "lcs/errors.hpp"

namespace lcs {

namespace {

int parse_rn(const std::string& name) {
  if (name.size() < 3 || name.rfind("R^", 0) != 0) return 0;
  try {
    std::size_t used = 0;
    int n = std::stoi(name.substr(2), &used);
    if (used != name.size() - 2 || n < 1) return 0;
    return n;
  } catch (const std::exception&) {
    return 0;
  }
}

LieAlgebra heisenberg3_algebra() {
  return LieAlgebra::from_sparse("heisenberg3", {"e1", "e2", "e3"}, {{1, 2, 3, 1.0}});
}

LieAlgebra aff_plus_algebra() {
  return LieAlgebra::from_sparse("aff_plus", {"e1", "r"}, {{1, 2, 1, -1.0}});
}

LieAlgebra se2_algebra() {
  return LieAlgebra::from_sparse("se2", {"e1", "e2", "r"}, {{1, 3, 2, -1.0}, {2, 3, 1, 1.0}});
}

LieAlgebra so3_algebra() {
  return LieAlgebra::from_sparse("so3", {"e1", "e2", "e3"},
                                 {{1, 2, 3, 1.0}, {1, 3, 2, -1.0}, {2, 3, 1, 1.0}});
}

LieAlgebra sl2_algebra() {
  return LieAlgebra::from_sparse("sl2", {"H", "E", "F"},
                                 {{1, 2, 2, 2.0}, {1, 3, 3, -2.0}, {2, 3, 1, 1.0}});
}

Matrix rn4_drift() {
  Matrix d(4, 4);
  d << -1.0, 2.0, 0.0, 0.0,
       -2.0, -1.0, 0.0, 0.0,
        0.0, 0.0, -0.5, 0.0,
        0.0, 0.0, 0.0, -2.0;
  return d;
}

Matrix se2_drift() {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = -1.0;
  d(1, 1) = -1.0;
  return d;
}

Matrix heis_hyperbolic_drift() {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  return d;
}

Matrix heis_nilpotent_drift() {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 1) = 1.0;
  return d;
}

OmegaBox unit_box(Index m) {
  OmegaBox box;
  box.radii = Vector::Ones(m);
  return box;
}

LCSSpec make_spec(std::string name, std::shared_ptr<const GroupRealization> realization,
                  DriftSpec drift, std::vector<Vector> controls, std::vector<Vector> g0_torus) {
  LCSSpec spec;
  spec.name = std::move(name);
  spec.realization = std::move(realization);
  spec.drift = std::move(drift);
  spec.controls = std::move(controls);
  spec.omega = unit_box(static_cast<Index>(spec.controls.size()));
  spec.g0_torus = std::move(g0_torus);
  spec.validate();
  return spec;
}

DriftSpec derivation_drift(Matrix d) {
  DriftSpec drift;
  drift.kind = DriftKind::derivation;
  drift.derivation = std::move(d);
  return drift;
}

DriftSpec inner_drift(Vector x0) {
  DriftSpec drift;
  drift.kind = DriftKind::inner;
  drift.inner_vector = std::move(x0);
  return drift;
}

} // namespace

LieAlgebra catalog_algebra(const std::string& name) {
  if (int n = parse_rn(name); n > 0) return LieAlgebra::abelian(n, name);
  if (name == "heisenberg3") return heisenberg3_algebra();
  if (name == "aff_plus") return aff_plus_algebra();
  if (name == "se2") return se2_algebra();
  if (name == "so2") return LieAlgebra::abelian(1, "so2");
  if (name == "so3") return so3_algebra();
  if (name == "sl2") return sl2_algebra();
  throw ValidationError("unknown catalog algebra: " + name);
}

bool catalog_has_group(const std::string& name) {
  if (parse_rn(name) > 0) return true;
  return name == "heisenberg3" || name == "aff_plus" || name == "se2" || name == "so2" ||
         name == "so3" || name == "sl2";
}

std::shared_ptr<const GroupRealization> catalog_group(const std::string& name) {
  if (int n = parse_rn(name); n > 0) {
    GroupMetadata meta;
    meta.is_solvable = true;
    meta.is_nilpotent = true;
    return std::make_shared<ExpCoordinatesRealization>(name, LieAlgebra::abelian(n, name), meta);
  }
  if (name == "heisenberg3") {
    GroupMetadata meta;
    meta.is_solvable = true;
    meta.is_nilpotent = true;
    return std::make_shared<ExpCoordinatesRealization>(name, heisenberg3_algebra(), meta);
  }
  if (name == "aff_plus") {
    GroupMetadata meta;
    meta.is_solvable = true;
    Matrix action(1, 1);
    action << 1.0;
    return std::make_shared<SemidirectRealization>(name, aff_plus_algebra(), meta, 1,
                                                   std::vector<bool>{false},
                                                   std::vector<Matrix>{action});
  }
  if (name == "se2") {
    GroupMetadata meta;
    meta.is_solvable = true;
    meta.g0_compact_declared = true;
    meta.toral_component_trivial = false;
    Matrix rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    return std::make_shared<SemidirectRealization>(name, se2_algebra(), meta, 2,
                                                   std::vector<bool>{true},
                                                   std::vector<Matrix>{rot});
  }
  if (name == "so2") {
    GroupMetadata meta;
    meta.is_solvable = true;
    meta.is_nilpotent = true;
    meta.g0_compact_declared = true;
    meta.toral_component_trivial = false;
    return std::make_shared<SemidirectRealization>(name, LieAlgebra::abelian(1, "so2"), meta, 0,
                                                   std::vector<bool>{true},
                                                   std::vector<Matrix>{Matrix::Zero(0, 0)});
  }
  if (name == "so3") {
    GroupMetadata meta;
    meta.g0_compact_declared = true;
    meta.toral_component_trivial = false;
    Matrix l1 = Matrix::Zero(3, 3), l2 = Matrix::Zero(3, 3), l3 = Matrix::Zero(3, 3);
    l1(1, 2) = -1.0; l1(2, 1) = 1.0;
    l2(0, 2) = 1.0;  l2(2, 0) = -1.0;
    l3(0, 1) = -1.0; l3(1, 0) = 1.0;
    return std::make_shared<MatrixInnerRealization>(name, so3_algebra(), meta,
                                                    std::vector<Matrix>{l1, l2, l3});
  }
  if (name == "sl2") {
    GroupMetadata meta;
    // Gauss product coordinates cover a dense open set; decomposability is
    // declared, not certified.
    meta.decomposable_declared = true;
    Matrix h(2, 2), e(2, 2), f(2, 2);
    h << 1.0, 0.0, 0.0, -1.0;
    e << 0.0, 1.0, 0.0, 0.0;
    f << 0.0, 0.0, 1.0, 0.0;
    return std::make_shared<MatrixInnerRealization>(name, sl2_algebra(), meta,
                                                    std::vector<Matrix>{h, e, f});
  }
  throw ValidationError("unknown catalog group: " + name);
}

std::vector<std::string> catalog_group_names() {
  return {"R^2", "R^4", "heisenberg3", "aff_plus", "se2", "so2", "so3", "sl2"};
}

std::vector<std::string> catalog_scenario_names() {
  return {"rn4_stable", "sl2_adH",   "se2_bounded",    "se2_push",
          "so3_rotation", "aff_stable", "heis_nilpotent", "heis_hyperbolic"};
}

ScenarioFixture catalog_scenario(const std::string& name) {
  ScenarioFixture fixture;
  if (name == "rn4_stable") {
    auto group = catalog_group("R^4");
    fixture.lcs = make_spec(name, group, derivation_drift(rn4_drift()),
                            {Vector::Ones(4)}, {});
    fixture.homomorphisms.emplace_back("id_rn4", group, group, Matrix::Identity(4, 4), false);
    return fixture;
  }
  if (name == "sl2_adH") {
    auto group = catalog_group("sl2");
    fixture.lcs = make_spec(name, group, inner_drift(Vector::Unit(3, 0)),
                            {Vector::Unit(3, 1) + Vector::Unit(3, 2)}, {});
    fixture.homomorphisms.emplace_back("id_sl2", group, group, Matrix::Identity(3, 3), false);
    return fixture;
  }
  if (name == "se2_bounded") {
    auto group = catalog_group("se2");
    fixture.lcs = make_spec(name, group, derivation_drift(se2_drift()),
                            {Vector::Unit(3, 0), Vector::Unit(3, 2)}, {Vector::Unit(3, 2)});
    Matrix proj = Matrix::Zero(1, 3);
    proj(0, 2) = 1.0;
    fixture.homomorphisms.emplace_back("se2_to_so2", group, catalog_group("so2"), proj, true);
    return fixture;
  }
  if (name == "se2_push") {
    auto group = catalog_group("se2");
    fixture.lcs = make_spec(name, group, derivation_drift(se2_drift()),
                            {Vector::Unit(3, 0)}, {Vector::Unit(3, 2)});
    return fixture;
  }
  if (name == "so3_rotation") {
    auto group = catalog_group("so3");
    fixture.lcs = make_spec(name, group, inner_drift(Vector::Unit(3, 2)),
                            {Vector::Unit(3, 0)}, {});
    fixture.homomorphisms.emplace_back("id_so3", group, group, Matrix::Identity(3, 3), true);
    return fixture;
  }
  if (name == "aff_stable") {
    auto group = catalog_group("aff_plus");
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -1.0;
    fixture.lcs = make_spec(name, group, derivation_drift(d), {Vector::Ones(2)}, {});
    return fixture;
  }
  if (name == "heis_nilpotent") {
    auto group = catalog_group("heisenberg3");
    fixture.lcs = make_spec(name, group, derivation_drift(heis_nilpotent_drift()),
                            {Vector::Unit(3, 0), Vector::Unit(3, 1)}, {});
    return fixture;
  }
  if (name == "heis_hyperbolic") {
    auto group = catalog_group("heisenberg3");
    fixture.lcs = make_spec(name, group, derivation_drift(heis_hyperbolic_drift()),
                            {Vector::Unit(3, 0), Vector::Unit(3, 1)}, {});
    Matrix quot = Matrix::Zero(2, 3);
    quot(0, 0) = 1.0;
    quot(1, 1) = 1.0;
    fixture.homomorphisms.emplace_back("heis_to_r2", group, catalog_group("R^2"), quot, false);
    return fixture;
  }
  throw ValidationError("unknown catalog scenario: " + name);
}

std::vector<DerivationFixture> catalog_derivation_fixtures() {
  std::vector<DerivationFixture> out;
  for (const std::string& name : catalog_scenario_names()) {
    ScenarioFixture fixture = catalog_scenario(name);
    out.push_back({name, fixture.lcs.algebra(), induced_derivation(fixture.lcs)});
  }
  return out;
}

std::vector<HomomorphismFixture> catalog_homomorphism_fixtures() {
  std::vector<HomomorphismFixture> out;
  for (const std::string& name : catalog_scenario_names()) {
    ScenarioFixture fixture = catalog_scenario(name);
    for (HomomorphismSpec& hom : fixture.homomorphisms)
      out.push_back({name, std::move(hom)});
  }
  return out;
}

} // namespace lcs
