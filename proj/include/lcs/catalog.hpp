#ifndef LCS_CATALOG_HPP
#define LCS_CATALOG_HPP

#include <memory>
#include <string>
#include <vector>

#include "lcs/stability.hpp"
#include "lcs/system.hpp"

namespace lcs {

/// A ready-to-run system plus the homomorphisms studied with it.
struct ScenarioFixture {
  LCSSpec lcs;
  std::vector<HomomorphismSpec> homomorphisms;
};

/// Group names: "R^n" (any n >= 1), "heisenberg3", "aff_plus", "se2", "so2",
/// "so3", "sl2".
LieAlgebra catalog_algebra(const std::string& name);
std::shared_ptr<const GroupRealization> catalog_group(const std::string& name);
bool catalog_has_group(const std::string& name);
std::vector<std::string> catalog_group_names();

/// Scenario names: rn4_stable, sl2_adH, se2_bounded, se2_push, so3_rotation,
/// aff_stable, heis_nilpotent, heis_hyperbolic.
ScenarioFixture catalog_scenario(const std::string& name);
std::vector<std::string> catalog_scenario_names();

/// (algebra, derivation) pairs covering every catalog drift, for grading and
/// splitting sweeps.
struct DerivationFixture {
  std::string name;
  LieAlgebra algebra;
  Matrix derivation;
};
std::vector<DerivationFixture> catalog_derivation_fixtures();

/// The homomorphism study set: identity on stable R^4, identity on sl2,
/// se2 -> so2 projection, heisenberg -> R^2 quotient by the center, identity
/// on so3. Each entry names the scenario it rides on.
struct HomomorphismFixture {
  std::string scenario;
  HomomorphismSpec hom;
};
std::vector<HomomorphismFixture> catalog_homomorphism_fixtures();

} // namespace lcs

#endif
