#ifndef LCS_JSON_IO_HPP
#define LCS_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "lcs/catalog.hpp"
#include "lcs/stability.hpp"
#include "lcs/system.hpp"

namespace lcs {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// Algebra file layout:
///   { "name": ..., "dim": n, "basis": [...],
///     "structure_constants": [[i, j, k, value], ...] }
/// with 1-based indices, i < j; antisymmetric completions are implied.
LieAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const LieAlgebra& alg);

/// Scenario file layout (schema_version 1):
///   { "schema_version": 1, "name": ..., "group": "se2" | {inline},
///     "drift": {"kind": "inner"|"derivation", "vector"|"matrix": ...},
///     "controls": [[...], ...], "omega": [r1, ...],
///     "g0_torus": [[...], ...]?, "homomorphisms": [...]? }
ScenarioFixture scenario_from_json(const Json& j);
ScenarioFixture load_scenario_file(const std::string& path);

Json scenario_to_json(const ScenarioFixture& fixture);

/// Full analysis report for one scenario: decomposition, splitting,
/// contraction data, rank condition, verdicts, provenance notes.
Json analyze_report(const ScenarioFixture& fixture, std::uint64_t seed);

Json trajectory_json(const LCSSpec& spec, const Trajectory& traj);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace lcs

#endif
