#ifndef LCS_VERIFY_HPP
#define LCS_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace lcs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The graded verification suite over the built-in catalog. `workers`
/// overrides the worker cap (0 keeps the environment default). Results and
/// the canonical report contain no timing data, so reruns are byte-stable.
std::vector<CriterionResult> run_catalog_criteria(std::uint64_t seed, std::size_t workers = 0);

/// Canonical JSON for a criteria run (determinism checks compare its dump).
nlohmann::ordered_json criteria_report(const std::vector<CriterionResult>& results,
                                       std::uint64_t seed);

/// Scenario-scoped verification: the suites that apply to one system
/// (cocycle, grading, manifold probes, bound, homomorphism cross-checks).
std::vector<CriterionResult> run_scenario_suites(const std::string& scenario_name,
                                                 std::uint64_t seed);

} // namespace lcs

#endif
