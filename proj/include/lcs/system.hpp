#ifndef LCS_SYSTEM_HPP
#define LCS_SYSTEM_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcs/control.hpp"
#include "lcs/group.hpp"
#include "lcs/jordan.hpp"

namespace lcs {

enum class DriftKind { inner, derivation };

/// Drift of a linear control system: either an inner vector X0 (the
/// automorphism flow is conjugation) or a derivation matrix.
struct DriftSpec {
  DriftKind kind = DriftKind::derivation;
  Vector inner_vector;
  Matrix derivation;
};

/// A linear control system on a realized group: drift automorphism flow plus
/// right-invariant control fields with values in a compact box.
struct LCSSpec {
  std::string name;
  std::shared_ptr<const GroupRealization> realization;
  DriftSpec drift;
  std::vector<Vector> controls;
  OmegaBox omega;
  /// Commuting period-2pi generators of G0 when it is a torus; empty
  /// otherwise. Used by the adapted-metric construction.
  std::vector<Vector> g0_torus;

  const LieAlgebra& algebra() const { return realization->algebra(); }

  /// Validates dimensions, the omega box, and that the drift is admissible
  /// for the realization (derivation check, inner resolution).
  void validate() const;
};

/// The derivation generating the drift flow: ad(X0) for inner drifts, the
/// declared matrix otherwise.
Matrix induced_derivation(const LCSSpec& spec);

/// The inner vector realizing the drift on a matrix_inner group; resolves a
/// derivation-kind drift through ad, throwing ValidationError if not inner.
Vector resolved_inner_vector(const LCSSpec& spec);

struct LarcResult {
  bool satisfied = false;
  Subspace achieved;
  int iterations = 0;
};

/// Lie algebra rank condition: the smallest drift-invariant subalgebra
/// containing the control directions is the whole algebra.
LarcResult larc_check(const LCSSpec& spec);

/// Flow of the drift automorphism through the realization.
GroupElement drift_flow(const LCSSpec& spec, double t, const GroupElement& g);

struct SubgroupMembership {
  bool in_plus = false;
  bool in_zero = false;
  bool in_minus = false;
  Vector log_coords;
};

/// Membership of g in the dynamical subgroups via the chart logarithm and the
/// splitting of the induced derivation. Tolerance is the chart tolerance.
SubgroupMembership dynamical_subgroup_coords(const LCSSpec& spec, const GroupElement& g,
                                             double tol = 1e-8);

enum class DecomposabilityRoute { solvable_computed, global_coordinates, declared_only, none };

struct DecomposabilityReport {
  bool algebra_splits = false; // direct sum g = g- + g0 + g+ (always at this scale)
  bool group_decomposes = false;
  DecomposabilityRoute route = DecomposabilityRoute::none;
};

/// Whether G = G^- G^{+,0} can be certified: computed solvability, global
/// product coordinates, or a declaration only.
DecomposabilityReport check_decomposability(const LCSSpec& spec);

/// G^- and G^0 factors of g = a c with a in G^-, c in G^0; requires the
/// positive part of the splitting to be trivial. Exact on semidirect and
/// nilpotent charts; throws ChartError when no decomposition is reachable.
struct MinusZeroFactors {
  GroupElement minus;
  GroupElement zero;
  /// Coordinates of log(minus) in the orthonormal basis of g^-.
  Vector minus_coords;
};

MinusZeroFactors split_minus_zero(const LCSSpec& spec, const DynamicalSplitting& split,
                                  const GroupElement& g);

} // namespace lcs

#endif
