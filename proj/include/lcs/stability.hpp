#ifndef LCS_STABILITY_HPP
#define LCS_STABILITY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcs/jordan.hpp"
#include "lcs/simulator.hpp"
#include "lcs/system.hpp"

namespace lcs {

enum class InternalVerdict { asymptotically_stable, stable, unstable, undetermined };

const char* to_string(InternalVerdict v);

struct InternalStabilityReport {
  InternalVerdict verdict = InternalVerdict::undetermined;
  Index dim_plus = 0;
  Index dim_zero = 0;
  Index dim_minus = 0;
  OperatorClass restriction_class = OperatorClass::elliptic;
  /// Which classification rule fired, e.g. "expanding subalgebra nontrivial".
  std::string reason;
};

/// Internal stability of the drift flow at the identity from the splitting of
/// the derivation and the ellipticity of its critical restriction.
InternalStabilityReport classify_internal(const LieAlgebra& alg, const Matrix& d);

/// True iff the restriction of d to the critical subspace is elliptic (the
/// zero operator counts as elliptic). Vacuously true when g^0 is trivial.
bool restricted_ellipticity(const LieAlgebra& alg, const Matrix& d);

/// Fixed point of the drift flow: max over t in {0.5, 1, ..., 10} of the
/// distance between phi_t(g) and g stays below 1e-8.
bool is_fixed(const LCSSpec& spec, const GroupElement& g);

/// Algebraic recurrence: Y in ker(D_H) and ker(D_N) to 1e-9.
bool is_recurrent_algebraic(const LieAlgebra& alg, const Matrix& d, const Vector& y);

struct AdaptedMetric {
  /// Gram matrix of the averaged inner product on g^- in the coordinates of
  /// `basis_minus` (orthonormal columns in the ambient algebra).
  Matrix gram;
  Matrix basis_minus;
  Matrix initial_gram; // before averaging; exp(t D_E) already isometric
  int grid_points = 256;
  double invariance_residual = 0.0;
  double isometry_residual = 0.0;
  double doubling_residual = 0.0;
};

/// Ad(G^0)-invariant inner product on g^- built by averaging an
/// e^{t D_E}-isometric product over the torus G^0 (trapezoid rule, 256 points
/// per circle factor). Requires g^- nontrivial and a torus parametrization
/// (empty generators meaning the trivial group); throws ValidationError for
/// generators that are not period-2pi circles.
AdaptedMetric build_adapted_metric(const LieAlgebra& alg, const Matrix& d,
                                   const std::vector<Vector>& torus_generators,
                                   int grid_points = 256);

/// Lie algebra homomorphism between realized groups, with enough block
/// structure to push group elements forward for simulation cross-checks.
class HomomorphismSpec {
public:
  /// `matrix` maps source algebra coordinates to target algebra coordinates.
  /// The bracket-compatibility residual must stay below 1e-9.
  HomomorphismSpec(std::string name, std::shared_ptr<const GroupRealization> source,
                   std::shared_ptr<const GroupRealization> target, Matrix matrix,
                   bool image_g0_compact_declared);

  const std::string& name() const { return m_name; }
  const Matrix& matrix() const { return m_matrix; }
  const GroupRealization& source() const { return *m_source; }
  const GroupRealization& target() const { return *m_target; }
  std::shared_ptr<const GroupRealization> target_ptr() const { return m_target; }
  bool image_g0_compact_declared() const { return m_image_g0_compact_declared; }

  double morphism_residual() const { return m_residual; }

  /// Group-level pushforward. Supported pairs: chart source with chart
  /// target via coordinates, identical matrix realizations via identity.
  GroupElement push(const GroupElement& g) const;

  Subspace kernel() const;

private:
  std::string m_name;
  std::shared_ptr<const GroupRealization> m_source;
  std::shared_ptr<const GroupRealization> m_target;
  Matrix m_matrix;
  bool m_image_g0_compact_declared = false;
  double m_residual = 0.0;
};

struct ConjugationReport {
  bool intertwines = false;
  double intertwine_residual = 0.0;
  bool images_match = false;
  double image_residual = 0.0;
};

/// Checks f D_source = D_target f and that f maps the dynamical subspaces of
/// the source onto the target subspaces intersected with the image of f.
ConjugationReport check_conjugation(const HomomorphismSpec& hom, const Matrix& d_source,
                                    const Matrix& d_target);

enum class BiboVerdict { bibo_stable, not_bibo_stable, undetermined };

const char* to_string(BiboVerdict v);

struct BiboReport {
  BiboVerdict verdict = BiboVerdict::undetermined;
  bool kernel_invariant = false;
  bool gplus_in_kernel = false;
  bool image_g0_zero = false;
  CompactTypeReport image_g0_compact;
  /// "computed+declared", "declared missing", "kernel not invariant", ...
  std::string compactness_provenance;
  Vector witness; // g+ direction escaping the kernel, when one exists
};

/// Bounded-input bounded-output classification of the induced system through
/// a homomorphism. Requires ker f invariant under the drift derivation;
/// returns undetermined otherwise.
BiboReport classify_bibo(const LCSSpec& spec, const HomomorphismSpec& hom);

struct BiboCrosscheck {
  int probes = 0;
  int bounded = 0;
  int unbounded = 0;
  int inconclusive = 0;
  /// Agreement with the algebraic verdict under the implication semantics:
  /// bibo_stable needs every probe bounded; not_bibo_stable needs an
  /// unbounded probe; undetermined is vacuous.
  bool agrees = false;
  BiboVerdict algebraic = BiboVerdict::undetermined;
};

/// Simulates random controls, projects the trajectories through the
/// homomorphism, and classifies the projected gauges.
BiboCrosscheck bibo_simulation_crosscheck(const LCSSpec& spec, const HomomorphismSpec& hom,
                                          std::uint64_t seed, int probes = 100,
                                          double horizon = 50.0);

} // namespace lcs

#endif
