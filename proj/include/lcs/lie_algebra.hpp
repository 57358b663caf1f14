#ifndef LCS_LIE_ALGEBRA_HPP
#define LCS_LIE_ALGEBRA_HPP

#include <string>
#include <vector>

#include "lcs/dense.hpp"
#include "lcs/subspace.hpp"

namespace lcs {

inline constexpr double kJacobiTol = 1e-10;
inline constexpr double kDerivationTol = 1e-10;
inline constexpr double kCompactEigTol = 1e-9;

/// A finite-dimensional real Lie algebra given by structure constants over a
/// fixed basis: [e_i, e_j] = sum_k c[i][j][k] e_k.
class LieAlgebra {
public:
  /// `c_tensor[k]` is the dim x dim matrix of c[i][j][k]. Antisymmetry is
  /// validated, the Jacobi identity is checked to kJacobiTol.
  LieAlgebra(std::string name, std::vector<std::string> basis_names,
             std::vector<Matrix> c_tensor);

  /// Convenience constructor from a sparse list of (i, j, k, value), i < j.
  static LieAlgebra from_sparse(std::string name, std::vector<std::string> basis_names,
                                const std::vector<std::tuple<int, int, int, double>>& entries);

  static LieAlgebra abelian(Index dim, std::string name = "");

  const std::string& name() const { return m_name; }
  Index dim() const { return m_dim; }
  const std::vector<std::string>& basis_names() const { return m_basis_names; }
  const std::vector<Matrix>& c_tensor() const { return m_c; }

  Vector bracket(const Vector& x, const Vector& y) const;

  /// Matrix of ad(x): y -> [x, y].
  Matrix ad(const Vector& x) const;

  /// Largest Jacobi residual over basis triples.
  double jacobi_residual() const;

  /// Largest Leibniz residual of D over basis pairs.
  double derivation_residual(const Matrix& d) const;
  bool is_derivation(const Matrix& d, double tol = kDerivationTol) const;

  Subspace center() const;

  /// Killing form Gram matrix K_ij = tr(ad e_i ad e_j).
  Matrix killing_form() const;

  bool is_abelian(double tol = kSubspaceTol) const;
  bool is_nilpotent() const;
  bool is_solvable() const;

  /// Length of the lower central series until it stabilizes; dim+1 when the
  /// series never reaches zero (non-nilpotent).
  int nilpotency_class() const;

  /// Span of all brackets [x, y], x, y in the algebra.
  Subspace derived_subalgebra() const;

  /// Structure constants restricted to a bracket-closed subspace; throws
  /// ValidationError when the subspace is not closed under the bracket.
  LieAlgebra restrict_to(const Subspace& s, const std::string& name) const;

private:
  std::string m_name;
  Index m_dim = 0;
  std::vector<std::string> m_basis_names;
  std::vector<Matrix> m_c; // m_c[k](i,j) = c[i][j][k]
};

enum class CompactType { compact_semisimple_mod_center, not_compact_type };

struct CompactTypeReport {
  CompactType classification = CompactType::not_compact_type;
  bool killing_negative_semidefinite = false;
  /// Whether null(K) coincides with the center; when false under a
  /// negative-semidefinite form the certificate is only "mod a larger kernel".
  bool null_space_equals_center = false;
  /// For a failed certificate: v with K(v, v) > 0.
  Vector witness;
  double max_killing_eigenvalue = 0.0;
};

/// Algebraic compactness certificate from the Killing form. The group-level
/// fact still requires realization metadata; callers report both.
CompactTypeReport is_compact_type(const LieAlgebra& alg);

struct InvariantSubalgebraResult {
  Subspace subspace;
  int iterations = 0;
  bool saturated = false;
};

/// Smallest subalgebra containing `generators` that is invariant under the
/// derivation `d`. Saturates by alternating d-images and pairwise brackets.
InvariantSubalgebraResult smallest_invariant_subalgebra(const LieAlgebra& alg, const Matrix& d,
                                                        const std::vector<Vector>& generators);

} // namespace lcs

#endif
