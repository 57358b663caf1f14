#ifndef LCS_SUBSPACE_HPP
#define LCS_SUBSPACE_HPP

#include "lcs/dense.hpp"

namespace lcs {

/// Rank decisions below this singular-value threshold treat directions as zero.
inline constexpr double kSubspaceTol = 1e-9;

/// A linear subspace of R^n held as an orthonormal column basis.
class Subspace {
public:
  Subspace() = default;

  /// Orthonormalizes the columns of `spanning` (rank decided at kSubspaceTol).
  static Subspace span(Index parent_dim, const Matrix& spanning);
  static Subspace zero(Index parent_dim);
  static Subspace full(Index parent_dim);

  Index parent_dim() const { return m_parent_dim; }
  Index dim() const { return m_basis.cols(); }
  bool is_trivial() const { return dim() == 0; }
  bool is_full() const { return dim() == m_parent_dim; }

  /// Orthonormal basis, parent_dim x dim.
  const Matrix& basis() const { return m_basis; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const;

  /// Distance from v to the subspace.
  double distance(const Vector& v) const;
  bool contains(const Vector& v, double tol = kSubspaceTol) const;

  /// Max distance from any basis vector of `other` to this subspace.
  double containment_residual(const Subspace& other) const;
  bool contains(const Subspace& other, double tol = kSubspaceTol) const;
  bool equals(const Subspace& other, double tol = kSubspaceTol) const;

  Vector project(const Vector& v) const;

private:
  Index m_parent_dim = 0;
  Matrix m_basis; // parent_dim x dim, orthonormal
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

/// Orthonormal basis of the null space of `m` (singular values below tol).
Matrix nullspace(const Matrix& m, double tol = kSubspaceTol);

/// Orthonormal basis of the column span of `m`.
Matrix orthonormal_basis(const Matrix& m, double tol = kSubspaceTol);

Index numerical_rank(const Matrix& m, double tol = kSubspaceTol);

} // namespace lcs

#endif
