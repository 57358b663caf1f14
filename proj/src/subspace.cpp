#include "lcs/subspace.hpp"

#include "lcs/errors.hpp"

namespace lcs {

namespace {

// SVD-based column-space / null-space split with an absolute threshold.
struct SvdSplit {
  Matrix column_space;
  Matrix null_space;
};

SvdSplit svd_split(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  SvdSplit out;
  out.column_space = svd.matrixU().leftCols(rank);
  out.null_space = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

} // namespace

Subspace Subspace::span(Index parent_dim, const Matrix& spanning) {
  if (spanning.size() > 0 && spanning.rows() != parent_dim)
    throw ValidationError("Subspace::span: row count does not match parent dimension");
  Subspace s;
  s.m_parent_dim = parent_dim;
  if (spanning.cols() == 0 || parent_dim == 0) {
    s.m_basis = Matrix::Zero(parent_dim, 0);
    return s;
  }
  s.m_basis = svd_split(spanning, kSubspaceTol).column_space;
  return s;
}

Subspace Subspace::zero(Index parent_dim) { return span(parent_dim, Matrix::Zero(parent_dim, 0)); }

Subspace Subspace::full(Index parent_dim) {
  return span(parent_dim, Matrix::Identity(parent_dim, parent_dim));
}

Matrix Subspace::projector() const { return m_basis * m_basis.transpose(); }

double Subspace::distance(const Vector& v) const {
  if (v.size() != m_parent_dim) throw ValidationError("Subspace::distance: dimension mismatch");
  return (v - m_basis * (m_basis.transpose() * v)).norm();
}

bool Subspace::contains(const Vector& v, double tol) const { return distance(v) <= tol; }

double Subspace::containment_residual(const Subspace& other) const {
  if (other.parent_dim() != m_parent_dim)
    throw ValidationError("Subspace: parent dimension mismatch");
  double worst = 0.0;
  for (Index j = 0; j < other.dim(); ++j)
    worst = std::max(worst, distance(other.basis().col(j)));
  return worst;
}

bool Subspace::contains(const Subspace& other, double tol) const {
  return containment_residual(other) <= tol;
}

bool Subspace::equals(const Subspace& other, double tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Vector Subspace::project(const Vector& v) const { return m_basis * (m_basis.transpose() * v); }

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.parent_dim() != b.parent_dim())
    throw ValidationError("subspace_sum: parent dimension mismatch");
  Matrix stacked(a.parent_dim(), a.dim() + b.dim());
  stacked << a.basis(), b.basis();
  return Subspace::span(a.parent_dim(), stacked);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  if (a.parent_dim() != b.parent_dim())
    throw ValidationError("subspace_intersection: parent dimension mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.parent_dim());
  // Null vectors (x; y) of [A  -B] give common points A x = B y.
  Matrix stacked(a.parent_dim(), a.dim() + b.dim());
  stacked << a.basis(), -b.basis();
  Matrix null = nullspace(stacked);
  Matrix common(a.parent_dim(), null.cols());
  for (Index j = 0; j < null.cols(); ++j)
    common.col(j) = a.basis() * null.col(j).head(a.dim());
  return Subspace::span(a.parent_dim(), common);
}

Matrix nullspace(const Matrix& m, double tol) {
  if (m.cols() == 0) return Matrix::Zero(0, 0);
  return svd_split(m, tol).null_space;
}

Matrix orthonormal_basis(const Matrix& m, double tol) {
  if (m.cols() == 0) return m;
  return svd_split(m, tol).column_space;
}

Index numerical_rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

} // namespace lcs
