#include "lcs/lie_algebra.hpp"

#include <cmath>

#include "lcs/errors.hpp"

namespace lcs {

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> basis_names,
                       std::vector<Matrix> c_tensor)
    : m_name(std::move(name)), m_basis_names(std::move(basis_names)), m_c(std::move(c_tensor)) {
  m_dim = static_cast<Index>(m_c.size());
  if (m_dim == 0) throw ValidationError("LieAlgebra: dimension must be positive");
  if (m_basis_names.empty()) {
    for (Index i = 0; i < m_dim; ++i) m_basis_names.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<Index>(m_basis_names.size()) != m_dim)
    throw ValidationError("LieAlgebra: basis name count does not match dimension");
  for (const Matrix& slab : m_c) {
    if (slab.rows() != m_dim || slab.cols() != m_dim)
      throw ValidationError("LieAlgebra: structure tensor has wrong shape");
    if ((slab + slab.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw ValidationError("LieAlgebra: structure constants are not antisymmetric");
  }
  double jacobi = jacobi_residual();
  if (jacobi > kJacobiTol)
    throw ValidationError("LieAlgebra: Jacobi identity violated, residual " +
                          std::to_string(jacobi));
}

LieAlgebra LieAlgebra::from_sparse(std::string name, std::vector<std::string> basis_names,
                                   const std::vector<std::tuple<int, int, int, double>>& entries) {
  Index dim = static_cast<Index>(basis_names.size());
  std::vector<Matrix> c(dim, Matrix::Zero(dim, dim));
  for (const auto& [i, j, k, value] : entries) {
    if (i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim)
      throw ValidationError("LieAlgebra: structure constant index out of range");
    if (i >= j) throw ValidationError("LieAlgebra: sparse entries require i < j");
    c[k - 1](i - 1, j - 1) += value;
    c[k - 1](j - 1, i - 1) -= value;
  }
  return LieAlgebra(std::move(name), std::move(basis_names), std::move(c));
}

LieAlgebra LieAlgebra::abelian(Index dim, std::string name) {
  if (name.empty()) name = "R^" + std::to_string(dim);
  std::vector<std::string> basis;
  for (Index i = 0; i < dim; ++i) basis.push_back("e" + std::to_string(i + 1));
  return LieAlgebra(std::move(name), std::move(basis), std::vector<Matrix>(dim, Matrix::Zero(dim, dim)));
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != m_dim || y.size() != m_dim)
    throw ValidationError("bracket: coordinate dimension mismatch");
  Vector out(m_dim);
  for (Index k = 0; k < m_dim; ++k) out(k) = x.dot(m_c[k] * y);
  return out;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  if (x.size() != m_dim) throw ValidationError("ad: coordinate dimension mismatch");
  Matrix out(m_dim, m_dim);
  for (Index k = 0; k < m_dim; ++k) out.row(k) = x.transpose() * m_c[k];
  return out;
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (Index i = 0; i < m_dim; ++i) {
    Vector ei = Vector::Unit(m_dim, i);
    for (Index j = i + 1; j < m_dim; ++j) {
      Vector ej = Vector::Unit(m_dim, j);
      Vector bij = bracket(ei, ej);
      for (Index k = j + 1; k < m_dim; ++k) {
        Vector ek = Vector::Unit(m_dim, k);
        Vector cycle = bracket(bij, ek) + bracket(bracket(ej, ek), ei) +
                       bracket(bracket(ek, ei), ej);
        worst = std::max(worst, cycle.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double LieAlgebra::derivation_residual(const Matrix& d) const {
  if (d.rows() != m_dim || d.cols() != m_dim)
    throw ValidationError("derivation_residual: operator dimension mismatch");
  double worst = 0.0;
  for (Index i = 0; i < m_dim; ++i) {
    Vector ei = Vector::Unit(m_dim, i);
    for (Index j = i + 1; j < m_dim; ++j) {
      Vector ej = Vector::Unit(m_dim, j);
      Vector lhs = d * bracket(ei, ej);
      Vector rhs = bracket(d * ei, ej) + bracket(ei, d * ej);
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

bool LieAlgebra::is_derivation(const Matrix& d, double tol) const {
  return derivation_residual(d) <= tol;
}

Subspace LieAlgebra::center() const {
  // Stack the maps z -> [z, e_j]; the center is the common null space.
  Matrix stacked(m_dim * m_dim, m_dim);
  for (Index j = 0; j < m_dim; ++j) {
    for (Index k = 0; k < m_dim; ++k) {
      // [z, e_j]_k = sum_i z_i c[i][j][k]
      stacked.row(j * m_dim + k) = m_c[k].col(j).transpose();
    }
  }
  return Subspace::span(m_dim, nullspace(stacked));
}

Matrix LieAlgebra::killing_form() const {
  std::vector<Matrix> ads;
  ads.reserve(m_dim);
  for (Index i = 0; i < m_dim; ++i) ads.push_back(ad(Vector::Unit(m_dim, i)));
  Matrix k(m_dim, m_dim);
  for (Index i = 0; i < m_dim; ++i)
    for (Index j = i; j < m_dim; ++j) {
      k(i, j) = (ads[i] * ads[j]).trace();
      k(j, i) = k(i, j);
    }
  return k;
}

bool LieAlgebra::is_abelian(double tol) const {
  for (const Matrix& slab : m_c)
    if (slab.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

Subspace LieAlgebra::derived_subalgebra() const {
  Matrix brackets(m_dim, m_dim * m_dim);
  Index col = 0;
  for (Index i = 0; i < m_dim; ++i)
    for (Index j = 0; j < m_dim; ++j)
      brackets.col(col++) = bracket(Vector::Unit(m_dim, i), Vector::Unit(m_dim, j));
  return Subspace::span(m_dim, brackets);
}

namespace {

Subspace bracket_span(const LieAlgebra& alg, const Subspace& a, const Subspace& b) {
  Matrix cols(alg.dim(), a.dim() * b.dim());
  Index col = 0;
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < b.dim(); ++j)
      cols.col(col++) = alg.bracket(a.basis().col(i), b.basis().col(j));
  return Subspace::span(alg.dim(), cols);
}

} // namespace

bool LieAlgebra::is_nilpotent() const { return nilpotency_class() <= static_cast<int>(m_dim); }

int LieAlgebra::nilpotency_class() const {
  Subspace full = Subspace::full(m_dim);
  Subspace current = bracket_span(*this, full, full);
  int level = 1;
  while (current.dim() > 0) {
    if (level > static_cast<int>(m_dim)) return static_cast<int>(m_dim) + 1;
    Subspace next = bracket_span(*this, full, current);
    if (next.dim() == current.dim()) return static_cast<int>(m_dim) + 1;
    current = next;
    ++level;
  }
  return level;
}

bool LieAlgebra::is_solvable() const {
  Subspace current = Subspace::full(m_dim);
  for (Index step = 0; step <= m_dim; ++step) {
    Subspace next = bracket_span(*this, current, current);
    if (next.dim() == 0) return true;
    if (next.dim() == current.dim()) return false;
    current = next;
  }
  return false;
}

LieAlgebra LieAlgebra::restrict_to(const Subspace& s, const std::string& name) const {
  if (s.parent_dim() != m_dim) throw ValidationError("restrict_to: parent dimension mismatch");
  const Index q = s.dim();
  const Matrix& b = s.basis();
  std::vector<Matrix> c(q, Matrix::Zero(q, q));
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      Vector w = bracket(b.col(i), b.col(j));
      if (s.distance(w) > 1e-8)
        throw ValidationError("restrict_to: subspace is not closed under the bracket");
      Vector coeff = b.transpose() * w;
      for (Index k = 0; k < q; ++k) c[k](i, j) = coeff(k);
    }
  std::vector<std::string> names;
  for (Index i = 0; i < q; ++i) names.push_back("f" + std::to_string(i + 1));
  return LieAlgebra(name, std::move(names), std::move(c));
}

CompactTypeReport is_compact_type(const LieAlgebra& alg) {
  CompactTypeReport report;
  Matrix k = alg.killing_form();
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  const Vector& evals = es.eigenvalues();
  report.max_killing_eigenvalue = evals(evals.size() - 1);
  report.killing_negative_semidefinite = report.max_killing_eigenvalue <= kCompactEigTol;

  Matrix null_cols(alg.dim(), alg.dim());
  Index null_count = 0;
  for (Index i = 0; i < evals.size(); ++i)
    if (std::abs(evals(i)) <= kCompactEigTol) null_cols.col(null_count++) = es.eigenvectors().col(i);
  Subspace null_space = Subspace::span(alg.dim(), null_cols.leftCols(null_count));
  report.null_space_equals_center = null_space.equals(alg.center(), 1e-7);

  if (report.killing_negative_semidefinite) {
    report.classification = CompactType::compact_semisimple_mod_center;
  } else {
    report.classification = CompactType::not_compact_type;
    report.witness = es.eigenvectors().col(evals.size() - 1);
  }
  return report;
}

InvariantSubalgebraResult smallest_invariant_subalgebra(const LieAlgebra& alg, const Matrix& d,
                                                        const std::vector<Vector>& generators) {
  if (!alg.is_derivation(d))
    throw ValidationError("smallest_invariant_subalgebra: operator is not a derivation");
  const Index n = alg.dim();
  Matrix gen(n, static_cast<Index>(generators.size()));
  for (Index i = 0; i < gen.cols(); ++i) {
    if (generators[i].size() != n)
      throw ValidationError("smallest_invariant_subalgebra: generator dimension mismatch");
    gen.col(i) = generators[i];
  }
  InvariantSubalgebraResult result;
  Subspace current = Subspace::span(n, gen);
  for (int iter = 0; iter <= static_cast<int>(n); ++iter) {
    result.iterations = iter;
    const Matrix& b = current.basis();
    Matrix grown(n, b.cols() + b.cols() + b.cols() * b.cols());
    Index col = 0;
    for (Index i = 0; i < b.cols(); ++i) grown.col(col++) = b.col(i);
    for (Index i = 0; i < b.cols(); ++i) grown.col(col++) = d * b.col(i);
    for (Index i = 0; i < b.cols(); ++i)
      for (Index j = 0; j < b.cols(); ++j) grown.col(col++) = alg.bracket(b.col(i), b.col(j));
    Subspace next = Subspace::span(n, grown.leftCols(col));
    if (next.dim() == current.dim()) {
      result.saturated = true;
      break;
    }
    current = next;
  }
  result.subspace = current;
  return result;
}

} // namespace lcs
