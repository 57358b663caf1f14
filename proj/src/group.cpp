#include "lcs/group.hpp"

#include <cmath>

#include "lcs/errors.hpp"
#include "lcs/expm.hpp"
#include "lcs/subspace.hpp"

namespace lcs {

namespace {

Vector vec_of(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

void require_kind(const GroupElement& g, RealizationKind kind, const char* where) {
  if (g.kind != kind)
    throw ValidationError(std::string(where) + ": element belongs to a different realization");
}

} // namespace

const char* to_string(RealizationKind k) {
  switch (k) {
    case RealizationKind::matrix_inner: return "matrix_inner";
    case RealizationKind::exp_coordinates: return "exp_coordinates";
    case RealizationKind::semidirect: return "semidirect";
  }
  return "unknown";
}

double wrap_angle(double a) {
  double w = std::fmod(a + M_PI, 2.0 * M_PI);
  if (w <= 0.0) w += 2.0 * M_PI;
  return w - M_PI;
}

GroupElement GroupRealization::conjugate(const GroupElement& g, const GroupElement& h) const {
  return multiply(multiply(g, h), inverse(g));
}

Index GroupRealization::chart_dim() const {
  throw ValidationError(m_name + ": realization has no chart");
}

Vector GroupRealization::chart_state(const GroupElement&) const {
  throw ValidationError(m_name + ": realization has no chart");
}

GroupElement GroupRealization::element_from_chart(const Vector&) const {
  throw ValidationError(m_name + ": realization has no chart");
}

void GroupRealization::chart_drift_field(const Matrix&, const Vector&, Vector&) const {
  throw ValidationError(m_name + ": realization has no chart");
}

void GroupRealization::chart_control_field(const Vector&, const Vector&, Vector&) const {
  throw ValidationError(m_name + ": realization has no chart");
}

// ---------------------------------------------------------------------------
// MatrixInnerRealization

MatrixInnerRealization::MatrixInnerRealization(std::string name, LieAlgebra algebra,
                                               GroupMetadata metadata, std::vector<Matrix> images)
    : GroupRealization(std::move(name), std::move(algebra), metadata),
      m_images(std::move(images)) {
  const Index dim = m_algebra.dim();
  if (static_cast<Index>(m_images.size()) != dim)
    throw ValidationError(m_name + ": one representation matrix per basis vector required");
  m_rep_dim = m_images[0].rows();
  for (const Matrix& im : m_images)
    if (im.rows() != m_rep_dim || im.cols() != m_rep_dim)
      throw ValidationError(m_name + ": representation matrices must be square and equal-sized");

  m_image_stack.resize(m_rep_dim * m_rep_dim, dim);
  for (Index i = 0; i < dim; ++i) m_image_stack.col(i) = vec_of(m_images[i]);
  if (numerical_rank(m_image_stack) != dim)
    throw ValidationError(m_name + ": representation is not faithful");
  m_unembed_solver.compute(m_image_stack);

  double scale = std::max(1.0, m_image_stack.cwiseAbs().maxCoeff());
  for (Index i = 0; i < dim; ++i)
    for (Index j = i + 1; j < dim; ++j) {
      Matrix commutator = m_images[i] * m_images[j] - m_images[j] * m_images[i];
      Matrix expected = embed(m_algebra.bracket(Vector::Unit(dim, i), Vector::Unit(dim, j)));
      if ((commutator - expected).norm() > 1e-10 * scale * scale)
        throw ValidationError(m_name + ": representation does not respect the bracket");
    }
}

Matrix MatrixInnerRealization::embed(const Vector& y) const {
  if (y.size() != m_algebra.dim())
    throw ValidationError(m_name + ": algebra coordinate dimension mismatch");
  Matrix out = Matrix::Zero(m_rep_dim, m_rep_dim);
  for (Index i = 0; i < y.size(); ++i) out += y(i) * m_images[i];
  return out;
}

Vector MatrixInnerRealization::unembed(const Matrix& m) const {
  if (m.rows() != m_rep_dim || m.cols() != m_rep_dim)
    throw ValidationError(m_name + ": representation matrix dimension mismatch");
  Vector rhs = vec_of(m);
  Vector coords = m_unembed_solver.solve(rhs);
  double residual = (m_image_stack * coords - rhs).norm();
  if (residual > 1e-8 * std::max(1.0, rhs.norm()))
    throw ChartError(m_name + ": matrix lies outside the embedded algebra (residual " +
                     std::to_string(residual) + ")");
  return coords;
}

GroupElement MatrixInnerRealization::from_matrix(const Matrix& m) const {
  if (m.rows() != m_rep_dim || m.cols() != m_rep_dim)
    throw ValidationError(m_name + ": group matrix dimension mismatch");
  GroupElement g;
  g.kind = RealizationKind::matrix_inner;
  g.mat = m;
  return g;
}

GroupElement MatrixInnerRealization::identity() const {
  return from_matrix(Matrix::Identity(m_rep_dim, m_rep_dim));
}

GroupElement MatrixInnerRealization::multiply(const GroupElement& a, const GroupElement& b) const {
  require_kind(a, RealizationKind::matrix_inner, "multiply");
  require_kind(b, RealizationKind::matrix_inner, "multiply");
  return from_matrix(a.mat * b.mat);
}

GroupElement MatrixInnerRealization::inverse(const GroupElement& a) const {
  require_kind(a, RealizationKind::matrix_inner, "inverse");
  return from_matrix(a.mat.partialPivLu().solve(Matrix::Identity(m_rep_dim, m_rep_dim)));
}

GroupElement MatrixInnerRealization::exp(const Vector& y) const {
  return from_matrix(expm(embed(y)));
}

Vector MatrixInnerRealization::log(const GroupElement& g) const {
  require_kind(g, RealizationKind::matrix_inner, "log");
  return unembed(logm_principal(g.mat));
}

double MatrixInnerRealization::gauge(const GroupElement& g) const {
  require_kind(g, RealizationKind::matrix_inner, "gauge");
  return (g.mat - Matrix::Identity(m_rep_dim, m_rep_dim)).norm();
}

double MatrixInnerRealization::distance(const GroupElement& a, const GroupElement& b) const {
  require_kind(a, RealizationKind::matrix_inner, "distance");
  require_kind(b, RealizationKind::matrix_inner, "distance");
  return (a.mat - b.mat).norm();
}

Matrix MatrixInnerRealization::Ad(const GroupElement& g) const {
  require_kind(g, RealizationKind::matrix_inner, "Ad");
  const Index dim = m_algebra.dim();
  Matrix ginv = inverse(g).mat;
  Matrix out(dim, dim);
  for (Index i = 0; i < dim; ++i) out.col(i) = unembed(g.mat * m_images[i] * ginv);
  return out;
}

GroupElement MatrixInnerRealization::drift_automorphism(const Matrix& d, double t,
                                                        const GroupElement& g) const {
  require_kind(g, RealizationKind::matrix_inner, "drift_automorphism");
  Matrix x0 = embed(inner_vector_for(d));
  Matrix flow = expm(t * x0);
  Matrix flow_inv = expm(-t * x0);
  return from_matrix(flow * g.mat * flow_inv);
}

Vector MatrixInnerRealization::inner_vector_for(const Matrix& d, double tol) const {
  const Index dim = m_algebra.dim();
  if (d.rows() != dim || d.cols() != dim)
    throw ValidationError(m_name + ": derivation dimension mismatch");
  Matrix ad_stack(dim * dim, dim);
  for (Index i = 0; i < dim; ++i)
    ad_stack.col(i) = vec_of(m_algebra.ad(Vector::Unit(dim, i)));
  Vector rhs = vec_of(d);
  Vector x0 = ad_stack.completeOrthogonalDecomposition().solve(rhs);
  double residual = (ad_stack * x0 - rhs).norm();
  if (residual > tol * std::max(1.0, rhs.norm()))
    throw ValidationError(m_name + ": derivation is not inner (residual " +
                          std::to_string(residual) + ")");
  return x0;
}

// ---------------------------------------------------------------------------
// ExpCoordinatesRealization

ExpCoordinatesRealization::ExpCoordinatesRealization(std::string name, LieAlgebra algebra,
                                                     GroupMetadata metadata)
    : GroupRealization(std::move(name), std::move(algebra), metadata) {
  if (!m_algebra.is_nilpotent())
    throw ValidationError(m_name + ": exponential coordinates require a nilpotent algebra");
  m_class = m_algebra.nilpotency_class();
  if (m_class > 4)
    throw ValidationError(m_name + ": closed products implemented up to nilpotency class 4");
}

GroupElement ExpCoordinatesRealization::identity() const {
  GroupElement g;
  g.kind = RealizationKind::exp_coordinates;
  g.coords = Vector::Zero(m_algebra.dim());
  return g;
}

GroupElement ExpCoordinatesRealization::multiply(const GroupElement& a,
                                                 const GroupElement& b) const {
  require_kind(a, RealizationKind::exp_coordinates, "multiply");
  require_kind(b, RealizationKind::exp_coordinates, "multiply");
  GroupElement g;
  g.kind = RealizationKind::exp_coordinates;
  g.coords = bch(a.coords, b.coords);
  return g;
}

GroupElement ExpCoordinatesRealization::inverse(const GroupElement& a) const {
  require_kind(a, RealizationKind::exp_coordinates, "inverse");
  GroupElement g;
  g.kind = RealizationKind::exp_coordinates;
  g.coords = -a.coords;
  return g;
}

GroupElement ExpCoordinatesRealization::exp(const Vector& y) const {
  if (y.size() != m_algebra.dim())
    throw ValidationError(m_name + ": algebra coordinate dimension mismatch");
  GroupElement g;
  g.kind = RealizationKind::exp_coordinates;
  g.coords = y;
  return g;
}

Vector ExpCoordinatesRealization::log(const GroupElement& g) const {
  require_kind(g, RealizationKind::exp_coordinates, "log");
  return g.coords;
}

double ExpCoordinatesRealization::gauge(const GroupElement& g) const {
  require_kind(g, RealizationKind::exp_coordinates, "gauge");
  return g.coords.norm();
}

double ExpCoordinatesRealization::distance(const GroupElement& a, const GroupElement& b) const {
  return gauge(multiply(inverse(a), b));
}

Matrix ExpCoordinatesRealization::Ad(const GroupElement& g) const {
  require_kind(g, RealizationKind::exp_coordinates, "Ad");
  return expm(m_algebra.ad(g.coords));
}

Index ExpCoordinatesRealization::chart_dim() const { return m_algebra.dim(); }

Vector ExpCoordinatesRealization::chart_state(const GroupElement& g) const {
  require_kind(g, RealizationKind::exp_coordinates, "chart_state");
  return g.coords;
}

GroupElement ExpCoordinatesRealization::element_from_chart(const Vector& state) const {
  return exp(state);
}

void ExpCoordinatesRealization::chart_drift_field(const Matrix& d, const Vector& state,
                                                  Vector& out) const {
  out = d * state;
}

void ExpCoordinatesRealization::chart_control_field(const Vector& state, const Vector& u,
                                                    Vector& out) const {
  out = dexpinv(state, u);
}

GroupElement ExpCoordinatesRealization::drift_automorphism(const Matrix& d, double t,
                                                           const GroupElement& g) const {
  require_kind(g, RealizationKind::exp_coordinates, "drift_automorphism");
  return exp(expm(t * d) * g.coords);
}

Vector ExpCoordinatesRealization::bch(const Vector& x, const Vector& y) const {
  // Closed sum; every bracket of length five or more vanishes at class <= 4.
  Vector xy = m_algebra.bracket(x, y);
  Vector z = x + y + 0.5 * xy;
  if (m_class >= 3)
    z += (1.0 / 12.0) * (m_algebra.bracket(x, xy) - m_algebra.bracket(y, xy));
  if (m_class >= 4) z -= (1.0 / 24.0) * m_algebra.bracket(y, m_algebra.bracket(x, xy));
  return z;
}

Vector ExpCoordinatesRealization::dexpinv(const Vector& y, const Vector& xi) const {
  // Bernoulli sum; ad_y^3 carries weight zero and ad_y^4 vanishes at class <= 4.
  Vector out = xi - 0.5 * m_algebra.bracket(y, xi);
  if (m_class >= 3) out += (1.0 / 12.0) * m_algebra.bracket(y, m_algebra.bracket(y, xi));
  return out;
}

// ---------------------------------------------------------------------------
// SemidirectRealization

SemidirectRealization::SemidirectRealization(std::string name, LieAlgebra algebra,
                                             GroupMetadata metadata, Index trans_dim,
                                             std::vector<bool> angle_flags,
                                             std::vector<Matrix> action)
    : GroupRealization(std::move(name), std::move(algebra), metadata),
      m_n(trans_dim),
      m_angle(std::move(angle_flags)),
      m_action(std::move(action)) {
  const Index dim = m_algebra.dim();
  const Index p = static_cast<Index>(m_angle.size());
  if (m_n < 0 || m_n + p != dim)
    throw ValidationError(m_name + ": translation and factor dimensions must sum to the algebra dimension");
  if (static_cast<Index>(m_action.size()) != p)
    throw ValidationError(m_name + ": one action generator per factor coordinate required");
  for (const Matrix& m : m_action)
    if (m.rows() != m_n || m.cols() != m_n)
      throw ValidationError(m_name + ": action generators must act on the translation part");
  for (std::size_t a = 0; a < m_action.size(); ++a)
    for (std::size_t b = a + 1; b < m_action.size(); ++b)
      if ((m_action[a] * m_action[b] - m_action[b] * m_action[a]).norm() > 1e-12)
        throw ValidationError(m_name + ": action generators must commute");
  for (std::size_t a = 0; a < m_action.size(); ++a)
    if (m_angle[a] && (expm(2.0 * M_PI * m_action[a]) - Matrix::Identity(m_n, m_n)).norm() > 1e-8)
      throw ValidationError(m_name + ": periodic coordinates need a period-2pi action generator");

  // The declared structure constants must be the semidirect bracket.
  for (Index i = 0; i < dim; ++i)
    for (Index j = i + 1; j < dim; ++j) {
      Vector expected = Vector::Zero(dim);
      if (i < m_n && j >= m_n) {
        // [translation, factor] = -(action of factor on the translation)
        expected.head(m_n) = -(m_action[static_cast<std::size_t>(j - m_n)] *
                               Vector::Unit(m_n, i).eval());
      }
      Vector actual = m_algebra.bracket(Vector::Unit(dim, i), Vector::Unit(dim, j));
      if ((actual - expected).norm() > 1e-10)
        throw ValidationError(m_name + ": structure constants do not match the semidirect product");
    }
}

Matrix SemidirectRealization::w_of(const Vector& k) const {
  Matrix w = Matrix::Zero(m_n, m_n);
  for (Index a = 0; a < k.size(); ++a) w += k(a) * m_action[static_cast<std::size_t>(a)];
  return w;
}

Matrix SemidirectRealization::rho(const Vector& k) const {
  if (k.size() != factor_dim())
    throw ValidationError(m_name + ": factor coordinate dimension mismatch");
  return expm(w_of(k));
}

Vector SemidirectRealization::wrap_factor(const Vector& k) const {
  Vector out = k;
  for (Index a = 0; a < out.size(); ++a)
    if (m_angle[static_cast<std::size_t>(a)]) out(a) = wrap_angle(out(a));
  return out;
}

GroupElement SemidirectRealization::from_parts(const Vector& v, const Vector& k) const {
  if (v.size() != m_n || k.size() != factor_dim())
    throw ValidationError(m_name + ": group coordinate dimension mismatch");
  GroupElement g;
  g.kind = RealizationKind::semidirect;
  g.coords.resize(m_n + factor_dim());
  g.coords.head(m_n) = v;
  g.coords.tail(factor_dim()) = wrap_factor(k);
  return g;
}

Vector SemidirectRealization::trans_part(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "trans_part");
  return g.coords.head(m_n);
}

Vector SemidirectRealization::factor_part(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "factor_part");
  return g.coords.tail(factor_dim());
}

GroupElement SemidirectRealization::identity() const {
  return from_parts(Vector::Zero(m_n), Vector::Zero(factor_dim()));
}

GroupElement SemidirectRealization::multiply(const GroupElement& a, const GroupElement& b) const {
  require_kind(a, RealizationKind::semidirect, "multiply");
  require_kind(b, RealizationKind::semidirect, "multiply");
  Vector ka = factor_part(a);
  return from_parts(trans_part(a) + rho(ka) * trans_part(b), ka + factor_part(b));
}

GroupElement SemidirectRealization::inverse(const GroupElement& a) const {
  require_kind(a, RealizationKind::semidirect, "inverse");
  Vector k = factor_part(a);
  return from_parts(-(rho(-k) * trans_part(a)), -k);
}

GroupElement SemidirectRealization::exp(const Vector& y) const {
  if (y.size() != m_n + factor_dim())
    throw ValidationError(m_name + ": algebra coordinate dimension mismatch");
  Vector yk = y.tail(factor_dim());
  return from_parts(phi1(w_of(yk)) * y.head(m_n), yk);
}

Vector SemidirectRealization::log(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "log");
  Vector k = factor_part(g);
  Matrix ph = phi1(w_of(k));
  Eigen::FullPivLU<Matrix> lu(ph);
  if (!lu.isInvertible())
    throw ChartError(m_name + ": logarithm undefined, the factor parameter is a conjugate point");
  Vector y(m_n + factor_dim());
  y.head(m_n) = lu.solve(trans_part(g));
  y.tail(factor_dim()) = k;
  return y;
}

double SemidirectRealization::gauge(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "gauge");
  // Stored factor coordinates are already wrapped, so this is the arc metric.
  return g.coords.norm();
}

double SemidirectRealization::distance(const GroupElement& a, const GroupElement& b) const {
  require_kind(a, RealizationKind::semidirect, "distance");
  require_kind(b, RealizationKind::semidirect, "distance");
  Vector dv = trans_part(a) - trans_part(b);
  Vector dk = wrap_factor(factor_part(a) - factor_part(b));
  return std::sqrt(dv.squaredNorm() + dk.squaredNorm());
}

Matrix SemidirectRealization::Ad(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "Ad");
  const Index p = factor_dim();
  Vector v = trans_part(g);
  Matrix out = Matrix::Zero(m_n + p, m_n + p);
  out.topLeftCorner(m_n, m_n) = rho(factor_part(g));
  for (Index a = 0; a < p; ++a)
    out.block(0, m_n + a, m_n, 1) = -(m_action[static_cast<std::size_t>(a)] * v);
  out.bottomRightCorner(p, p).setIdentity();
  return out;
}

Index SemidirectRealization::chart_dim() const { return m_n + factor_dim(); }

Vector SemidirectRealization::chart_state(const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "chart_state");
  return g.coords;
}

GroupElement SemidirectRealization::element_from_chart(const Vector& state) const {
  if (state.size() != m_n + factor_dim())
    throw ValidationError(m_name + ": chart state dimension mismatch");
  return from_parts(state.head(m_n), state.tail(factor_dim()));
}

void SemidirectRealization::split_derivation(const Matrix& d, Matrix& d_trans,
                                             Matrix& d_mixed) const {
  const Index p = factor_dim();
  if (d.rows() != m_n + p || d.cols() != m_n + p)
    throw ValidationError(m_name + ": derivation dimension mismatch");
  if (p > 0 && d.bottomRows(p).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError(m_name + ": derivations must annihilate the factor coordinates");
  d_trans = d.topLeftCorner(m_n, m_n);
  d_mixed = d.topRightCorner(m_n, p);
  for (Index a = 0; a < p; ++a)
    if (m_angle[static_cast<std::size_t>(a)] && p > 0 && m_n > 0 &&
        d_mixed.col(a).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError(m_name + ": derivation mixes a periodic coordinate into translations");
}

void SemidirectRealization::chart_drift_field(const Matrix& d, const Vector& state,
                                              Vector& out) const {
  const Index p = factor_dim();
  if (d.rows() != m_n + p || d.cols() != m_n + p)
    throw ValidationError(m_name + ": derivation dimension mismatch");
  if (p > 0 && d.bottomRows(p).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError(m_name + ": derivation moves the factor coordinates");
  out.resize(m_n + p);
  out.head(m_n).noalias() = d.topLeftCorner(m_n, m_n) * state.head(m_n);
  // phi1 is an expm under the hood, so skip it on the common pure-block
  // diagonal case instead of paying for it at every integrator stage.
  if (p > 0 && d.topRightCorner(m_n, p).cwiseAbs().maxCoeff() > 0.0) {
    Vector k = state.tail(p);
    out.head(m_n).noalias() += phi1(w_of(k)) * (d.topRightCorner(m_n, p) * k);
  }
  out.tail(p).setZero();
}

void SemidirectRealization::chart_control_field(const Vector& state, const Vector& u,
                                                Vector& out) const {
  const Index p = factor_dim();
  out.resize(m_n + p);
  out.head(m_n) = u.head(m_n) + w_of(u.tail(p)) * state.head(m_n);
  out.tail(p) = u.tail(p);
}

GroupElement SemidirectRealization::drift_automorphism(const Matrix& d, double t,
                                                       const GroupElement& g) const {
  require_kind(g, RealizationKind::semidirect, "drift_automorphism");
  const Index p = factor_dim();
  Matrix d_trans, d_mixed;
  split_derivation(d, d_trans, d_mixed);
  Matrix full = Matrix::Zero(m_n + p, m_n + p);
  full.topLeftCorner(m_n, m_n) = d_trans;
  full.topRightCorner(m_n, p) = d_mixed;
  Matrix flow = expm(t * full);
  Vector k = factor_part(g);
  Vector v = flow.topLeftCorner(m_n, m_n) * trans_part(g);
  if (p > 0) v += phi1(w_of(k)) * (flow.topRightCorner(m_n, p) * k);
  return from_parts(v, k);
}

} // namespace lcs
