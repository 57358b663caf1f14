#ifndef LCS_GROUP_HPP
#define LCS_GROUP_HPP

#include <memory>
#include <string>
#include <vector>

#include "lcs/dense.hpp"
#include "lcs/lie_algebra.hpp"

namespace lcs {

enum class RealizationKind { matrix_inner, exp_coordinates, semidirect };

const char* to_string(RealizationKind k);

/// Group-level facts that are declared rather than computed from structure
/// constants. Declared flags are reported with "declared" provenance.
struct GroupMetadata {
  bool is_solvable = false;
  bool is_nilpotent = false;
  bool g0_compact_declared = false;
  bool toral_component_trivial = true;
  /// G = G^- G^{+,0} holds but is not certified by solvability or global
  /// coordinates (e.g. a dense product-coordinate cover).
  bool decomposable_declared = false;
};

/// Element of a realized group. The payload depends on the realization kind:
/// a representation matrix, or chart coordinates.
struct GroupElement {
  RealizationKind kind = RealizationKind::exp_coordinates;
  Matrix mat;    // matrix_inner
  Vector coords; // exp_coordinates: algebra coordinates; semidirect: (v, k)
};

/// Wraps to (-pi, pi].
double wrap_angle(double a);

/// A concrete group carrying the algebra plus enough structure to multiply
/// elements, move through exp/log, and measure distance to the identity.
class GroupRealization {
public:
  virtual ~GroupRealization() = default;

  virtual RealizationKind kind() const = 0;
  const LieAlgebra& algebra() const { return m_algebra; }
  const GroupMetadata& metadata() const { return m_metadata; }
  const std::string& name() const { return m_name; }

  virtual GroupElement identity() const = 0;
  virtual GroupElement multiply(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;

  virtual GroupElement exp(const Vector& y) const = 0;
  /// Principal logarithm; throws ChartError outside the chart domain.
  virtual Vector log(const GroupElement& g) const = 0;

  /// Distance to the identity in the realization's gauge.
  virtual double gauge(const GroupElement& g) const = 0;
  virtual double distance(const GroupElement& a, const GroupElement& b) const = 0;

  /// Matrix of Ad(g) on the algebra.
  virtual Matrix Ad(const GroupElement& g) const = 0;

  GroupElement conjugate(const GroupElement& g, const GroupElement& h) const;

  /// Chart kinds (exp_coordinates, semidirect) expose a global coordinate
  /// vector the one-step integrator works on.
  virtual bool has_chart() const = 0;
  virtual Index chart_dim() const;
  virtual Vector chart_state(const GroupElement& g) const;
  virtual GroupElement element_from_chart(const Vector& state) const;
  /// Chart velocity of the drift automorphism generated by derivation d.
  virtual void chart_drift_field(const Matrix& d, const Vector& state, Vector& out) const;
  /// Chart velocity of the right-invariant field of algebra vector u.
  virtual void chart_control_field(const Vector& state, const Vector& u, Vector& out) const;

  /// Flow of the drift automorphism with differential e^{tD}.
  virtual GroupElement drift_automorphism(const Matrix& d, double t, const GroupElement& g) const = 0;

protected:
  GroupRealization(std::string name, LieAlgebra algebra, GroupMetadata metadata)
      : m_name(std::move(name)), m_algebra(std::move(algebra)), m_metadata(metadata) {}

  std::string m_name;
  LieAlgebra m_algebra;
  GroupMetadata m_metadata;
};

/// Linear matrix group; the drift automorphism is conjugation by e^{t X0},
/// so only inner derivations integrate here.
class MatrixInnerRealization final : public GroupRealization {
public:
  /// `images[i]` is the representation matrix of basis vector e_i. The map is
  /// validated as an algebra isomorphism onto its image.
  MatrixInnerRealization(std::string name, LieAlgebra algebra, GroupMetadata metadata,
                         std::vector<Matrix> images);

  RealizationKind kind() const override { return RealizationKind::matrix_inner; }
  Index rep_dim() const { return m_rep_dim; }

  Matrix embed(const Vector& y) const;
  /// Coordinates of a representation matrix; throws ChartError when the
  /// matrix is not in the embedded image.
  Vector unembed(const Matrix& m) const;

  GroupElement from_matrix(const Matrix& m) const;

  GroupElement identity() const override;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  GroupElement exp(const Vector& y) const override;
  Vector log(const GroupElement& g) const override;
  double gauge(const GroupElement& g) const override;
  double distance(const GroupElement& a, const GroupElement& b) const override;
  Matrix Ad(const GroupElement& g) const override;
  bool has_chart() const override { return false; }
  GroupElement drift_automorphism(const Matrix& d, double t, const GroupElement& g) const override;

  /// Solves ad(x0) = d in the least-squares sense; throws ValidationError when
  /// d is not inner (residual above tol).
  Vector inner_vector_for(const Matrix& d, double tol = 1e-8) const;

private:
  Index m_rep_dim = 0;
  std::vector<Matrix> m_images;
  Eigen::CompleteOrthogonalDecomposition<Matrix> m_unembed_solver;
  Matrix m_image_stack; // rep_dim^2 x dim, column i = vec(images[i])
};

/// Simply connected nilpotent group in exponential coordinates of the first
/// kind. Products use the closed Baker-Campbell-Hausdorff sum, exact up to
/// nilpotency class 4.
class ExpCoordinatesRealization final : public GroupRealization {
public:
  ExpCoordinatesRealization(std::string name, LieAlgebra algebra, GroupMetadata metadata);

  RealizationKind kind() const override { return RealizationKind::exp_coordinates; }

  GroupElement identity() const override;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  GroupElement exp(const Vector& y) const override;
  Vector log(const GroupElement& g) const override;
  double gauge(const GroupElement& g) const override;
  double distance(const GroupElement& a, const GroupElement& b) const override;
  Matrix Ad(const GroupElement& g) const override;
  bool has_chart() const override { return true; }
  Index chart_dim() const override;
  Vector chart_state(const GroupElement& g) const override;
  GroupElement element_from_chart(const Vector& state) const override;
  void chart_drift_field(const Matrix& d, const Vector& state, Vector& out) const override;
  void chart_control_field(const Vector& state, const Vector& u, Vector& out) const override;
  GroupElement drift_automorphism(const Matrix& d, double t, const GroupElement& g) const override;

  Vector bch(const Vector& x, const Vector& y) const;
  /// dexp^{-1}_y applied to xi (finite Bernoulli sum on nilpotent algebras).
  Vector dexpinv(const Vector& y, const Vector& xi) const;

private:
  int m_class = 1;
};

/// R^n semidirect an abelian factor K acting by commuting one-parameter
/// groups exp(k_i M_i); K coordinates are angles (mod 2pi) or lines.
/// Basis convention: translations e_1..e_n first, then the K generators.
class SemidirectRealization final : public GroupRealization {
public:
  SemidirectRealization(std::string name, LieAlgebra algebra, GroupMetadata metadata,
                        Index trans_dim, std::vector<bool> angle_flags,
                        std::vector<Matrix> action);

  RealizationKind kind() const override { return RealizationKind::semidirect; }
  Index trans_dim() const { return m_n; }
  Index factor_dim() const { return static_cast<Index>(m_angle.size()); }
  const std::vector<bool>& angle_flags() const { return m_angle; }
  const std::vector<Matrix>& action() const { return m_action; }

  /// rho(k) = exp(sum k_i M_i).
  Matrix rho(const Vector& k) const;

  GroupElement from_parts(const Vector& v, const Vector& k) const;
  Vector trans_part(const GroupElement& g) const;
  Vector factor_part(const GroupElement& g) const;

  GroupElement identity() const override;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  GroupElement exp(const Vector& y) const override;
  Vector log(const GroupElement& g) const override;
  double gauge(const GroupElement& g) const override;
  double distance(const GroupElement& a, const GroupElement& b) const override;
  Matrix Ad(const GroupElement& g) const override;
  bool has_chart() const override { return true; }
  Index chart_dim() const override;
  Vector chart_state(const GroupElement& g) const override;
  GroupElement element_from_chart(const Vector& state) const override;
  void chart_drift_field(const Matrix& d, const Vector& state, Vector& out) const override;
  void chart_control_field(const Vector& state, const Vector& u, Vector& out) const override;
  GroupElement drift_automorphism(const Matrix& d, double t, const GroupElement& g) const override;

  /// Splits a derivation into its blocks; throws ValidationError when the
  /// K-factor rows are nonzero (no such derivation integrates here).
  void split_derivation(const Matrix& d, Matrix& d_trans, Matrix& d_mixed) const;

private:
  Vector wrap_factor(const Vector& k) const;
  Matrix w_of(const Vector& k) const; // sum k_i M_i

  Index m_n = 0;
  std::vector<bool> m_angle;
  std::vector<Matrix> m_action;
};

} // namespace lcs

#endif
