#ifndef LCS_CONTROL_HPP
#define LCS_CONTROL_HPP

#include <vector>

#include "lcs/dense.hpp"
#include "lcs/rng.hpp"

namespace lcs {

/// Admissible value box: u_i in [-radii_i, radii_i], all radii positive so
/// zero is interior.
struct OmegaBox {
  Vector radii;

  Index dim() const { return radii.size(); }
  bool contains(const Vector& u, double tol = 1e-12) const;
  Vector vertex(std::uint64_t mask) const;
  void validate() const;
};

/// Piecewise-constant, right-continuous control: value m_values[i] holds on
/// [breakpoints[i], breakpoints[i+1]), the last value extends to +inf.
class ControlSignal {
public:
  ControlSignal() = default;
  static ControlSignal constant(const Vector& value);
  static ControlSignal zero(Index dim);
  /// breakpoints must start at 0 and increase strictly.
  static ControlSignal piecewise(std::vector<double> breakpoints, std::vector<Vector> values);

  Index dim() const;
  std::size_t num_pieces() const { return m_values.size(); }
  const std::vector<double>& breakpoints() const { return m_times; }
  const std::vector<Vector>& values() const { return m_values; }

  const Vector& value_at(double t) const;

  /// Time shift: result(t) = (*this)(t + s), s >= 0.
  ControlSignal shifted(double s) const;

  /// Concatenation: this on [0, t_switch), then other(t - t_switch).
  ControlSignal concatenated(double t_switch, const ControlSignal& other) const;

private:
  std::vector<double> m_times;
  std::vector<Vector> m_values;
};

/// Random control with `pieces` equal pieces on [0, horizon]. Each piece is a
/// vertex of the box with probability vertex_prob, otherwise uniform interior.
ControlSignal sample_control(Rng& rng, const OmegaBox& omega, double horizon, int pieces,
                             double vertex_prob = 0.5);

} // namespace lcs

#endif
