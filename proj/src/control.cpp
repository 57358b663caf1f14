#include "lcs/control.hpp"

#include <cmath>

#include "lcs/errors.hpp"

namespace lcs {

bool OmegaBox::contains(const Vector& u, double tol) const {
  if (u.size() != radii.size()) return false;
  for (Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) > radii(i) + tol) return false;
  return true;
}

Vector OmegaBox::vertex(std::uint64_t mask) const {
  Vector v(radii.size());
  for (Index i = 0; i < radii.size(); ++i)
    v(i) = (mask >> i) & 1u ? radii(i) : -radii(i);
  return v;
}

void OmegaBox::validate() const {
  if (radii.size() == 0) throw ValidationError("omega box: at least one control channel required");
  for (Index i = 0; i < radii.size(); ++i)
    if (!(radii(i) > 0.0))
      throw ValidationError("omega box: radii must be positive so zero is interior");
}

ControlSignal ControlSignal::constant(const Vector& value) {
  ControlSignal u;
  u.m_times = {0.0};
  u.m_values = {value};
  return u;
}

ControlSignal ControlSignal::zero(Index dim) { return constant(Vector::Zero(dim)); }

ControlSignal ControlSignal::piecewise(std::vector<double> breakpoints,
                                       std::vector<Vector> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw ValidationError("control: one value per breakpoint required");
  if (breakpoints.front() != 0.0) throw ValidationError("control: breakpoints must start at 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw ValidationError("control: breakpoints must increase strictly");
    if (values[i].size() != values[0].size())
      throw ValidationError("control: all values must share one dimension");
  }
  ControlSignal u;
  u.m_times = std::move(breakpoints);
  u.m_values = std::move(values);
  return u;
}

Index ControlSignal::dim() const { return m_values.empty() ? 0 : m_values[0].size(); }

const Vector& ControlSignal::value_at(double t) const {
  if (m_values.empty()) throw ValidationError("control: empty signal");
  std::size_t lo = 0;
  for (std::size_t i = m_times.size(); i-- > 0;)
    if (m_times[i] <= t) {
      lo = i;
      break;
    }
  return m_values[lo];
}

ControlSignal ControlSignal::shifted(double s) const {
  if (s < 0.0) throw ValidationError("control: shift must be nonnegative");
  if (m_values.empty()) throw ValidationError("control: empty signal");
  ControlSignal out;
  out.m_times.push_back(0.0);
  out.m_values.push_back(value_at(s));
  for (std::size_t i = 0; i < m_times.size(); ++i)
    if (m_times[i] > s) {
      out.m_times.push_back(m_times[i] - s);
      out.m_values.push_back(m_values[i]);
    }
  return out;
}

ControlSignal ControlSignal::concatenated(double t_switch, const ControlSignal& other) const {
  if (!(t_switch > 0.0)) throw ValidationError("control: switch time must be positive");
  if (other.dim() != dim()) throw ValidationError("control: concatenation dimension mismatch");
  ControlSignal out;
  for (std::size_t i = 0; i < m_times.size() && m_times[i] < t_switch; ++i) {
    out.m_times.push_back(m_times[i]);
    out.m_values.push_back(m_values[i]);
  }
  for (std::size_t i = 0; i < other.m_times.size(); ++i) {
    double t = other.m_times[i] + t_switch;
    if (!out.m_times.empty() && t <= out.m_times.back()) continue;
    out.m_times.push_back(t);
    out.m_values.push_back(other.m_values[i]);
  }
  return out;
}

ControlSignal sample_control(Rng& rng, const OmegaBox& omega, double horizon, int pieces,
                             double vertex_prob) {
  omega.validate();
  if (pieces < 1) throw ValidationError("control: at least one piece required");
  if (!(horizon > 0.0)) throw ValidationError("control: horizon must be positive");
  std::vector<double> times;
  std::vector<Vector> values;
  const Index m = omega.dim();
  for (int p = 0; p < pieces; ++p) {
    times.push_back(horizon * static_cast<double>(p) / pieces);
    if (rng.uniform01() < vertex_prob) {
      values.push_back(omega.vertex(rng.next_u64()));
    } else {
      Vector u(m);
      for (Index i = 0; i < m; ++i) u(i) = rng.uniform(-omega.radii(i), omega.radii(i));
      values.push_back(u);
    }
  }
  return ControlSignal::piecewise(std::move(times), std::move(values));
}

} // namespace lcs
