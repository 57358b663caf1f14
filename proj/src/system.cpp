#include "lcs/system.hpp"

#include <cmath>

#include "lcs/errors.hpp"
#include "lcs/expm.hpp"

namespace lcs {

namespace {

Vector vec_of(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// Oblique projector onto the minus subspace along the rest of the splitting,
// returned as a coefficient map y -> coordinates of the minus component in
// the orthonormal minus basis.
Matrix minus_coefficient_map(const DynamicalSplitting& split) {
  const Index n = split.minus.parent_dim();
  Matrix columns(n, n);
  Index col = 0;
  for (const Subspace* s : {&split.minus, &split.zero, &split.plus})
    for (Index j = 0; j < s->dim(); ++j) columns.col(col++) = s->basis().col(j);
  if (col != n) throw NumericalError("splitting subspaces do not span the algebra");
  return columns.partialPivLu().inverse().topRows(split.minus.dim());
}

} // namespace

void LCSSpec::validate() const {
  if (!realization) throw ValidationError(name + ": realization is required");
  const LieAlgebra& alg = realization->algebra();
  omega.validate();
  if (static_cast<Index>(controls.size()) != omega.dim())
    throw ValidationError(name + ": one control direction per omega channel required");
  for (const Vector& y : controls)
    if (y.size() != alg.dim())
      throw ValidationError(name + ": control direction dimension mismatch");

  if (drift.kind == DriftKind::inner) {
    if (drift.inner_vector.size() != alg.dim())
      throw ValidationError(name + ": inner drift vector dimension mismatch");
  } else {
    if (drift.derivation.rows() != alg.dim() || drift.derivation.cols() != alg.dim())
      throw ValidationError(name + ": drift derivation dimension mismatch");
    if (!alg.is_derivation(drift.derivation, 1e-8))
      throw ValidationError(name + ": drift matrix is not a derivation (residual " +
                            std::to_string(alg.derivation_residual(drift.derivation)) + ")");
    if (realization->kind() == RealizationKind::matrix_inner)
      resolved_inner_vector(*this); // throws when the derivation is not inner
    if (auto* semi = dynamic_cast<const SemidirectRealization*>(realization.get())) {
      Matrix d_trans, d_mixed;
      semi->split_derivation(drift.derivation, d_trans, d_mixed);
    }
  }
  for (const Vector& y : g0_torus)
    if (y.size() != alg.dim())
      throw ValidationError(name + ": torus generator dimension mismatch");
}

Matrix induced_derivation(const LCSSpec& spec) {
  if (spec.drift.kind == DriftKind::inner) return spec.algebra().ad(spec.drift.inner_vector);
  return spec.drift.derivation;
}

Vector resolved_inner_vector(const LCSSpec& spec) {
  if (spec.drift.kind == DriftKind::inner) return spec.drift.inner_vector;
  const LieAlgebra& alg = spec.algebra();
  const Index n = alg.dim();
  Matrix ad_stack(n * n, n);
  for (Index i = 0; i < n; ++i) ad_stack.col(i) = vec_of(alg.ad(Vector::Unit(n, i)));
  Vector rhs = vec_of(spec.drift.derivation);
  Vector x0 = ad_stack.completeOrthogonalDecomposition().solve(rhs);
  double residual = (ad_stack * x0 - rhs).norm();
  if (residual > 1e-8 * std::max(1.0, rhs.norm()))
    throw ValidationError(spec.name + ": drift derivation is not inner (residual " +
                          std::to_string(residual) + ")");
  return x0;
}

LarcResult larc_check(const LCSSpec& spec) {
  InvariantSubalgebraResult inv =
      smallest_invariant_subalgebra(spec.algebra(), induced_derivation(spec), spec.controls);
  LarcResult result;
  result.achieved = inv.subspace;
  result.iterations = inv.iterations;
  result.satisfied = inv.subspace.is_full();
  return result;
}

GroupElement drift_flow(const LCSSpec& spec, double t, const GroupElement& g) {
  return spec.realization->drift_automorphism(induced_derivation(spec), t, g);
}

SubgroupMembership dynamical_subgroup_coords(const LCSSpec& spec, const GroupElement& g,
                                             double tol) {
  DynamicalSplitting split = dynamical_split(induced_derivation(spec));
  SubgroupMembership m;
  m.log_coords = spec.realization->log(g);
  m.in_plus = split.plus.contains(m.log_coords, tol);
  m.in_zero = split.zero.contains(m.log_coords, tol);
  m.in_minus = split.minus.contains(m.log_coords, tol);
  return m;
}

DecomposabilityReport check_decomposability(const LCSSpec& spec) {
  DecomposabilityReport report;
  report.algebra_splits = true; // dynamical_split certifies the direct sum or throws
  if (spec.realization->has_chart()) {
    report.route = DecomposabilityRoute::global_coordinates;
  } else if (spec.algebra().is_solvable()) {
    report.route = DecomposabilityRoute::solvable_computed;
  } else if (spec.realization->metadata().is_solvable || spec.realization->metadata().is_nilpotent ||
             spec.realization->metadata().decomposable_declared) {
    report.route = DecomposabilityRoute::declared_only;
  } else {
    report.route = DecomposabilityRoute::none;
  }
  report.group_decomposes = report.route != DecomposabilityRoute::none;
  return report;
}

MinusZeroFactors split_minus_zero(const LCSSpec& spec, const DynamicalSplitting& split,
                                  const GroupElement& g) {
  if (!split.plus.is_trivial())
    throw ValidationError(spec.name +
                          ": minus/zero factorization requires a trivial expanding part");
  const GroupRealization& group = *spec.realization;
  const LieAlgebra& alg = group.algebra();
  MinusZeroFactors out;

  if (split.minus.is_trivial()) {
    out.minus = group.identity();
    out.zero = g;
    out.minus_coords = Vector::Zero(0);
    Vector logc = group.log(g);
    if (split.zero.distance(logc) > 1e-8)
      throw ChartError(spec.name + ": element does not lie in the critical subgroup");
    return out;
  }

  if (auto* semi = dynamic_cast<const SemidirectRealization*>(&group)) {
    // The hyperbolic subspaces have zero factor components, so the minus
    // component is the spectral projection of the translation part.
    Matrix d_trans, d_mixed;
    semi->split_derivation(induced_derivation(spec), d_trans, d_mixed);
    Vector v = semi->trans_part(g);
    Vector k = semi->factor_part(g);
    Vector v_minus = Vector::Zero(semi->trans_dim());
    if (semi->trans_dim() > 0) {
      DynamicalSplitting tsplit = dynamical_split(d_trans);
      Matrix coeff = minus_coefficient_map(tsplit);
      v_minus = tsplit.minus.basis() * (coeff * v);
    }
    out.minus = semi->from_parts(v_minus, Vector::Zero(semi->factor_dim()));
    out.zero = group.multiply(group.inverse(out.minus), g);
    (void)k;
  } else {
    // Iterated correction: peel the contracting component off the logarithm.
    // Exact in at most (nilpotency class) steps on exponential charts; the
    // general matrix path iterates to tolerance.
    Matrix coeff = minus_coefficient_map(split);
    const Matrix& bm = split.minus.basis();
    GroupElement a = group.identity();
    bool converged = false;
    int max_iter = group.kind() == RealizationKind::exp_coordinates
                       ? alg.dim() + 1
                       : 64;
    for (int iter = 0; iter < max_iter; ++iter) {
      Vector y = group.log(group.multiply(group.inverse(a), g));
      Vector delta_coords = coeff * y;
      if (delta_coords.norm() <= 1e-12) {
        converged = true;
        break;
      }
      a = group.multiply(a, group.exp(bm * delta_coords));
    }
    if (!converged) {
      Vector y = group.log(group.multiply(group.inverse(a), g));
      if ((coeff * y).norm() > 1e-9)
        throw ChartError(spec.name + ": minus/zero factorization did not converge");
    }
    out.minus = a;
    out.zero = group.multiply(group.inverse(a), g);
  }

  Vector log_minus = group.log(out.minus);
  Vector log_zero = group.log(out.zero);
  if (split.minus.distance(log_minus) > 1e-8 || split.zero.distance(log_zero) > 1e-8)
    throw ChartError(spec.name + ": minus/zero factorization left the dynamical subgroups");
  out.minus_coords = split.minus.basis().transpose() * log_minus;
  return out;
}

} // namespace lcs
