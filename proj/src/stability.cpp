#include "lcs/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "lcs/errors.hpp"
#include "lcs/expm.hpp"
#include "lcs/parallel.hpp"

namespace lcs {

const char* to_string(InternalVerdict v) {
  switch (v) {
    case InternalVerdict::asymptotically_stable: return "asymptotically_stable";
    case InternalVerdict::stable: return "stable";
    case InternalVerdict::unstable: return "unstable";
    case InternalVerdict::undetermined: return "undetermined";
  }
  return "unknown";
}

const char* to_string(BiboVerdict v) {
  switch (v) {
    case BiboVerdict::bibo_stable: return "bibo_stable";
    case BiboVerdict::not_bibo_stable: return "not_bibo_stable";
    case BiboVerdict::undetermined: return "undetermined";
  }
  return "unknown";
}

bool restricted_ellipticity(const LieAlgebra& alg, const Matrix& d) {
  DynamicalSplitting split = dynamical_split(d);
  if (split.zero.is_trivial()) return true;
  const Matrix& b = split.zero.basis();
  (void)alg;
  return classify_operator(b.transpose() * d * b) == OperatorClass::elliptic;
}

InternalStabilityReport classify_internal(const LieAlgebra& alg, const Matrix& d) {
  if (!alg.is_derivation(d, 1e-8))
    throw ValidationError("classify_internal: operator is not a derivation");
  DynamicalSplitting split = dynamical_split(d);

  InternalStabilityReport report;
  report.dim_plus = split.plus.dim();
  report.dim_zero = split.zero.dim();
  report.dim_minus = split.minus.dim();
  if (!split.zero.is_trivial()) {
    const Matrix& b = split.zero.basis();
    report.restriction_class = classify_operator(b.transpose() * d * b);
  }

  if (report.dim_plus > 0) {
    report.verdict = InternalVerdict::unstable;
    report.reason = "expanding subalgebra nontrivial";
  } else if (report.dim_zero > 0 && report.restriction_class != OperatorClass::elliptic) {
    report.verdict = InternalVerdict::unstable;
    report.reason = "critical restriction not elliptic";
  } else if (report.dim_minus == alg.dim()) {
    report.verdict = InternalVerdict::asymptotically_stable;
    report.reason = "derivation spectrum strictly contracting";
  } else {
    report.verdict = InternalVerdict::stable;
    report.reason = "contracting part plus elliptic critical restriction";
  }
  return report;
}

bool is_fixed(const LCSSpec& spec, const GroupElement& g) {
  for (int k = 1; k <= 20; ++k) {
    double t = 0.5 * k;
    if (spec.realization->distance(drift_flow(spec, t, g), g) >= 1e-8) return false;
  }
  return true;
}

bool is_recurrent_algebraic(const LieAlgebra& alg, const Matrix& d, const Vector& y) {
  if (y.size() != alg.dim()) throw ValidationError("recurrence test: coordinate dimension mismatch");
  JordanDecomposition jd = jordan_decompose(d);
  double scale = std::max(1.0, y.norm());
  return (jd.hyperbolic * y).norm() <= 1e-9 * scale && (jd.nilpotent * y).norm() <= 1e-9 * scale;
}

namespace {

// Basis change putting the elliptic restriction into rotation planes: the
// returned gram makes exp(t E) an exact isometry.
Matrix plane_adapted_gram(const Matrix& e_minus) {
  const Index q = e_minus.rows();
  Eigen::ComplexEigenSolver<CMatrix> es(e_minus.cast<Complex>());
  if (es.info() != Eigen::Success)
    throw NumericalError("adapted metric: eigenvalue iteration failed on the elliptic part");
  Matrix p(q, q);
  std::vector<bool> used(static_cast<std::size_t>(q), false);
  Index col = 0;
  for (Index j = 0; j < q; ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    Complex lam = es.eigenvalues()(j);
    if (std::abs(lam.imag()) <= 1e-9) {
      Vector re = es.eigenvectors().col(j).real();
      if (re.norm() < 1e-12) re = es.eigenvectors().col(j).imag();
      p.col(col++) = re.normalized();
      used[static_cast<std::size_t>(j)] = true;
      continue;
    }
    Index partner = -1;
    double best = 1e-7;
    for (Index k = j + 1; k < q; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      double gap = std::abs(es.eigenvalues()(k) - std::conj(lam));
      if (gap < best) {
        best = gap;
        partner = k;
      }
    }
    if (partner < 0)
      throw NumericalError("adapted metric: unpaired complex eigenvalue in the elliptic part");
    Vector re = es.eigenvectors().col(j).real();
    Vector im = es.eigenvectors().col(j).imag();
    double scale = std::max(re.norm(), im.norm());
    p.col(col++) = re / scale;
    p.col(col++) = im / scale;
    used[static_cast<std::size_t>(j)] = true;
    used[static_cast<std::size_t>(partner)] = true;
  }
  if (col != q) throw NumericalError("adapted metric: invariant plane basis incomplete");
  Eigen::FullPivLU<Matrix> lu(p);
  if (!lu.isInvertible())
    throw NumericalError("adapted metric: invariant plane basis is singular");
  Matrix pinv = lu.inverse();
  Matrix gram = pinv.transpose() * pinv;
  return 0.5 * (gram + gram.transpose());
}

} // namespace

AdaptedMetric build_adapted_metric(const LieAlgebra& alg, const Matrix& d,
                                   const std::vector<Vector>& torus_generators, int grid_points) {
  if (grid_points < 2) throw ValidationError("adapted metric: grid must have at least two points");
  JordanDecomposition jd = jordan_decompose(d);
  DynamicalSplitting split = dynamical_split(jd, d);
  if (split.minus.is_trivial())
    throw ValidationError("adapted metric: the contracting subspace is trivial");

  AdaptedMetric metric;
  metric.grid_points = grid_points;
  metric.basis_minus = split.minus.basis();
  const Matrix& b = metric.basis_minus;
  const Index q = b.cols();

  // Generators must be period-2pi circles acting on the contracting subspace.
  std::vector<Matrix> restricted;
  for (const Vector& w : torus_generators) {
    if (w.size() != alg.dim())
      throw ValidationError("adapted metric: torus generator dimension mismatch");
    Matrix ad_w = alg.ad(w);
    if ((expm(2.0 * M_PI * ad_w) - Matrix::Identity(alg.dim(), alg.dim())).norm() > 1e-8)
      throw ValidationError("adapted metric: torus generators must be period-2pi circles");
    double leak = 0.0;
    for (Index j = 0; j < q; ++j) leak = std::max(leak, split.minus.distance(ad_w * b.col(j)));
    if (leak > 1e-8)
      throw ValidationError("adapted metric: torus action does not preserve the contracting subspace");
    restricted.push_back(b.transpose() * ad_w * b);
  }
  for (std::size_t i = 0; i < restricted.size(); ++i)
    for (std::size_t j = i + 1; j < restricted.size(); ++j)
      if ((restricted[i] * restricted[j] - restricted[j] * restricted[i]).norm() > 1e-8)
        throw ValidationError("adapted metric: torus generators must commute");

  Matrix e_minus = b.transpose() * jd.elliptic * b;
  metric.initial_gram = plane_adapted_gram(e_minus);

  // Equal-weight average over the product grid; on a periodic integrand this
  // is the trapezoid rule, so doubling the grid certifies convergence.
  auto average = [&](int n_grid) {
    if (restricted.empty()) return metric.initial_gram;
    std::vector<std::vector<Matrix>> tables;
    for (const Matrix& r : restricted) {
      std::vector<Matrix> table(static_cast<std::size_t>(n_grid));
      Matrix step = expm((2.0 * M_PI / n_grid) * r);
      table[0] = Matrix::Identity(q, q);
      for (int k = 1; k < n_grid; ++k) table[static_cast<std::size_t>(k)] = table[k - 1] * step;
      tables.push_back(std::move(table));
    }
    Matrix sum = Matrix::Zero(q, q);
    std::vector<int> idx(tables.size(), 0);
    std::size_t total = 1;
    for (std::size_t f = 0; f < tables.size(); ++f) total *= static_cast<std::size_t>(n_grid);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      Matrix a = Matrix::Identity(q, q);
      for (std::size_t f = 0; f < tables.size(); ++f) {
        a = a * tables[f][rem % static_cast<std::size_t>(n_grid)];
        rem /= static_cast<std::size_t>(n_grid);
      }
      sum += a.transpose() * metric.initial_gram * a;
    }
    Matrix avg = sum / static_cast<double>(total);
    return Matrix(0.5 * (avg + avg.transpose()));
  };

  metric.gram = average(grid_points);
  metric.doubling_residual = (average(2 * grid_points) - metric.gram).norm();

  for (const Matrix& r : restricted)
    for (double theta : {0.37, 1.91, 4.11}) {
      Matrix a = expm(theta * r);
      metric.invariance_residual =
          std::max(metric.invariance_residual, (a.transpose() * metric.gram * a - metric.gram).norm());
    }
  for (double t : {0.5, 1.25, 3.0}) {
    Matrix iso = b.transpose() * expm(t * jd.elliptic) * b;
    metric.isometry_residual =
        std::max(metric.isometry_residual, (iso.transpose() * metric.gram * iso - metric.gram).norm());
  }
  return metric;
}

HomomorphismSpec::HomomorphismSpec(std::string name,
                                   std::shared_ptr<const GroupRealization> source,
                                   std::shared_ptr<const GroupRealization> target, Matrix matrix,
                                   bool image_g0_compact_declared)
    : m_name(std::move(name)),
      m_source(std::move(source)),
      m_target(std::move(target)),
      m_matrix(std::move(matrix)),
      m_image_g0_compact_declared(image_g0_compact_declared) {
  if (!m_source || !m_target) throw ValidationError(m_name + ": source and target are required");
  const LieAlgebra& src = m_source->algebra();
  const LieAlgebra& tgt = m_target->algebra();
  if (m_matrix.rows() != tgt.dim() || m_matrix.cols() != src.dim())
    throw ValidationError(m_name + ": homomorphism matrix shape mismatch");
  for (Index i = 0; i < src.dim(); ++i)
    for (Index j = i + 1; j < src.dim(); ++j) {
      Vector lhs = m_matrix * src.bracket(Vector::Unit(src.dim(), i), Vector::Unit(src.dim(), j));
      Vector rhs = tgt.bracket(m_matrix * Vector::Unit(src.dim(), i).eval(),
                               m_matrix * Vector::Unit(src.dim(), j).eval());
      m_residual = std::max(m_residual, (lhs - rhs).norm());
    }
  if (m_residual > 1e-9)
    throw ValidationError(m_name + ": matrix is not a Lie algebra homomorphism (residual " +
                          std::to_string(m_residual) + ")");
}

GroupElement HomomorphismSpec::push(const GroupElement& g) const {
  bool is_identity = m_matrix.rows() == m_matrix.cols() &&
                     (m_matrix - Matrix::Identity(m_matrix.rows(), m_matrix.cols())).norm() <= 1e-12;
  if (is_identity && m_source->kind() == m_target->kind()) return g;
  if (m_source->has_chart() && m_target->has_chart())
    return m_target->exp(m_matrix * m_source->log(g));
  throw ValidationError(m_name + ": pushforward not supported for this realization pair");
}

Subspace HomomorphismSpec::kernel() const {
  return Subspace::span(m_matrix.cols(), nullspace(m_matrix));
}

ConjugationReport check_conjugation(const HomomorphismSpec& hom, const Matrix& d_source,
                                    const Matrix& d_target) {
  ConjugationReport report;
  const Matrix& f = hom.matrix();
  report.intertwine_residual = (f * d_source - d_target * f).norm();
  report.intertwines = report.intertwine_residual <= 1e-9;

  DynamicalSplitting ss = dynamical_split(d_source);
  DynamicalSplitting ts = dynamical_split(d_target);
  Subspace image = Subspace::span(f.rows(), f);
  auto part_residual = [&](const Subspace& s_part, const Subspace& t_part) {
    Subspace pushed = Subspace::span(f.rows(), f * s_part.basis());
    Subspace expected = subspace_intersection(t_part, image);
    double forward = expected.containment_residual(pushed);
    double backward = pushed.containment_residual(expected);
    return std::max(forward, backward);
  };
  report.image_residual = std::max({part_residual(ss.plus, ts.plus),
                                    part_residual(ss.zero, ts.zero),
                                    part_residual(ss.minus, ts.minus)});
  report.images_match = report.image_residual <= 1e-8;
  return report;
}

BiboReport classify_bibo(const LCSSpec& spec, const HomomorphismSpec& hom) {
  BiboReport report;
  const Matrix d = induced_derivation(spec);
  Subspace ker = hom.kernel();

  double invariance = 0.0;
  for (Index j = 0; j < ker.dim(); ++j)
    invariance = std::max(invariance, ker.distance(d * ker.basis().col(j)));
  report.kernel_invariant = invariance <= 1e-9;
  if (!report.kernel_invariant) {
    report.verdict = BiboVerdict::undetermined;
    report.compactness_provenance = "kernel not invariant";
    return report;
  }

  DynamicalSplitting split = dynamical_split(d);
  double worst = 0.0;
  Index worst_col = -1;
  for (Index j = 0; j < split.plus.dim(); ++j) {
    double dist = ker.distance(split.plus.basis().col(j));
    if (dist > worst) {
      worst = dist;
      worst_col = j;
    }
  }
  report.gplus_in_kernel = worst <= 1e-8;
  if (!report.gplus_in_kernel) {
    report.verdict = BiboVerdict::not_bibo_stable;
    report.witness = split.plus.basis().col(worst_col);
    report.compactness_provenance = "expanding image nontrivial";
    return report;
  }

  const LieAlgebra& tgt = hom.target().algebra();
  Subspace image_g0 = Subspace::span(tgt.dim(), hom.matrix() * split.zero.basis());
  report.image_g0_zero = image_g0.is_trivial();
  if (report.image_g0_zero) {
    report.verdict = BiboVerdict::bibo_stable;
    report.compactness_provenance = "critical image trivial";
    return report;
  }

  std::vector<Vector> generators;
  for (Index j = 0; j < image_g0.dim(); ++j) generators.push_back(image_g0.basis().col(j));
  InvariantSubalgebraResult closure =
      smallest_invariant_subalgebra(tgt, Matrix::Zero(tgt.dim(), tgt.dim()), generators);
  LieAlgebra generated = tgt.restrict_to(closure.subspace, "critical image closure");
  report.image_g0_compact = is_compact_type(generated);

  bool compact_computed =
      report.image_g0_compact.classification == CompactType::compact_semisimple_mod_center;
  if (compact_computed && hom.image_g0_compact_declared()) {
    report.verdict = BiboVerdict::bibo_stable;
    report.compactness_provenance = "computed+declared";
  } else if (compact_computed) {
    report.verdict = BiboVerdict::undetermined;
    report.compactness_provenance = "declared missing";
  } else {
    report.verdict = BiboVerdict::undetermined;
    report.compactness_provenance = "critical image not compact type";
  }
  return report;
}

BiboCrosscheck bibo_simulation_crosscheck(const LCSSpec& spec, const HomomorphismSpec& hom,
                                          std::uint64_t seed, int probes, double horizon) {
  BiboCrosscheck cross;
  cross.probes = probes;
  cross.algebraic = classify_bibo(spec, hom).verdict;

  const GroupRealization& target = hom.target();
  GroupElement id = spec.realization->identity();
  std::vector<int> verdicts(static_cast<std::size_t>(probes), 0);
  parallel_for(static_cast<std::size_t>(probes), [&](std::size_t i) {
    Rng rng = Rng::split(seed, i);
    double h = horizon;
    int pieces = 8;
    Boundedness b = Boundedness::inconclusive;
    // An inconclusive curve gets a longer look before it counts against the
    // verdict: the record test needs burn-in, and doubling the horizon twice
    // settles every recurrent curve in the catalog.
    for (int attempt = 0; attempt < 3 && b == Boundedness::inconclusive; ++attempt) {
      ControlSignal u = sample_control(rng, spec.omega, h, pieces, 0.5);
      IntegrateOptions opts;
      opts.dt_out = 0.5;
      Trajectory traj = integrate(spec, id, u, h, opts);
      std::vector<double> pushed_gauges(traj.points.size());
      for (std::size_t k = 0; k < traj.points.size(); ++k)
        pushed_gauges[k] = target.gauge(hom.push(traj.points[k]));
      b = classify_gauge_curve(traj.times, pushed_gauges).verdict;
      h *= 2.0;
      pieces *= 2;
    }
    verdicts[i] = b == Boundedness::bounded ? 1 : (b == Boundedness::unbounded ? 2 : 0);
  });
  for (int v : verdicts) {
    if (v == 1) ++cross.bounded;
    else if (v == 2) ++cross.unbounded;
    else ++cross.inconclusive;
  }

  switch (cross.algebraic) {
    case BiboVerdict::bibo_stable: cross.agrees = cross.bounded == cross.probes; break;
    case BiboVerdict::not_bibo_stable: cross.agrees = cross.unbounded > 0; break;
    case BiboVerdict::undetermined: cross.agrees = true; break;
  }
  return cross;
}

} // namespace lcs
