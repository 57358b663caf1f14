#include "lcs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lcs/errors.hpp"
#include "lcs/expm.hpp"
#include "lcs/parallel.hpp"
#include "lcs/stability.hpp"

namespace lcs {

namespace {

Vector combine_control(const LCSSpec& spec, const Vector& u) {
  Vector out = Vector::Zero(spec.algebra().dim());
  for (Index i = 0; i < u.size(); ++i) out += u(i) * spec.controls[static_cast<std::size_t>(i)];
  return out;
}

std::vector<double> output_grid(double t_final, double dt_out) {
  std::vector<double> times{0.0};
  const double rel = 1e-9 * std::max(1.0, t_final);
  for (std::size_t k = 1;; ++k) {
    double t = static_cast<double>(k) * dt_out;
    if (t > t_final + rel) break;
    times.push_back(std::min(t, t_final));
  }
  if (times.back() < t_final - rel) times.push_back(t_final);
  return times;
}

// Next control breakpoint strictly after t, or +inf.
double next_switch(const ControlSignal& u, double t) {
  for (double b : u.breakpoints())
    if (b > t + 1e-12) return b;
  return std::numeric_limits<double>::infinity();
}

Trajectory integrate_exact(const LCSSpec& spec, const GroupElement& g0, const ControlSignal& u,
                           const std::vector<double>& out_times) {
  const auto* realization = dynamic_cast<const MatrixInnerRealization*>(spec.realization.get());
  if (!realization)
    throw ValidationError(spec.name + ": exact piecewise integration needs a matrix realization");
  Matrix x0 = realization->embed(resolved_inner_vector(spec));

  Trajectory traj;
  GroupElement g = g0;
  traj.times.push_back(0.0);
  traj.points.push_back(g);
  traj.gauges.push_back(realization->gauge(g));

  double t = 0.0;
  for (std::size_t k = 1; k < out_times.size(); ++k) {
    double t_out = out_times[k];
    while (t < t_out - 1e-12) {
      double t_stop = std::min(t_out, next_switch(u, t));
      double h = t_stop - t;
      Matrix u_hat = realization->embed(combine_control(spec, u.value_at(t)));
      g.mat = expm(h * (x0 + u_hat)) * g.mat * expm(-h * x0);
      t = t_stop;
    }
    if (!all_finite(g.mat))
      throw NumericalError(spec.name + ": state overflow near t=" + std::to_string(t_out));
    traj.times.push_back(t_out);
    traj.points.push_back(g);
    traj.gauges.push_back(realization->gauge(g));
  }
  return traj;
}

Trajectory integrate_chart(const LCSSpec& spec, const GroupElement& g0, const ControlSignal& u,
                           const std::vector<double>& out_times, double dt_out) {
  const GroupRealization& group = *spec.realization;
  if (!group.has_chart())
    throw ValidationError(spec.name + ": one-step integration needs a chart realization");
  const Matrix d = induced_derivation(spec);
  const double h_cap = std::min(dt_out, kChartStepCap);

  Vector x = group.chart_state(g0);
  const Index q = x.size();
  Vector k1(q), k2(q), k3(q), k4(q), ctrl(q), probe(q);
  auto field = [&](const Vector& state, const Vector& u_alg, Vector& out) {
    group.chart_drift_field(d, state, out);
    group.chart_control_field(state, u_alg, ctrl);
    out += ctrl;
  };

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(g0);
  traj.gauges.push_back(group.gauge(g0));

  double t = 0.0;
  for (std::size_t out_idx = 1; out_idx < out_times.size(); ++out_idx) {
    double t_out = out_times[out_idx];
    while (t < t_out - 1e-12) {
      double t_stop = std::min(t_out, next_switch(u, t));
      Vector u_alg = combine_control(spec, u.value_at(t));
      double span = t_stop - t;
      int steps = std::max(1, static_cast<int>(std::ceil(span / h_cap - 1e-12)));
      double h = span / steps;
      for (int s = 0; s < steps; ++s) {
        field(x, u_alg, k1);
        probe = x + (0.5 * h) * k1;
        field(probe, u_alg, k2);
        probe = x + (0.5 * h) * k2;
        field(probe, u_alg, k3);
        probe = x + h * k3;
        field(probe, u_alg, k4);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = t_stop;
    }
    if (!x.allFinite())
      throw ChartError(spec.name + ": trajectory left the chart near t=" + std::to_string(t_out));
    traj.times.push_back(t_out);
    traj.points.push_back(group.element_from_chart(x));
    traj.gauges.push_back(group.gauge(traj.points.back()));
  }
  return traj;
}

} // namespace

double Trajectory::max_gauge() const {
  double m = 0.0;
  for (double g : gauges) m = std::max(m, g);
  return m;
}

Trajectory integrate(const LCSSpec& spec, const GroupElement& g0, const ControlSignal& u,
                     double t_final, const IntegrateOptions& options) {
  if (!(t_final > 0.0)) throw ValidationError(spec.name + ": integration horizon must be positive");
  if (!(options.dt_out > 0.0)) throw ValidationError(spec.name + ": output step must be positive");
  if (u.dim() != spec.omega.dim())
    throw ValidationError(spec.name + ": control channel count mismatch");

  IntegrationMethod method = options.method;
  if (method == IntegrationMethod::automatic)
    method = spec.realization->kind() == RealizationKind::matrix_inner
                 ? IntegrationMethod::exact_piecewise
                 : IntegrationMethod::rk4;

  std::vector<double> out_times = output_grid(t_final, options.dt_out);
  if (method == IntegrationMethod::exact_piecewise)
    return integrate_exact(spec, g0, u, out_times);
  return integrate_chart(spec, g0, u, out_times, options.dt_out);
}

CocycleCheckResult cocycle_check(const LCSSpec& spec, std::uint64_t seed, int draws) {
  CocycleCheckResult result;
  result.draws = draws;
  result.tolerance =
      spec.realization->kind() == RealizationKind::matrix_inner ? 1e-6 : 1e-4;
  const GroupRealization& group = *spec.realization;
  const Index n = spec.algebra().dim();

  std::vector<double> residuals(static_cast<std::size_t>(draws), 0.0);
  parallel_for(static_cast<std::size_t>(draws), [&](std::size_t i) {
    Rng rng = Rng::split(seed, i);
    double t = rng.uniform(0.5, 1.5);
    GroupElement g = group.exp(0.5 * rng.normal_vector(n));
    GroupElement h = group.exp(0.5 * rng.normal_vector(n));
    ControlSignal u = sample_control(rng, spec.omega, t, 4, 0.5);
    IntegrateOptions opts;
    opts.dt_out = t;
    GroupElement lhs = integrate(spec, group.multiply(g, h), u, t, opts).points.back();
    GroupElement from_g = integrate(spec, g, u, t, opts).points.back();
    GroupElement rhs = group.multiply(from_g, drift_flow(spec, t, h));
    residuals[i] = group.distance(lhs, rhs);
  });
  for (double r : residuals) result.max_residual = std::max(result.max_residual, r);
  result.passed = result.max_residual <= result.tolerance;
  return result;
}

ReachSample reach_sample(const LCSSpec& spec, std::uint64_t seed, const ReachSampleOptions& options,
                         const SampleObserver& observer) {
  const Index m = spec.omega.dim();
  std::vector<ControlSignal> controls;
  if (options.include_vertex_constants) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
      controls.push_back(ControlSignal::constant(spec.omega.vertex(mask)));
    controls.push_back(ControlSignal::zero(m));
  }
  const std::size_t base = controls.size();
  controls.resize(base + static_cast<std::size_t>(std::max(0, options.n_controls)));
  for (std::size_t i = base; i < controls.size(); ++i) {
    Rng rng = Rng::split(seed, i);
    controls[i] = sample_control(rng, spec.omega, options.horizon, options.pieces,
                                 options.vertex_prob);
  }

  ReachSample sample;
  sample.horizon = options.horizon;
  sample.controls_used = controls;
  sample.endpoints.resize(controls.size());
  sample.trajectory_max_gauge.assign(controls.size(), 0.0);

  GroupElement id = spec.realization->identity();
  IntegrateOptions opts;
  opts.dt_out = options.dt_out;
  parallel_for(controls.size(), [&](std::size_t i) {
    Trajectory traj = integrate(spec, id, controls[i], options.horizon, opts);
    if (observer)
      for (std::size_t k = 0; k < traj.times.size(); ++k)
        observer(i, traj.times[k], traj.points[k]);
    sample.endpoints[i] = traj.points.back();
    sample.trajectory_max_gauge[i] = traj.max_gauge();
  });
  for (double g : sample.trajectory_max_gauge) sample.max_gauge = std::max(sample.max_gauge, g);
  return sample;
}

TheoremMainBound theorem_main_bound(const LCSSpec& spec, std::uint64_t seed,
                                    const TheoremMainOptions& options) {
  const LieAlgebra& alg = spec.algebra();
  Matrix d = induced_derivation(spec);
  DynamicalSplitting split = dynamical_split(d);
  if (!split.plus.is_trivial())
    throw ValidationError(spec.name + ": orbit bound requires a trivial expanding subalgebra");
  if (split.minus.is_trivial())
    throw ValidationError(spec.name + ": orbit bound requires a nontrivial contracting subalgebra");
  bool zero_trivial = split.zero.is_trivial();
  if (!zero_trivial && !spec.realization->metadata().g0_compact_declared)
    throw ValidationError(spec.name + ": orbit bound requires a compact critical subgroup");

  TheoremMainBound bound;
  Matrix gram_split;
  if (zero_trivial || !spec.g0_torus.empty()) {
    AdaptedMetric metric = build_adapted_metric(alg, d, spec.g0_torus);
    // Change of basis: the metric reports its own orthonormal basis of the
    // contracting subspace, the splitting carries another.
    Matrix t = metric.basis_minus.transpose() * split.minus.basis();
    gram_split = t.transpose() * metric.gram * t;
    bound.metric = "adapted";
  } else {
    bound.metric = "euclidean";
  }

  ContractionConstants cc = gram_split.size() > 0 ? contraction_constants(split, d, gram_split)
                                                  : contraction_constants(split, d);
  bound.c = cc.c;
  bound.lambda = cc.lambda;

  ReachSampleOptions rs;
  rs.n_controls = options.k_samples;
  rs.pieces = options.k_pieces;
  rs.horizon = 1.0;
  rs.dt_out = options.k_dt_out;
  rs.include_vertex_constants = true;

  std::vector<std::vector<Vector>> per_traj;
  {
    // Observer writes only to its own trajectory slot, so worker order is
    // irrelevant to the collected set.
    std::size_t total = (std::size_t{1} << spec.omega.dim()) + 1 +
                        static_cast<std::size_t>(std::max(0, rs.n_controls));
    per_traj.assign(total, {});
    reach_sample(spec, seed, rs, [&](std::size_t idx, double, const GroupElement& g) {
      per_traj[idx].push_back(split_minus_zero(spec, split, g).minus_coords);
    });
  }

  std::vector<Vector> hull;
  for (const auto& coords : per_traj)
    for (const Vector& p : coords) hull.push_back(p);
  bound.hull_points = static_cast<int>(hull.size());

  Matrix gram_eff = gram_split.size() > 0
                        ? gram_split
                        : Matrix(Matrix::Identity(split.minus.dim(), split.minus.dim()));
  double diam = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      Vector diff = hull[i] - hull[j];
      diam = std::max(diam, std::sqrt(diff.dot(gram_eff * diff)));
    }
  bound.diam_K = diam;
  bound.R = diam / (cc.c * (1.0 - std::exp(-cc.lambda)));
  return bound;
}

const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::bounded: return "bounded";
    case Boundedness::unbounded: return "unbounded";
    case Boundedness::inconclusive: return "inconclusive";
  }
  return "unknown";
}

BoundednessVerdict classify_gauge_curve(const std::vector<double>& times,
                                        const std::vector<double>& gauges) {
  if (times.size() != gauges.size() || times.size() < 8)
    throw ValidationError("gauge classification needs at least eight samples");
  BoundednessVerdict verdict;

  // All tests grade the running maximum (the record curve): a bounded
  // oscillation keeps its record flat, while any real growth drags the record
  // with it. Raw samples would fail the plateau test whenever a recurrent
  // curve happens to peak late.
  std::vector<double> record(gauges.size());
  double running = 0.0;
  for (std::size_t i = 0; i < gauges.size(); ++i) {
    running = std::max(running, gauges[i]);
    record[i] = running;
  }
  verdict.sup_gauge = running;
  const double t_end = times.back();

  double mid_max = 0.0, last_max = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= 0.25 * t_end && times[i] <= 0.75 * t_end)
      mid_max = std::max(mid_max, record[i]);
    if (times[i] >= 0.75 * t_end) last_max = std::max(last_max, record[i]);
  }
  verdict.plateau_ratio = mid_max > 0.0 ? last_max / mid_max : (last_max > 0.0 ? 1e300 : 1.0);

  // Least-squares slopes of log(record) against log(t) and against t over the
  // second half of the horizon.
  auto fit_slope = [&](bool log_time) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] < 0.5 * t_end || record[i] <= 0.0 || times[i] <= 0.0) continue;
      double x = log_time ? std::log(times[i]) : times[i];
      double y = std::log(record[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++count;
    }
    if (count < 2) return 0.0;
    double denom = count * sxx - sx * sx;
    return denom > 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  };
  verdict.growth_exponent = fit_slope(true);
  verdict.exponential_rate = fit_slope(false);

  if (last_max <= 1.05 * mid_max + 1e-12) {
    verdict.verdict = Boundedness::bounded;
  } else if (verdict.sup_gauge > kUnboundedGauge &&
             (verdict.growth_exponent > 0.1 || verdict.exponential_rate > 1e-3)) {
    verdict.verdict = Boundedness::unbounded;
  } else {
    verdict.verdict = Boundedness::inconclusive;
  }
  return verdict;
}

BoundednessVerdict boundedness_probe(const LCSSpec& spec, const GroupElement& g0,
                                     const ControlSignal& u, double horizon, double dt_out) {
  if (horizon < 50.0)
    throw ValidationError(spec.name + ": boundedness probes need a horizon of at least 50");
  std::vector<double> times{0.0};
  std::vector<double> gauges{spec.realization->gauge(g0)};

  GroupElement g = g0;
  ControlSignal u_cur = u;
  double t_base = 0.0;
  double running_max = gauges[0];
  IntegrateOptions opts;
  opts.dt_out = dt_out;
  // Integrate in windows so runaway trajectories stop long before overflow.
  while (t_base < horizon - 1e-9) {
    double window = std::min(10.0, horizon - t_base);
    Trajectory traj = integrate(spec, g, u_cur, window, opts);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      times.push_back(t_base + traj.times[k]);
      gauges.push_back(traj.gauges[k]);
      running_max = std::max(running_max, traj.gauges[k]);
    }
    g = traj.points.back();
    t_base += window;
    if (t_base < horizon - 1e-9) u_cur = u_cur.shifted(window);
    if (running_max > 1e6) break;
  }
  return classify_gauge_curve(times, gauges);
}

StableManifoldProbe stable_manifold_probe(const LCSSpec& spec, std::uint64_t seed,
                                          int minus_trials, int plus_trials, double plus_weight) {
  const GroupRealization& group = *spec.realization;
  Matrix d = induced_derivation(spec);
  DynamicalSplitting split = dynamical_split(d);
  StableManifoldProbe probe;
  if (!std::isfinite(split.lambda_min_abs)) return probe;
  double lambda = split.lambda_min_abs * (1.0 - 1e-3);
  probe.t_star = 40.0 / lambda;

  if (!split.minus.is_trivial()) {
    probe.minus_trials = minus_trials;
    const Matrix& bm = split.minus.basis();
    for (int trial = 0; trial < minus_trials; ++trial) {
      Rng rng = Rng::split(seed, static_cast<std::uint64_t>(trial));
      Vector coords = rng.uniform(0.5, 2.0) * rng.unit_vector(bm.cols());
      GroupElement g = group.exp(bm * coords);
      GroupElement flowed = group.drift_automorphism(d, probe.t_star, g);
      double final_gauge = group.gauge(flowed);
      probe.worst_final_gauge = std::max(probe.worst_final_gauge, final_gauge);
      if (final_gauge < 1e-6) ++probe.contracted;
    }
  }

  if (!split.plus.is_trivial()) {
    probe.plus_trials = plus_trials;
    const Matrix& bp = split.plus.basis();
    Matrix rest(d.rows(), split.minus.dim() + split.zero.dim());
    rest.leftCols(split.minus.dim()) = split.minus.basis();
    rest.rightCols(split.zero.dim()) = split.zero.basis();
    for (int trial = 0; trial < plus_trials; ++trial) {
      Rng rng = Rng::split(seed + 1, static_cast<std::uint64_t>(trial));
      Vector y = Vector::Zero(d.rows());
      if (rest.cols() > 0) y = rest * (0.5 * rng.normal_vector(rest.cols()));
      y += (plus_weight * (1.0 + rng.uniform01())) * (bp * rng.unit_vector(bp.cols()));
      // Step toward t_star and stop at the first escape so the matrix
      // exponential never overtakes the floating range.
      bool escaped = false;
      for (int step = 1; step <= 20 && !escaped; ++step) {
        double t = probe.t_star * step / 20.0;
        Vector flowed = expm(t * d) * y;
        GroupElement g = group.exp(flowed);
        double gauge = group.gauge(g);
        if (!std::isfinite(gauge) || gauge > kUnboundedGauge) escaped = true;
      }
      if (escaped) ++probe.escaped;
    }
  }
  return probe;
}

ControlSetEstimate estimate_control_set(const LCSSpec& spec, std::uint64_t seed,
                                        const ControlSetOptions& options) {
  if (!larc_check(spec).satisfied)
    throw ValidationError(spec.name + ": control set estimation requires the rank condition");

  ControlSetEstimate estimate;
  ReachSampleOptions rs;
  rs.n_controls = options.n_controls;
  rs.pieces = options.pieces;
  rs.horizon = options.horizon;
  rs.dt_out = options.dt_out;
  rs.include_vertex_constants = true;
  ReachSample forward = reach_sample(spec, seed, rs);
  estimate.hull_gauge = forward.max_gauge;

  // Time reversal: negated drift and control directions sample the backward
  // orbit with the same box.
  LCSSpec reversed = spec;
  if (reversed.drift.kind == DriftKind::inner)
    reversed.drift.inner_vector = -reversed.drift.inner_vector;
  else
    reversed.drift.derivation = -reversed.drift.derivation;
  for (Vector& y : reversed.controls) y = -y;
  ReachSample backward = reach_sample(reversed, seed ^ 0x517cc1b727220a95ull, rs);
  estimate.backward_hull_gauge = backward.max_gauge;

  // Return probes: greedy gauge descent over short constant pieces, choosing
  // among the vertex controls, the zero control, and fresh random values.
  const GroupRealization& group = *spec.realization;
  const Index m = spec.omega.dim();
  int probes = std::min<int>(options.probe_points, static_cast<int>(forward.endpoints.size()));
  std::vector<char> returned(static_cast<std::size_t>(std::max(probes, 0)), 0);
  parallel_for(static_cast<std::size_t>(std::max(probes, 0)), [&](std::size_t p) {
    std::size_t pick = p * forward.endpoints.size() / static_cast<std::size_t>(probes);
    GroupElement g = forward.endpoints[pick];
    Rng rng = Rng::split(seed ^ 0x2545f4914f6cdd1dull, p);
    std::vector<Vector> candidates;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
      candidates.push_back(spec.omega.vertex(mask));
    candidates.push_back(Vector::Zero(m));

    const double tau = 0.5;
    double piece = tau;
    double best_seen = group.gauge(g);
    double prev_end = std::numeric_limits<double>::infinity();
    int rounds = static_cast<int>(options.horizon / tau);
    for (int round = 0; round < rounds && best_seen > options.return_tol; ++round) {
      std::vector<Vector> pool = candidates;
      for (int extra = 0; extra < 4; ++extra) {
        Vector u(m);
        for (Index i = 0; i < m; ++i) u(i) = rng.uniform(-spec.omega.radii(i), spec.omega.radii(i));
        pool.push_back(u);
      }
      IntegrateOptions opts;
      opts.dt_out = std::min(options.dt_out, piece / 5.0);
      double best_end = std::numeric_limits<double>::infinity();
      GroupElement best_g = g;
      for (const Vector& u : pool) {
        Trajectory traj = integrate(spec, g, ControlSignal::constant(u), piece, opts);
        for (double gauge : traj.gauges) best_seen = std::min(best_seen, gauge);
        double end_gauge = traj.gauges.back();
        if (end_gauge < best_end) {
          best_end = end_gauge;
          best_g = traj.points.back();
        }
      }
      g = best_g;
      // Final approach: when a piece length stops paying, shorter pieces
      // resolve the remaining distance instead of orbiting the target.
      if (best_end > 0.9 * prev_end && piece > 0.03) piece = std::max(piece / 4.0, 0.03);
      prev_end = best_end;
    }
    returned[p] = best_seen <= options.return_tol ? 1 : 0;
  });
  estimate.identity_in_closure =
      probes > 0 && std::all_of(returned.begin(), returned.end(), [](char c) { return c != 0; });
  estimate.is_compact_candidate =
      estimate.hull_gauge <= kUnboundedGauge && estimate.identity_in_closure;
  return estimate;
}

std::string trajectory_csv(const LCSSpec& spec, const Trajectory& traj) {
  const GroupRealization& group = *spec.realization;
  std::string out = "t,gauge";
  char buf[40];
  auto append_num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  const bool matrix_kind = group.kind() == RealizationKind::matrix_inner;
  Index payload = 0;
  if (!traj.points.empty())
    payload = matrix_kind ? traj.points[0].mat.size() : traj.points[0].coords.size();
  for (Index i = 0; i < payload; ++i) {
    if (matrix_kind) {
      Index cols = traj.points[0].mat.cols();
      out += ",m" + std::to_string(i / cols) + std::to_string(i % cols);
    } else {
      out += ",x" + std::to_string(i);
    }
  }
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    append_num(traj.times[k]);
    out += ",";
    append_num(traj.gauges[k]);
    const GroupElement& g = traj.points[k];
    for (Index i = 0; i < payload; ++i) {
      out += ",";
      if (matrix_kind) {
        Index cols = g.mat.cols();
        append_num(g.mat(i / cols, i % cols));
      } else {
        append_num(g.coords(i));
      }
    }
    out += "\n";
  }
  return out;
}

} // namespace lcs
