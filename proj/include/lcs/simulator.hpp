#ifndef LCS_SIMULATOR_HPP
#define LCS_SIMULATOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcs/system.hpp"

namespace lcs {

/// Cap on the fixed integration step of the chart one-step method.
inline constexpr double kChartStepCap = 1e-3;
/// Gauge level above which growth counts toward an unbounded verdict.
inline constexpr double kUnboundedGauge = 1e3;

enum class IntegrationMethod {
  automatic,      // exact piecewise on matrix_inner, rk4 on charts
  exact_piecewise,
  rk4
};

struct IntegrateOptions {
  double dt_out = 0.05;
  IntegrationMethod method = IntegrationMethod::automatic;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GroupElement> points;
  std::vector<double> gauges;

  double max_gauge() const;
};

/// Solves g' = drift(g) + sum_i u_i(t) Y^i(g) from g0 over [0, t_final],
/// sampling every dt_out. matrix_inner uses the exact per-piece product
/// solution; chart kinds use classical RK4 with step min(dt_out, 1e-3).
/// Throws ChartError with the last valid time when the state leaves the chart.
Trajectory integrate(const LCSSpec& spec, const GroupElement& g0, const ControlSignal& u,
                     double t_final, const IntegrateOptions& options = {});

struct CocycleCheckResult {
  double max_residual = 0.0;
  int draws = 0;
  bool passed = false;
  double tolerance = 0.0;
};

/// Verifies phi(t, gh, u) = phi(t, g, u) phi_t(h) on random draws.
/// Tolerance: 1e-6 for matrix_inner, 1e-4 for chart-integrated kinds.
CocycleCheckResult cocycle_check(const LCSSpec& spec, std::uint64_t seed, int draws = 200);

struct ReachSampleOptions {
  int n_controls = 100;
  int pieces = 8;
  double horizon = 1.0;
  double dt_out = 0.05;
  double vertex_prob = 0.5;
  /// Prepend the constant vertex controls and the zero control.
  bool include_vertex_constants = false;
};

struct ReachSample {
  double horizon = 0.0;
  std::vector<GroupElement> endpoints;
  std::vector<ControlSignal> controls_used;
  std::vector<double> trajectory_max_gauge;
  double max_gauge = 0.0;
};

/// Observer invoked for every output sample of trajectory `idx`; called from
/// worker threads, one trajectory at a time per index.
using SampleObserver = std::function<void(std::size_t idx, double t, const GroupElement& g)>;

/// Random reachable-set sample from the identity. The random stream is split
/// per sample index from the seed, so results are independent of worker count.
ReachSample reach_sample(const LCSSpec& spec, std::uint64_t seed, const ReachSampleOptions& options,
                         const SampleObserver& observer = nullptr);

struct TheoremMainBound {
  double R = 0.0;
  double c = 1.0;
  double lambda = 0.0;
  double diam_K = 0.0;
  int hull_points = 0;
  /// "adapted" when the averaged metric was available, "euclidean" otherwise.
  std::string metric;
};

struct TheoremMainOptions {
  int k_samples = 400;
  int k_pieces = 8;
  double k_dt_out = 0.1;
};

/// Radius bound for the G^- component of the forward orbit from the identity:
/// R = diam(K) / (c (1 - e^{-lambda})), K sampled from the time-1 orbit.
/// Preconditions: g+ trivial, g- nontrivial, G0 compact (declared or trivial).
TheoremMainBound theorem_main_bound(const LCSSpec& spec, std::uint64_t seed,
                                    const TheoremMainOptions& options = {});

enum class Boundedness { bounded, unbounded, inconclusive };

const char* to_string(Boundedness b);

struct BoundednessVerdict {
  Boundedness verdict = Boundedness::inconclusive;
  double sup_gauge = 0.0;
  /// Log-record vs log-time slope over the second half of the horizon.
  double growth_exponent = 0.0;
  /// Log-record vs time slope over the second half of the horizon.
  double exponential_rate = 0.0;
  double plateau_ratio = 0.0;
};

/// Applies the plateau / growth heuristics to the running maximum of a
/// sampled gauge curve (records plateau iff the curve is bounded).
BoundednessVerdict classify_gauge_curve(const std::vector<double>& times,
                                        const std::vector<double>& gauges);

/// Integrates and classifies the trajectory gauge. Horizon must be >= 50.
BoundednessVerdict boundedness_probe(const LCSSpec& spec, const GroupElement& g0,
                                     const ControlSignal& u, double horizon, double dt_out = 0.5);

struct StableManifoldProbe {
  double t_star = 0.0; // 40 / lambda
  int minus_trials = 0;
  int contracted = 0;     // gauge below 1e-6 by t_star
  double worst_final_gauge = 0.0;
  int plus_trials = 0;
  int escaped = 0;        // gauge above 1e3 by t_star
};

/// Drift-flow probes of the stable manifold: starts in exp(g^-) must
/// contract, starts with a g^+ component at least `plus_weight` must escape.
StableManifoldProbe stable_manifold_probe(const LCSSpec& spec, std::uint64_t seed,
                                          int minus_trials = 50, int plus_trials = 50,
                                          double plus_weight = 0.01);

struct ControlSetEstimate {
  bool is_compact_candidate = false;
  double hull_gauge = 0.0;
  bool identity_in_closure = false;
  double backward_hull_gauge = 0.0;
};

struct ControlSetOptions {
  int n_controls = 200;
  int pieces = 10;
  double horizon = 20.0;
  double dt_out = 0.1;
  int probe_points = 20;
  double return_tol = 1e-2;
};

/// Reachable-set evidence for a compact control set around the identity.
/// Requires the rank condition; throws ValidationError otherwise.
ControlSetEstimate estimate_control_set(const LCSSpec& spec, std::uint64_t seed,
                                        const ControlSetOptions& options = {});

/// CSV export: time, gauge, then the flattened element payload.
std::string trajectory_csv(const LCSSpec& spec, const Trajectory& traj);

} // namespace lcs

#endif
