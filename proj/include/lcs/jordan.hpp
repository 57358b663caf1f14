#ifndef LCS_JORDAN_HPP
#define LCS_JORDAN_HPP

#include <vector>

#include "lcs/dense.hpp"
#include "lcs/lie_algebra.hpp"
#include "lcs/subspace.hpp"

namespace lcs {

/// Eigenvalues closer than this are treated as one cluster.
inline constexpr double kEigClusterTol = 1e-7;
/// Distinct clusters closer than 10x the cluster tolerance are ambiguous.
inline constexpr double kEigAmbiguityTol = 10.0 * kEigClusterTol;
/// Threshold separating hyperbolic eigenvalue signs.
inline constexpr double kSpectralSignTol = 1e-7;
/// Residual allowed when a complex construction is realified.
inline constexpr double kRealifyTol = 1e-8;

struct EigenvalueCluster {
  Complex value; // cluster mean
  int multiplicity = 0;
};

/// Additive decomposition A = elliptic + hyperbolic + nilpotent with the three
/// parts commuting, elliptic semisimple with purely imaginary spectrum,
/// hyperbolic semisimple with real spectrum, nilpotent nilpotent.
struct JordanDecomposition {
  Matrix elliptic;
  Matrix hyperbolic;
  Matrix nilpotent;
  std::vector<EigenvalueCluster> eigenvalues;
};

/// Throws NumericalError on ambiguous eigenvalue clustering or an
/// ill-conditioned generalized eigenbasis; never merges silently.
JordanDecomposition jordan_decompose(const Matrix& a);

/// Invariant subspaces of A ordered by the sign of the hyperbolic spectrum.
struct DynamicalSplitting {
  Subspace plus;
  Subspace zero;
  Subspace minus;
  /// Smallest |Re eigenvalue| over the nonzero-sign clusters; +inf when the
  /// whole spectrum is critical.
  double lambda_min_abs = 0.0;
};

DynamicalSplitting dynamical_split(const Matrix& a);
DynamicalSplitting dynamical_split(const JordanDecomposition& jd, const Matrix& a);

struct ContractionConstants {
  /// Certified pair: |e^{tA} v| <= (1/c) e^{-lambda t) |v| on the minus
  /// subspace for sampled t in [0, 50]. c <= 1, with c < 1 exactly when a
  /// transient bump pushes the restricted norm above 1.
  double c = 1.0;
  double lambda = 0.0;
};

/// Throws ValidationError when the minus subspace is trivial. The optional
/// Gram matrix measures vectors as |x|^2 = x^T gram x.
ContractionConstants contraction_constants(const DynamicalSplitting& split, const Matrix& a);
ContractionConstants contraction_constants(const DynamicalSplitting& split, const Matrix& a,
                                           const Matrix& gram);

struct GradingLevel {
  double eigenvalue = 0.0;
  Subspace space;
};

struct GradingReport {
  bool graded = false;
  double max_residual = 0.0;
  std::vector<GradingLevel> levels;
  /// Offending (lambda, mu) pair when not graded.
  double bad_lambda = 0.0;
  double bad_mu = 0.0;
};

/// Checks [g_lambda, g_mu] subset g_{lambda+mu} over the eigenspaces of the
/// hyperbolic part of a derivation. Residual threshold 1e-8.
GradingReport verify_grading(const LieAlgebra& alg, const Matrix& d);

enum class OperatorClass { elliptic, hyperbolic, nilpotent, semisimple, mixed };

/// Classification by which Jordan parts vanish (Frobenius norm below 1e-8).
/// The zero operator classifies as elliptic.
OperatorClass classify_operator(const Matrix& a);

const char* to_string(OperatorClass c);

} // namespace lcs

#endif
