#include "lcs/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lcs/errors.hpp"
#include "lcs/expm.hpp"

namespace lcs {

namespace {

constexpr double kBasisConditionLimit = 1e8;
constexpr double kLambdaSafety = 1e-3;
constexpr double kContractionHorizon = 50.0;
constexpr double kContractionStep = 0.1;
constexpr double kClassifyTol = 1e-8;
constexpr double kGradingResidualTol = 1e-8;
constexpr double kGradingMatchTol = 1e-6;

struct Cluster {
  Complex mean;
  Index multiplicity = 0;
};

// Group eigenvalues whose pairwise distance is below the clustering radius.
// Distinct clusters closer than the ambiguity radius abort the decomposition:
// the generalized eigenspaces would not be numerically separable.
std::vector<Cluster> cluster_eigenvalues(const CVector& eigs) {
  const Index n = eigs.size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    std::vector<Index> members{i};
    label[i] = static_cast<int>(groups.size());
    // Transitive closure: anything close to a member joins the group.
    for (std::size_t scan = 0; scan < members.size(); ++scan) {
      Complex anchor = eigs(members[scan]);
      for (Index j = 0; j < n; ++j) {
        if (label[j] >= 0) continue;
        if (std::abs(eigs(j) - anchor) <= kEigClusterTol) {
          label[j] = label[i];
          members.push_back(j);
        }
      }
    }
    groups.push_back(std::move(members));
  }
  std::vector<Cluster> clusters;
  for (const auto& members : groups) {
    Complex sum = 0.0;
    for (Index m : members) sum += eigs(m);
    clusters.push_back({sum / static_cast<double>(members.size()),
                        static_cast<Index>(members.size())});
  }
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      double gap = std::abs(clusters[a].mean - clusters[b].mean);
      if (gap < kEigAmbiguityTol)
        throw NumericalError(
            "jordan_decompose: eigenvalue clusters too close to separate (gap " +
            std::to_string(gap) + ")");
    }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& x, const Cluster& y) {
    if (x.mean.real() != y.mean.real()) return x.mean.real() < y.mean.real();
    return x.mean.imag() < y.mean.imag();
  });
  return clusters;
}

// Basis of the generalized eigenspace for a cluster: the m smallest right
// singular directions of ((A - lambda I)/s)^m, where m is the cluster size.
CMatrix generalized_eigenspace(const CMatrix& a, Complex lambda, Index multiplicity) {
  const Index n = a.rows();
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  CMatrix shifted = (a - lambda * CMatrix::Identity(n, n)) / scale;
  CMatrix power = CMatrix::Identity(n, n);
  for (Index k = 0; k < multiplicity; ++k) power = shifted * power;
  Eigen::JacobiSVD<CMatrix> svd(power, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(multiplicity);
}

Matrix realify(const CMatrix& m, const char* what) {
  double residue = m.imag().cwiseAbs().maxCoeff();
  if (residue > kRealifyTol)
    throw NumericalError(std::string("jordan_decompose: ") + what +
                         " has imaginary residue " + std::to_string(residue));
  return m.real();
}

// Real span of a set of complex columns (stacks real and imaginary parts).
Subspace real_span(Index n, const std::vector<CMatrix>& parts) {
  Index total = 0;
  for (const CMatrix& p : parts) total += p.cols();
  if (total == 0) return Subspace::zero(n);
  Matrix stacked(n, 2 * total);
  Index col = 0;
  for (const CMatrix& p : parts)
    for (Index j = 0; j < p.cols(); ++j) {
      stacked.col(col++) = p.col(j).real();
      stacked.col(col++) = p.col(j).imag();
    }
  return Subspace::span(n, stacked);
}

} // namespace

JordanDecomposition jordan_decompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("jordan_decompose: matrix must be square");
  if (!all_finite(a)) throw ValidationError("jordan_decompose: matrix has non-finite entries");
  const Index n = a.rows();
  JordanDecomposition jd;

  // Nilpotent shortcut: A^n vanishing relative to ||A||^n means S = 0 exactly.
  double norm_a = std::max(1.0, operator_norm(a));
  Matrix power = Matrix::Identity(n, n);
  for (Index k = 0; k < n; ++k) power = a * power;
  if (operator_norm(power) <= 1e-10 * std::pow(norm_a, static_cast<double>(n))) {
    jd.elliptic = Matrix::Zero(n, n);
    jd.hyperbolic = Matrix::Zero(n, n);
    jd.nilpotent = a;
    jd.eigenvalues = {{Complex(0.0, 0.0), static_cast<int>(n)}};
    return jd;
  }

  CMatrix ac = a.cast<Complex>();
  Eigen::ComplexEigenSolver<CMatrix> es(ac, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("jordan_decompose: eigenvalue iteration failed");
  std::vector<Cluster> clusters = cluster_eigenvalues(es.eigenvalues());

  CMatrix v(n, n);
  Index col = 0;
  std::vector<Index> starts;
  for (const Cluster& c : clusters) {
    starts.push_back(col);
    v.middleCols(col, c.multiplicity) = generalized_eigenspace(ac, c.mean, c.multiplicity);
    col += c.multiplicity;
  }
  if (col != n) throw NumericalError("jordan_decompose: eigenspace dimensions do not sum");

  Eigen::JacobiSVD<CMatrix> vsvd(v);
  double smin = vsvd.singularValues()(n - 1);
  double cond = smin > 0.0 ? vsvd.singularValues()(0) / smin
                           : std::numeric_limits<double>::infinity();
  if (!(cond < kBasisConditionLimit))
    throw NumericalError("jordan_decompose: generalized eigenbasis condition " +
                         std::to_string(cond) + " exceeds limit");

  CMatrix vinv = Eigen::PartialPivLU<CMatrix>(v).inverse();
  CMatrix s_c = CMatrix::Zero(n, n);
  CMatrix h_c = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    // Spectral projector of the cluster block.
    CMatrix projector = v.middleCols(starts[i], clusters[i].multiplicity) *
                        vinv.middleRows(starts[i], clusters[i].multiplicity);
    s_c += clusters[i].mean * projector;
    h_c += Complex(clusters[i].mean.real(), 0.0) * projector;
    jd.eigenvalues.push_back({clusters[i].mean, static_cast<int>(clusters[i].multiplicity)});
  }

  Matrix s = realify(s_c, "semisimple part");
  jd.hyperbolic = realify(h_c, "hyperbolic part");
  jd.elliptic = s - jd.hyperbolic;
  jd.nilpotent = a - s;
  return jd;
}

DynamicalSplitting dynamical_split(const Matrix& a) {
  return dynamical_split(jordan_decompose(a), a);
}

DynamicalSplitting dynamical_split(const JordanDecomposition& jd, const Matrix& a) {
  const Index n = a.rows();
  DynamicalSplitting split;
  CMatrix ac = a.cast<Complex>();

  std::vector<CMatrix> plus_cols, zero_cols, minus_cols;
  double min_abs = std::numeric_limits<double>::infinity();
  for (const EigenvalueCluster& c : jd.eigenvalues) {
    CMatrix basis = generalized_eigenspace(ac, c.value, c.multiplicity);
    double re = c.value.real();
    if (re > kSpectralSignTol) {
      plus_cols.push_back(basis);
      min_abs = std::min(min_abs, std::abs(re));
    } else if (re < -kSpectralSignTol) {
      minus_cols.push_back(basis);
      min_abs = std::min(min_abs, std::abs(re));
    } else {
      zero_cols.push_back(basis);
    }
  }

  split.plus = real_span(n, plus_cols);
  split.zero = real_span(n, zero_cols);
  split.minus = real_span(n, minus_cols);
  if (split.plus.dim() + split.zero.dim() + split.minus.dim() != n)
    throw NumericalError("dynamical_split: subspace dimensions do not sum to the ambient dimension");
  split.lambda_min_abs = min_abs;
  return split;
}

ContractionConstants contraction_constants(const DynamicalSplitting& split, const Matrix& a) {
  return contraction_constants(split, a, Matrix());
}

ContractionConstants contraction_constants(const DynamicalSplitting& split, const Matrix& a,
                                           const Matrix& gram) {
  if (split.minus.is_trivial())
    throw ValidationError("contraction_constants: the contracting subspace is trivial");
  if (!std::isfinite(split.lambda_min_abs))
    throw ValidationError("contraction_constants: no hyperbolic decay rate available");

  ContractionConstants cc;
  cc.lambda = split.lambda_min_abs * (1.0 - kLambdaSafety);

  const Matrix& b = split.minus.basis();
  const Index q = b.cols();

  // Optional metric on the contracting subspace, in basis coordinates.
  Matrix w_sqrt, w_sqrt_inv;
  if (gram.size() > 0) {
    if (gram.rows() != q || gram.cols() != q)
      throw ValidationError("contraction_constants: metric shape must match the subspace");
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw ValidationError("contraction_constants: metric must be positive definite");
    w_sqrt = es.operatorSqrt();
    w_sqrt_inv = es.operatorInverseSqrt();
  }

  double c = 1.0;
  for (double t = 0.0; t <= kContractionHorizon + 1e-12; t += kContractionStep) {
    Matrix flow = expm(t * a);
    double restricted;
    if (gram.size() > 0) {
      Matrix coords = b.transpose() * flow * b; // invariance keeps the image in span(b)
      restricted = operator_norm(Matrix(w_sqrt * coords * w_sqrt_inv));
    } else {
      restricted = operator_norm(Matrix(flow * b));
    }
    if (restricted <= 0.0) continue;
    c = std::min(c, std::exp(-cc.lambda * t) / restricted);
  }
  cc.c = c;
  return cc;
}

GradingReport verify_grading(const LieAlgebra& alg, const Matrix& d) {
  if (d.rows() != alg.dim() || d.cols() != alg.dim())
    throw ValidationError("verify_grading: operator dimension mismatch");
  if (!alg.is_derivation(d, 1e-8))
    throw ValidationError("verify_grading: operator is not a derivation");

  const Index n = alg.dim();
  JordanDecomposition jd = jordan_decompose(d);

  // Weight levels are the distinct real parts of the derivation spectrum.
  std::vector<double> levels;
  std::vector<Index> mults;
  for (const EigenvalueCluster& c : jd.eigenvalues) {
    double re = c.value.real();
    bool placed = false;
    for (std::size_t g = 0; g < levels.size(); ++g)
      if (std::abs(levels[g] - re) <= kEigClusterTol) {
        mults[g] += c.multiplicity;
        placed = true;
        break;
      }
    if (!placed) {
      levels.push_back(re);
      mults.push_back(c.multiplicity);
    }
  }
  std::vector<std::size_t> order(levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return levels[x] < levels[y]; });

  GradingReport report;
  CMatrix hc = jd.hyperbolic.cast<Complex>();
  Index total = 0;
  for (std::size_t i : order) {
    GradingLevel level;
    level.eigenvalue = levels[i];
    level.space = real_span(n, {generalized_eigenspace(hc, levels[i], mults[i])});
    total += level.space.dim();
    report.levels.push_back(std::move(level));
  }
  if (total != n) throw NumericalError("verify_grading: weight spaces do not span the algebra");

  report.max_residual = 0.0;
  for (std::size_t ga = 0; ga < report.levels.size(); ++ga)
    for (std::size_t gb = ga; gb < report.levels.size(); ++gb) {
      double target = report.levels[ga].eigenvalue + report.levels[gb].eigenvalue;
      const Subspace* target_space = nullptr;
      for (const GradingLevel& lvl : report.levels)
        if (std::abs(lvl.eigenvalue - target) <= kGradingMatchTol) {
          target_space = &lvl.space;
          break;
        }
      const Matrix& ba = report.levels[ga].space.basis();
      const Matrix& bb = report.levels[gb].space.basis();
      for (Index i = 0; i < ba.cols(); ++i)
        for (Index j = 0; j < bb.cols(); ++j) {
          Vector w = alg.bracket(ba.col(i), bb.col(j));
          // Without a weight space at the summed level the bracket must vanish.
          double residual = target_space ? target_space->distance(w) : w.norm();
          if (residual > report.max_residual) {
            report.max_residual = residual;
            report.bad_lambda = report.levels[ga].eigenvalue;
            report.bad_mu = report.levels[gb].eigenvalue;
          }
        }
    }
  report.graded = report.max_residual <= kGradingResidualTol;
  if (report.graded) {
    report.bad_lambda = 0.0;
    report.bad_mu = 0.0;
  }
  return report;
}

OperatorClass classify_operator(const Matrix& a) {
  JordanDecomposition jd = jordan_decompose(a);
  bool e = jd.elliptic.norm() > kClassifyTol;
  bool h = jd.hyperbolic.norm() > kClassifyTol;
  bool n = jd.nilpotent.norm() > kClassifyTol;
  if (!h && !n) return OperatorClass::elliptic; // includes the zero operator
  if (!e && !n) return OperatorClass::hyperbolic;
  if (!e && !h) return OperatorClass::nilpotent;
  if (!n) return OperatorClass::semisimple;
  return OperatorClass::mixed;
}

const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::elliptic: return "elliptic";
    case OperatorClass::hyperbolic: return "hyperbolic";
    case OperatorClass::nilpotent: return "nilpotent";
    case OperatorClass::semisimple: return "semisimple";
    case OperatorClass::mixed: return "mixed";
  }
  return "unknown";
}

} // namespace lcs
