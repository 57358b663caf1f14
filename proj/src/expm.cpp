#include "lcs/expm.hpp"

#include <cmath>

#include "lcs/errors.hpp"

namespace lcs {

namespace {

// [13/13] Pade numerator coefficients.
constexpr double kB[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                         1187353796428800.0,  129060195264000.0,   10559470521600.0,
                         670442572800.0,      33522128640.0,       1323241920.0,
                         40840800.0,          960960.0,            16380.0,
                         182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

Matrix expm_pade13(const Matrix& a) {
  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  Matrix u = a * (a6 * (kB[13] * a6 + kB[11] * a4 + kB[9] * a2) + kB[7] * a6 + kB[5] * a4 +
                  kB[3] * a2 + kB[1] * ident);
  Matrix v = a6 * (kB[12] * a6 + kB[10] * a4 + kB[8] * a2) + kB[6] * a6 + kB[4] * a4 +
             kB[2] * a2 + kB[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

} // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("expm: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  if (!a.allFinite()) throw NumericalError("expm: non-finite input");
  double norm = a.cwiseAbs().colwise().sum().maxCoeff(); // 1-norm
  int squarings = 0;
  Matrix scaled = a;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    scaled = a / std::pow(2.0, squarings);
  }
  Matrix result = expm_pade13(scaled);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix phi1(const Matrix& a) {
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = Matrix::Identity(n, n);
  return expm(block).topRightCorner(n, n);
}

Matrix logm_principal(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("logm: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  if (!a.allFinite()) throw ChartError("logm: non-finite input");

  Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("logm: eigensolver failed");
  double scale = std::max(1.0, a.norm());
  for (Index i = 0; i < n; ++i) {
    Complex lam = es.eigenvalues()(i);
    if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-12 * scale)
      throw ChartError("logm: eigenvalue on the closed negative real axis");
  }

  const Matrix ident = Matrix::Identity(n, n);
  Matrix t = a;
  int sqrts = 0;
  while ((t - ident).cwiseAbs().colwise().sum().maxCoeff() > 0.25) {
    if (++sqrts > 40) throw ChartError("logm: square-root chain failed to contract");
    // Denman-Beavers square root.
    Matrix y = t;
    Matrix z = ident;
    for (int it = 0; it < 60; ++it) {
      Matrix y_inv = y.partialPivLu().inverse();
      Matrix z_inv = z.partialPivLu().inverse();
      Matrix y_next = 0.5 * (y + z_inv);
      Matrix z_next = 0.5 * (z + y_inv);
      double delta = (y_next - y).norm();
      y = y_next;
      z = z_next;
      if (delta <= 1e-15 * std::max(1.0, y.norm())) break;
    }
    if (!y.allFinite()) throw ChartError("logm: square-root iteration diverged");
    t = y;
  }

  // Gregory series: log t = 2 atanh(Z) with Z = (t - I)(t + I)^{-1}.
  Matrix z = (t - ident) * (t + ident).partialPivLu().inverse();
  Matrix z2 = z * z;
  Matrix term = z;
  Matrix sum = Matrix::Zero(n, n);
  for (int k = 1; k <= 41; k += 2) {
    sum += term / static_cast<double>(k);
    term = term * z2;
    if (term.norm() < 1e-18) break;
  }
  return std::pow(2.0, sqrts + 1) * sum;
}

} // namespace lcs
