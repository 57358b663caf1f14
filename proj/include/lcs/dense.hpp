#ifndef LCS_DENSE_HPP
#define LCS_DENSE_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace lcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

/// Largest singular value; zero-sized operators have norm 0.
double operator_norm(const Matrix& m);

/// 2-norm condition number.
double condition_number(const Matrix& m);

} // namespace lcs

#endif
