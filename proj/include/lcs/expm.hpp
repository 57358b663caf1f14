#ifndef LCS_EXPM_HPP
#define LCS_EXPM_HPP

#include "lcs/dense.hpp"

namespace lcs {

/// Matrix exponential, scaling-and-squaring with a fixed [13/13] Pade approximant.
Matrix expm(const Matrix& a);

/// phi1(A) = sum_{k>=0} A^k / (k+1)!, so expm([[A, y],[0,0]]) = [[e^A, phi1(A) y],[0,1]].
Matrix phi1(const Matrix& a);

/// Principal matrix logarithm by inverse scaling-and-squaring.
/// Throws ChartError when an eigenvalue lies on the closed negative real axis.
Matrix logm_principal(const Matrix& a);

} // namespace lcs

#endif
