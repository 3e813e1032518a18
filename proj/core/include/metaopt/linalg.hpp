// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_LINALG_HPP
#define METAOPT_LINALG_HPP

#include <functional>
#include <vector>

#include "metaopt/matrix.hpp"

namespace metaopt {

// Hermitian PSD square root: returns S with S*S ~= R. Eigenvalues in
// [-tolerance, 0) are clamped to zero.
// Throws NotHermitianError if R deviates from R^H beyond tolerance,
// IndefiniteMatrixError if an eigenvalue is below -tolerance.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& r, double tolerance = 1e-12);

// Central finite differences (f(x+h e_i) - f(x-h e_i)) / 2h per coordinate.
// Verification oracle for the tape; throws NonFiniteError on a non-finite loss.
RealVector finite_diff_grad(const std::function<double(const RealVector&)>& loss_fn,
                            const RealVector& x, double step);

// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre(int order);

} // namespace metaopt

#endif
