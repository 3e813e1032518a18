// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_MATRIX_HPP
#define METAOPT_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "metaopt/errors.hpp"

namespace metaopt {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite())
        throw NonFiniteError(std::string(what) + ": non-finite entries");
}

inline void require_finite(const RealMatrix& m, const char* what) {
    if (!m.allFinite())
        throw NonFiniteError(std::string(what) + ": non-finite entries");
}

// Flattening convention used everywhere a complex matrix is exposed as a real
// parameter vector: [vec(Re X); vec(Im X)], column-major.
inline RealVector to_real_pairs(const ComplexMatrix& x) {
    const Eigen::Index n = x.size();
    RealVector v(2 * n);
    v.head(n) = Eigen::Map<const RealVector>(
        reinterpret_cast<const double*>(x.data()), 2 * n)(Eigen::seqN(0, n, 2));
    v.tail(n) = Eigen::Map<const RealVector>(
        reinterpret_cast<const double*>(x.data()), 2 * n)(Eigen::seqN(1, n, 2));
    return v;
}

inline ComplexMatrix from_real_pairs(const RealVector& v, Eigen::Index rows,
                                     Eigen::Index cols) {
    const Eigen::Index n = rows * cols;
    if (v.size() != 2 * n)
        throw DimensionMismatchError("from_real_pairs: size mismatch");
    ComplexMatrix x(rows, cols);
    for (Eigen::Index i = 0; i < n; ++i)
        x.data()[i] = Complex(v[i], v[n + i]);
    return x;
}

} // namespace metaopt

#endif
