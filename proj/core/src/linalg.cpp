// SPDX-License-Identifier: Apache-2.0

#include "metaopt/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace metaopt {

ComplexMatrix hermitian_sqrt(const ComplexMatrix& r, double tolerance) {
    if (r.rows() != r.cols())
        throw DimensionMismatchError("hermitian_sqrt: matrix not square");
    require_finite(r, "hermitian_sqrt");
    const double asym = (r - r.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerance)
        throw NotHermitianError("hermitian_sqrt: asymmetry " +
                                std::to_string(asym) + " exceeds tolerance");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((r + r.adjoint()) / 2.0);
    if (es.info() != Eigen::Success)
        throw NonFiniteError("hermitian_sqrt: eigensolver failed");
    RealVector lambda = es.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -tolerance)
            throw IndefiniteMatrixError("hermitian_sqrt: eigenvalue " +
                                        std::to_string(lambda[i]) +
                                        " below -tolerance");
        if (lambda[i] < 0.0)
            lambda[i] = 0.0;
    }
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
}

RealVector finite_diff_grad(const std::function<double(const RealVector&)>& loss_fn,
                            const RealVector& x, double step) {
    if (step <= 0.0)
        throw std::invalid_argument("finite_diff_grad: step must be positive");
    RealVector g(x.size());
    RealVector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + step;
        const double fp = loss_fn(xp);
        xp[i] = x[i] - step;
        const double fm = loss_fn(xp);
        xp[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFiniteError("finite_diff_grad: non-finite loss");
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

Quadrature gauss_legendre(int order) {
    if (order < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    Quadrature q;
    q.nodes.resize(order);
    q.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, refined by Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        q.nodes[i] = -x;
        q.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[order - 1 - i] = w;
    }
    return q;
}

} // namespace metaopt
