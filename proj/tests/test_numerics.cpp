// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "metaopt/errors.hpp"
#include "metaopt/linalg.hpp"
#include "metaopt/rng.hpp"
#include "metaopt/tape.hpp"

using namespace metaopt;

namespace {

double rel_error(const RealVector& got, const RealVector& want) {
    const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-12);
    return (got - want).cwiseAbs().maxCoeff() / scale;
}

} // namespace

TEST_CASE("hermitian_sqrt identity") {
    const ComplexMatrix eye = ComplexMatrix::Identity(4, 4);
    CHECK((hermitian_sqrt(eye) - eye).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hermitian_sqrt diagonal") {
    ComplexMatrix r = ComplexMatrix::Zero(2, 2);
    r(0, 0) = 4.0;
    r(1, 1) = 9.0;
    const ComplexMatrix s = hermitian_sqrt(r);
    CHECK(std::abs(s(0, 0) - Complex(2.0)) < 1e-12);
    CHECK(std::abs(s(1, 1) - Complex(3.0)) < 1e-12);
    CHECK(std::abs(s(0, 1)) < 1e-12);
}

TEST_CASE("hermitian_sqrt random PSD construct-and-check") {
    SeededRng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = rng.complex_gaussian_matrix(3, 3);
        const ComplexMatrix r = a * a.adjoint();
        const ComplexMatrix s = hermitian_sqrt(r);
        CHECK((s * s - r).norm() < 1e-10);
        // output itself Hermitian PSD
        CHECK((s - s.adjoint()).norm() < 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(s);
        CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("hermitian_sqrt rejects asymmetry and indefiniteness") {
    ComplexMatrix r = ComplexMatrix::Zero(2, 2);
    r(0, 1) = 1.0; // not Hermitian: r(1,0) = 0
    CHECK_THROWS_AS(hermitian_sqrt(r, 1e-9), NotHermitianError);

    ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(hermitian_sqrt(neg, 1e-9), IndefiniteMatrixError);
}

TEST_CASE("tape sum of squares gradient") {
    Tape t;
    RealVector x(3);
    x << 1.0, 2.0, 3.0;
    const RealVar xv = t.param(RealMatrix{x});
    const RealVar loss = t.sum(t.square(xv));
    CHECK(t.value(loss) == doctest::Approx(14.0));
    t.backward(loss);
    const RealVector g = t.grad(xv);
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(4.0));
    CHECK(g[2] == doctest::Approx(6.0));
}

TEST_CASE("tape log2 rate gradient vs finite differences") {
    SeededRng rng(7);
    const ComplexVector h = rng.complex_gaussian_matrix(4, 1);
    const RealVector x0 = to_real_pairs(rng.complex_gaussian_matrix(4, 1));
    auto loss_at = [&](const RealVector& x) {
        Tape t;
        const RealVar xv = t.param(RealMatrix{x});
        const ComplexVar p =
            t.complex_from_pair(t.segment(xv, 0, 4), t.segment(xv, 4, 4), 4, 1);
        const ComplexVar inner = t.cmatmul(ComplexMatrix{h.adjoint()}, p);
        return t.value(t.scale(t.log1p(t.sum_abs2(inner)), 1.0 / std::numbers::ln2));
    };
    // gradient from one recorded pass
    Tape t;
    const RealVar xv = t.param(RealMatrix{x0});
    const ComplexVar p =
        t.complex_from_pair(t.segment(xv, 0, 4), t.segment(xv, 4, 4), 4, 1);
    const ComplexVar inner = t.cmatmul(ComplexMatrix{h.adjoint()}, p);
    const RealVar loss =
        t.scale(t.log1p(t.sum_abs2(inner)), 1.0 / std::numbers::ln2);
    t.backward(loss);
    const RealVector g = t.grad(xv);
    const RealVector fd = finite_diff_grad(
        [&](const RealVector& x) { return loss_at(x); }, x0, 1e-6);
    CHECK(rel_error(g, fd) < 1e-6);
}

TEST_CASE("tape min tie routes to first argmin") {
    Tape t;
    RealVector x(2);
    x << 1.5, 1.5;
    const RealVar xv = t.param(RealMatrix{x});
    const RealVar loss = t.min_coeff(xv);
    t.backward(loss);
    const RealVector g = t.grad(xv);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("tape disconnected parameter flagged with zero gradient") {
    Tape t;
    const RealVar used = t.param(RealMatrix{RealMatrix::Ones(2, 1)});
    const RealVar unused = t.param(RealMatrix{RealMatrix::Ones(3, 1)});
    const RealVar loss = t.sum(t.square(used));
    t.backward(loss);
    bool connected = true;
    const RealVector g = t.grad(unused, &connected);
    CHECK_FALSE(connected);
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite_diff_grad basics") {
    auto square = [](const RealVector& x) { return x[0] * x[0]; };
    RealVector x(1);
    x << 3.0;
    const RealVector g = finite_diff_grad(square, x, 1e-4);
    CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-7));

    auto constant = [](const RealVector&) { return 2.5; };
    RealVector y = RealVector::Zero(4);
    CHECK(finite_diff_grad(constant, y, 1e-4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("recorded losses agree with finite differences over 100 seeds") {
    // Random composite graphs: affine -> tanh/sigmoid -> quadratic mixtures.
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SeededRng rng(seed);
        const Eigen::Index n = 5;
        const RealMatrix a = rng.uniform_matrix(n, n, -1.0, 1.0);
        const RealVector x0 =
            Eigen::Map<const RealVector>(rng.uniform_matrix(n, 1, -1.0, 1.0).data(), n);
        auto build = [&](Tape& t, RealVar xv) {
            const RealVar ax = t.matmul(t.constant(a), xv);
            const RealVar mix = t.add(t.tanh(ax), t.sigmoid(xv));
            const RealVar sq = t.square(mix);
            return t.add(t.sum(sq), t.log1p(t.sum(t.square(xv))));
        };
        Tape t;
        const RealVar xv = t.param(RealMatrix{x0});
        const RealVar loss = build(t, xv);
        t.backward(loss);
        const RealVector g = t.grad(xv);
        const RealVector fd = finite_diff_grad(
            [&](const RealVector& x) {
                Tape ft;
                const RealVar fx = ft.param(RealMatrix{x});
                return ft.value(build(ft, fx));
            },
            x0, 1e-5);
        CHECK(rel_error(g, fd) < 1e-4);
    }
}

TEST_CASE("SeededRng reproducibility and stream independence") {
    SeededRng a(123, 4), b(123, 4);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.uniform() == b.uniform());

    SeededRng base(9);
    SeededRng c = base.derive(1), d = base.derive(2);
    int equal = 0;
    for (int i = 0; i < 100; ++i)
        equal += c.uniform() == d.uniform();
    CHECK(equal == 0);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    const Quadrature q = gauss_legendre(8);
    double integral = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        integral += q.weights[i] * std::pow(q.nodes[i], 6);
    CHECK(integral == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
}
