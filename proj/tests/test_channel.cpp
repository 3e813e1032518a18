// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "metaopt/channel.hpp"
#include "metaopt/rng.hpp"

using namespace metaopt;

TEST_CASE("one_ring_correlation unit diagonal and hermitian") {
    const AntennaArray array = AntennaArray::uniform_linear(4, 0.5);
    const ComplexMatrix r = one_ring_correlation(array, 0.4, 0.1);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(r(i, i) - Complex(1.0)) < 1e-9);
    CHECK((r - r.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(r);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("one_ring_correlation point-scatterer limit") {
    const AntennaArray array = AntennaArray::uniform_linear(3, 0.5);
    const double theta = 0.3;
    const ComplexMatrix r = one_ring_correlation(array, theta, 1e-9);
    const double psi_x = std::cos(theta), psi_y = std::sin(theta);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) {
            const double dx = array.positions(0, i) - array.positions(0, j);
            const double dy = array.positions(1, i) - array.positions(1, j);
            const Complex expected =
                std::exp(Complex(0.0, -2.0 * std::numbers::pi *
                                          (psi_x * dx + psi_y * dy)));
            CHECK(std::abs(r(i, j) - expected) < 1e-7);
        }
    Eigen::JacobiSVD<ComplexMatrix> svd(r);
    CHECK(svd.singularValues()[1] < 1e-6); // numerically rank one
}

TEST_CASE("one_ring_correlation quadrature convergence") {
    const AntennaArray array = AntennaArray::uniform_linear(4, 0.5);
    const double theta = 0.0, spread = std::numbers::pi / 36.0;
    const ComplexMatrix coarse = one_ring_correlation(array, theta, spread, 128);
    const ComplexMatrix fine = one_ring_correlation(array, theta, spread, 8192);
    CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-8);
    const ComplexMatrix doubled = one_ring_correlation(array, theta, spread, 256);
    CHECK((coarse - doubled).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sample_csit_ensemble zero error variance") {
    SeededRng rng(5);
    const UserGroupLayout layout =
        UserGroupLayout::equal_groups(3, 1, {0.2}, {0.1});
    const AntennaArray array = AntennaArray::uniform_linear(4, 0.5);
    const CsitEnsemble e = sample_csit_ensemble(rng, layout, array, 0.0, 5);
    REQUIRE(e.samples.size() == 5);
    for (const auto& h : e.samples)
        CHECK((h - e.csit).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_csit_ensemble full error variance decorrelates") {
    const UserGroupLayout layout =
        UserGroupLayout::equal_groups(2, 1, {0.0}, {0.2});
    const AntennaArray array = AntennaArray::uniform_linear(4, 0.5);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        SeededRng rng(1000 + s);
        const CsitEnsemble e = sample_csit_ensemble(rng, layout, array, 1.0, 1);
        const RealVector a = to_real_pairs(e.csit);
        const RealVector b = to_real_pairs(e.samples[0]);
        dot += a.dot(b);
        na += a.squaredNorm();
        nb += b.squaredNorm();
    }
    CHECK(std::abs(dot / std::sqrt(na * nb)) < 0.1);
}

TEST_CASE("sample_csit_ensemble error statistics, uncorrelated antenna") {
    // N_t = 1 makes R = [1] exactly; checks both the per-entry variance and
    // E||h - sqrt(1-s2) hhat||^2 / N_t -> s2.
    const UserGroupLayout layout =
        UserGroupLayout::equal_groups(1, 1, {0.0}, {0.1});
    const AntennaArray array = AntennaArray::uniform_linear(1, 0.5);
    const double s2 = 0.4;
    double var = 0.0, err = 0.0;
    const int n = 10000;
    SeededRng rng(77);
    for (int i = 0; i < n; ++i) {
        SeededRng sub = rng.derive(static_cast<std::uint64_t>(i));
        const CsitEnsemble e = sample_csit_ensemble(sub, layout, array, s2, 1);
        var += std::norm(e.samples[0](0, 0));
        err += std::norm(e.samples[0](0, 0) -
                         std::sqrt(1.0 - s2) * e.csit(0, 0));
    }
    var /= n;
    err /= n;
    CHECK(var == doctest::Approx(1.0).epsilon(0.10));
    CHECK(err == doctest::Approx(s2).epsilon(0.05));
}

TEST_CASE("steering_vector linear broadside and quarter phase") {
    const AntennaArray array = AntennaArray::uniform_linear(4, 0.5);
    const ComplexVector broadside = steering_vector(array, 0.0);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(broadside[i] - Complex(1.0)) < 1e-12);

    // sin(pi/6) = 1/2 forces a pi/2 phase step
    const ComplexVector a = steering_vector(array, std::numbers::pi / 6.0);
    CHECK(std::abs(a[0] - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(a[1] - Complex(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(a[2] - Complex(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(a[3] - Complex(0.0, -1.0)) < 1e-12);
}

TEST_CASE("steering_vector unit modulus for both geometries") {
    const AntennaArray linear = AntennaArray::uniform_linear(6, 0.5);
    const AntennaArray circular = AntennaArray::uniform_circular(6);
    SeededRng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        for (const AntennaArray* arr : {&linear, &circular}) {
            const ComplexVector a = steering_vector(*arr, theta);
            for (Eigen::Index e = 0; e < a.size(); ++e)
                CHECK(std::abs(std::abs(a[e]) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("uniform_circular radius matches the closed form") {
    const Eigen::Index n = 8;
    const AntennaArray array = AntennaArray::uniform_circular(n);
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(n);
    const double d = 0.5 / std::sqrt((1.0 - std::cos(angle)) * (1.0 - std::cos(angle)) +
                                     std::sin(angle) * std::sin(angle));
    for (Eigen::Index i = 0; i < n; ++i)
        CHECK(array.positions.col(i).norm() == doctest::Approx(d).epsilon(1e-12));
    // adjacent elements half a wavelength apart by construction
    CHECK((array.positions.col(0) - array.positions.col(1)).norm() ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pathloss gains") {
    PathlossParams p; // defaults: -30 dB at 1 m, d_BR = 50, d_RU = 2.5, eps = 2
    CHECK(p.gain_tx_ris() == doctest::Approx(4e-7).epsilon(1e-12));
    PathlossParams ref = p;
    ref.dist_tx_ris = 1.0;
    CHECK(std::sqrt(ref.gain_tx_ris()) == doctest::Approx(0.0316227766).epsilon(1e-8));
}

TEST_CASE("sample_ris_link empirical channel power") {
    PathlossParams p;
    const double want = p.gain_tx_ris();
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < 100; ++i) {
        SeededRng rng(500 + i);
        const RisLink link = sample_ris_link(rng, 10, 1, 10, p, 1e-8);
        sum += link.tx_ris.squaredNorm();
        count += static_cast<int>(link.tx_ris.size());
    }
    CHECK(sum / count == doctest::Approx(want).epsilon(0.05));
}
