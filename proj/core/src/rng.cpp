// SPDX-License-Identifier: Apache-2.0

#include "metaopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace metaopt {

namespace {

// splitmix64, used only to decorrelate derived stream seeds.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix64(mix64(seed) ^ mix64(stream + 1))) {}

SeededRng SeededRng::derive(std::uint64_t substream) const {
    return SeededRng(seed_, mix64(stream_ + 1) ^ mix64(substream + 0x5bd1e995ULL));
}

double SeededRng::uniform() {
    // 53-bit mantissa; avoids distribution-object state.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double SeededRng::standard_normal() {
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

Complex SeededRng::standard_complex_normal() {
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1)); // radius for variance 1/2 per part
    return Complex(r * std::cos(2.0 * std::numbers::pi * u2),
                   r * std::sin(2.0 * std::numbers::pi * u2));
}

ComplexMatrix SeededRng::complex_gaussian_matrix(Eigen::Index rows,
                                                 Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = standard_complex_normal();
    return m;
}

RealMatrix SeededRng::uniform_matrix(Eigen::Index rows, Eigen::Index cols,
                                     double lo, double hi) {
    RealMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = uniform(lo, hi);
    return m;
}

} // namespace metaopt
