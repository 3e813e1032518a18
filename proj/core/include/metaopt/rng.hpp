// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_RNG_HPP
#define METAOPT_RNG_HPP

#include <cstdint>
#include <random>
#include <string>

#include "metaopt/matrix.hpp"

namespace metaopt {

// Deterministic random source. The same (seed, stream) always yields the same
// sample sequence regardless of how many worker threads are running, because
// every parallel work item derives its own stream up front.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    const std::string& algorithm() const { return algorithm_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Independent child stream for a parallel work item.
    SeededRng derive(std::uint64_t substream) const;

    double uniform();                 // [0, 1)
    double uniform(double lo, double hi);
    double standard_normal();         // N(0, 1), Box-Muller, no cached state
    Complex standard_complex_normal();  // CN(0, 1): re, im ~ N(0, 1/2)

    ComplexMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
    RealMatrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo,
                              double hi);

private:
    std::string algorithm_ = "mt19937_64+box-muller";
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

} // namespace metaopt

#endif
