// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_ADAM_HPP
#define METAOPT_ADAM_HPP

#include "metaopt/matrix.hpp"

namespace metaopt {

// Bias-corrected Adam over a flat parameter vector. The update decreases the
// recorded loss: x <- x - lr * m_hat / (sqrt(v_hat) + eps).
struct AdamState {
    RealVector first_moment;
    RealVector second_moment;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double learning_rate = 1e-3;

    static AdamState create(Eigen::Index n, double learning_rate);
};

void adam_step(AdamState& state, RealVector& params, const RealVector& gradient);

} // namespace metaopt

#endif
