// SPDX-License-Identifier: Apache-2.0

#include "metaopt/adam.hpp"

#include <cmath>

namespace metaopt {

AdamState AdamState::create(Eigen::Index n, double learning_rate) {
    AdamState s;
    s.first_moment = RealVector::Zero(n);
    s.second_moment = RealVector::Zero(n);
    s.learning_rate = learning_rate;
    return s;
}

void adam_step(AdamState& state, RealVector& params, const RealVector& gradient) {
    if (params.size() != state.first_moment.size() ||
        gradient.size() != state.first_moment.size())
        throw DimensionMismatchError("adam_step: size mismatch");
    if (!gradient.allFinite())
        throw NonFiniteError("adam_step: non-finite gradient");

    state.step += 1;
    state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * gradient;
    state.second_moment =
        state.beta2 * state.second_moment.array() +
        (1.0 - state.beta2) * gradient.array().square();
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    params.array() -= state.learning_rate * (state.first_moment.array() / c1) /
                      ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

} // namespace metaopt
