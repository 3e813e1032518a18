// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_MLP_HPP
#define METAOPT_MLP_HPP

#include <vector>

#include "metaopt/matrix.hpp"
#include "metaopt/rng.hpp"
#include "metaopt/tape.hpp"

namespace metaopt {

enum class Activation { Sigmoid, Tanh, Identity };

struct MlpSpec {
    Eigen::Index input_width = 0;
    std::vector<Eigen::Index> hidden_widths;
    std::vector<Activation> hidden_activations; // one per hidden layer
    Eigen::Index output_width = 0;              // output layer has no activation

    std::vector<Eigen::Index> layer_dims() const; // [in, hidden..., out]
    void validate() const;

    // Precoder base learner: three hidden layers, sigmoid then tanh, tanh.
    static MlpSpec precoder_learner(Eigen::Index width, Eigen::Index hidden = 400);
    // RIS/BD-RIS base learner: four hidden layers, sigmoid, tanh, tanh, identity.
    static MlpSpec ris_learner(Eigen::Index width, Eigen::Index hidden = 400);
};

struct MlpParams {
    std::vector<RealMatrix> weights;
    std::vector<RealVector> biases;

    Eigen::Index flat_size() const;
    RealVector flatten() const;
    void set_from_flat(const RealVector& flat);
};

// Glorot-uniform weights (±sqrt(6/(fan_in+fan_out))), zero biases.
MlpParams mlp_init(const MlpSpec& spec, SeededRng& rng);

// Tape-recorded parameter slots for one forward/backward pass.
struct MlpVars {
    std::vector<RealVar> weights;
    std::vector<RealVar> biases;
};
MlpVars mlp_vars(Tape& tape, const MlpParams& params);

RealVar mlp_forward(Tape& tape, const MlpVars& vars, const MlpSpec& spec, RealVar x);

// Plain (untaped) forward pass.
RealVector mlp_eval(const MlpParams& params, const MlpSpec& spec, const RealVector& x);

} // namespace metaopt

#endif
