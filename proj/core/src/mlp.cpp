// SPDX-License-Identifier: Apache-2.0

#include "metaopt/mlp.hpp"

#include <cmath>

namespace metaopt {

std::vector<Eigen::Index> MlpSpec::layer_dims() const {
    std::vector<Eigen::Index> dims;
    dims.push_back(input_width);
    dims.insert(dims.end(), hidden_widths.begin(), hidden_widths.end());
    dims.push_back(output_width);
    return dims;
}

void MlpSpec::validate() const {
    if (input_width < 1 || output_width < 1)
        throw std::invalid_argument("MlpSpec: widths must be positive");
    if (hidden_widths.size() != hidden_activations.size())
        throw std::invalid_argument("MlpSpec: one activation per hidden layer");
    for (auto w : hidden_widths)
        if (w < 1)
            throw std::invalid_argument("MlpSpec: hidden widths must be positive");
}

MlpSpec MlpSpec::precoder_learner(Eigen::Index width, Eigen::Index hidden) {
    MlpSpec s;
    s.input_width = width;
    s.output_width = width;
    s.hidden_widths = {hidden, hidden, hidden};
    s.hidden_activations = {Activation::Sigmoid, Activation::Tanh, Activation::Tanh};
    return s;
}

MlpSpec MlpSpec::ris_learner(Eigen::Index width, Eigen::Index hidden) {
    MlpSpec s;
    s.input_width = width;
    s.output_width = width;
    s.hidden_widths = {hidden, hidden, hidden, hidden};
    s.hidden_activations = {Activation::Sigmoid, Activation::Tanh, Activation::Tanh,
                            Activation::Identity};
    return s;
}

Eigen::Index MlpParams::flat_size() const {
    Eigen::Index n = 0;
    for (const auto& w : weights)
        n += w.size();
    for (const auto& b : biases)
        n += b.size();
    return n;
}

RealVector MlpParams::flatten() const {
    RealVector flat(flat_size());
    Eigen::Index off = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        flat.segment(off, weights[l].size()) =
            Eigen::Map<const RealVector>(weights[l].data(), weights[l].size());
        off += weights[l].size();
        flat.segment(off, biases[l].size()) = biases[l];
        off += biases[l].size();
    }
    return flat;
}

void MlpParams::set_from_flat(const RealVector& flat) {
    if (flat.size() != flat_size())
        throw DimensionMismatchError("MlpParams::set_from_flat: size mismatch");
    Eigen::Index off = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] = Eigen::Map<const RealMatrix>(flat.data() + off,
                                                  weights[l].rows(),
                                                  weights[l].cols());
        off += weights[l].size();
        biases[l] = flat.segment(off, biases[l].size());
        off += biases[l].size();
    }
}

MlpParams mlp_init(const MlpSpec& spec, SeededRng& rng) {
    spec.validate();
    const auto dims = spec.layer_dims();
    MlpParams p;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const Eigen::Index fan_in = dims[l];
        const Eigen::Index fan_out = dims[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        p.weights.push_back(rng.uniform_matrix(fan_out, fan_in, -limit, limit));
        p.biases.push_back(RealVector::Zero(fan_out));
    }
    return p;
}

MlpVars mlp_vars(Tape& tape, const MlpParams& params) {
    MlpVars v;
    for (const auto& w : params.weights)
        v.weights.push_back(tape.param(w));
    for (const auto& b : params.biases)
        v.biases.push_back(tape.param(b));
    return v;
}

RealVar mlp_forward(Tape& tape, const MlpVars& vars, const MlpSpec& spec, RealVar x) {
    spec.validate();
    if (vars.weights.size() != spec.hidden_widths.size() + 1)
        throw DimensionMismatchError("mlp_forward: layer count mismatch");
    RealVar h = x;
    for (std::size_t l = 0; l < vars.weights.size(); ++l) {
        h = tape.add(tape.matmul(vars.weights[l], h), vars.biases[l]);
        if (l < spec.hidden_activations.size()) {
            switch (spec.hidden_activations[l]) {
            case Activation::Sigmoid: h = tape.sigmoid(h); break;
            case Activation::Tanh: h = tape.tanh(h); break;
            case Activation::Identity: break;
            }
        }
    }
    return h;
}

RealVector mlp_eval(const MlpParams& params, const MlpSpec& spec, const RealVector& x) {
    RealVector h = x;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        h = params.weights[l] * h + params.biases[l];
        if (l < spec.hidden_activations.size()) {
            switch (spec.hidden_activations[l]) {
            case Activation::Sigmoid:
                h = (1.0 / (1.0 + (-h.array()).exp())).matrix();
                break;
            case Activation::Tanh:
                h = h.array().tanh();
                break;
            case Activation::Identity:
                break;
            }
        }
    }
    return h;
}

} // namespace metaopt
