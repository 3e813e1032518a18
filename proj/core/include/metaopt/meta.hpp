// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_META_HPP
#define METAOPT_META_HPP

#include <functional>
#include <vector>

#include "metaopt/adam.hpp"
#include "metaopt/allocation.hpp"
#include "metaopt/mlp.hpp"
#include "metaopt/rates.hpp"
#include "metaopt/tape.hpp"

namespace metaopt {

enum class RisMode { Diagonal, FullyConnected };

// RIS variable in either diagonal-phase form (B real phases) or reciprocal
// upper-triangular form (B(B+1)/2 complex entries as a real pair vector).
struct ScatteringParams {
    RisMode mode = RisMode::Diagonal;
    Eigen::Index num_elements = 0;
    RealVector values; // B phases, or [re; im] of the packed upper triangle

    ComplexMatrix materialize() const; // Phi
    static ScatteringParams identity_diagonal(Eigen::Index b); // omega = 0
    // Diagonal Phi embedded into the upper-triangular form (off-diagonals zero).
    ScatteringParams embed_fully_connected() const;
};

// Scale P onto the power ball when trace(P P^H) > P_t; identity otherwise.
PrecoderMatrix project_power(const PrecoderMatrix& p);

// An objective builds the tape-recorded loss for a candidate variable x
// (flattened real vector) and reports the realized (post-projection)
// variable value through `realized`.
using ObjectiveFn =
    std::function<RealVar(Tape&, RealVar x, RealVector& realized)>;
using DualObjectiveFn = std::function<RealVar(
    Tape&, RealVar xa, RealVar xb, RealVector& realized_a, RealVector& realized_b)>;

struct MetaResult {
    double initial_loss = 0.0;
    double best_loss = 0.0;
    RealVector best_x;              // realized variable at the best iterate
    std::vector<double> loss_trace; // per-iteration loss, length T
};

struct DualMetaResult {
    double initial_loss = 0.0;
    double best_loss = 0.0;
    RealVector best_a;
    RealVector best_b;
    std::vector<double> loss_trace;
};

// Algorithm parameters for one run; Adam moments live inside the run.
struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Single-variable loop: fixed input gradient g0 = grad of the loss at x0,
// per iteration x = project(x0 + MLP(g0)), best iterate buffered, MLP weights
// Adam-updated against the meta-loss.
MetaResult meta_optimize_single(const ObjectiveFn& objective, const RealVector& x0,
                                const MlpSpec& spec, int iterations,
                                double learning_rate, SeededRng& rng,
                                const AdamHyper& hyper = {});

// Two variables, one MLP each with its own fixed input gradient; joint loss
// evaluated once per iteration, each MLP updated from its own weight gradient.
DualMetaResult meta_optimize_dual(const DualObjectiveFn& objective,
                                  const RealVector& x0a, const RealVector& x0b,
                                  const MlpSpec& spec_a, const MlpSpec& spec_b,
                                  int iterations, double learning_rate_a,
                                  double learning_rate_b, SeededRng& rng,
                                  const AdamHyper& hyper = {});

// ----- Objective factories ------------------------------------------------

// H-RSMA/SDMA SAA meta-loss: -[min_k SAF_c + sum_g min SAF_c,g + sum_k SAF_k]
// minus lambda times the QoS deficit of the allocated rates (Algorithm 2
// branches frozen per iterate). SDMA mode optimizes the private columns only.
ObjectiveFn hrsma_objective(const CsitEnsemble& ensemble,
                            const UserGroupLayout& layout, PrecoderMode mode,
                            double noise_power, double power_budget,
                            const RealVector& thresholds, double qos_lambda);

// ISAC meta-loss: -ASR - lambda * sum probing power at the target angles.
ObjectiveFn isac_objective(const CsitEnsemble& ensemble,
                           const UserGroupLayout& layout, PrecoderMode mode,
                           double noise_power, double power_budget,
                           const std::vector<double>& targets,
                           const AntennaArray& array, double lambda);

// RIS/BD-RIS joint meta-loss over (P, Phi): -sum_k R_k + lambda * f2(Phi).
// Diagonal mode parameterizes Phi by phases (f2 = 0 by construction unless
// the literal ||phi - 1||^2 penalty is requested); fully-connected mode uses
// the reciprocal upper-triangular parameterization with
// f2 = ||Phi^H Phi - I||_F^2. The precoder is projected; Phi is not.
DualObjectiveFn ris_objective(const RisLink& link, RisMode mode,
                              double power_budget, double lambda,
                              bool literal_diagonal_penalty = false);

// Variable dimensions for the factories above.
Eigen::Index precoder_dim(Eigen::Index num_tx, Eigen::Index num_users,
                          Eigen::Index num_groups, PrecoderMode mode);
Eigen::Index ris_variable_dim(Eigen::Index num_elements, RisMode mode);

// ----- Initializations ----------------------------------------------------

struct PowerSplit {
    double global = 0.70;
    double group = 0.25;
    double private_ = 0.05;
};

// SVD-MRT precoder: dominant left singular vectors for the common columns,
// matched filtering for the private ones, power split over the stream tiers.
// SDMA mode zeroes the common columns and spreads all power over the privates.
PrecoderMatrix svd_mrt_init(const CsitEnsemble& ensemble,
                            const UserGroupLayout& layout, double power_budget,
                            PrecoderMode mode = PrecoderMode::Hrsma,
                            const PowerSplit& split = {});

// MRT toward the effective channel through an identity scattering matrix.
ComplexMatrix ris_mrt_init(const RisLink& link, double power_budget);

// Short diagonal-mode run whose best phases seed the fully-connected
// parameterization (off-diagonal parameters zero).
ScatteringParams ris_warm_start(const RisLink& link, const ComplexMatrix& p0,
                                double power_budget, int warm_iterations,
                                double learning_rate_p, double learning_rate_phi,
                                SeededRng& rng, Eigen::Index hidden_width = 400);

// Flatten helpers between precoder matrices and optimizer variables.
RealVector precoder_to_variable(const PrecoderMatrix& p);
PrecoderMatrix variable_to_precoder(const RealVector& x, Eigen::Index num_tx,
                                    Eigen::Index num_users, Eigen::Index num_groups,
                                    PrecoderMode mode, double power_budget);

} // namespace metaopt

#endif
