// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_CONFIG_HPP
#define METAOPT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "metaopt/channel.hpp"
#include "metaopt/errors.hpp"
#include "metaopt/meta.hpp"

namespace metaopt {

enum class Suite { Hrsma, Sdma, Isac, Ris, Bdris };

std::string suite_name(Suite s);
Suite parse_suite(const std::string& name); // throws ValidationError

// One experiment scenario. The on-disk form is a flat key = value file with
// dotted section prefixes; see docs in README and the bundled configs.
struct ScenarioConfig {
    Suite suite = Suite::Hrsma;

    // system.*
    Eigen::Index num_tx = 8;       // N_t antennas
    Eigen::Index num_users = 4;    // K
    Eigen::Index num_groups = 1;   // G (hrsma/sdma/isac)
    Eigen::Index num_elements = 0; // B, RIS elements (ris/bdris only)

    // saa.* / meta.*
    Eigen::Index num_samples = 32; // M channel samples per ensemble
    int iterations = 1000;         // T meta-optimizer steps
    double learning_rate = 1e-3;   // Adam beta
    Eigen::Index hidden_width = 400;

    // csit.*
    double error_variance = 0.0;   // sigma_e^2 in [0, 1]

    // grid.*: SNR in dB for hrsma/sdma/isac (P_t = 10^(snr/10), sigma_n^2 = 1);
    // transmit power in dBm for ris/bdris (sigma_n^2 = -80 dBm).
    std::vector<double> snr_db = {20.0};
    std::vector<double> lambda_grid = {0.0}; // isac regularizer sweep

    // qos.*
    double qos_lambda = 10.0;
    std::vector<double> thresholds; // bits/s/Hz per user; empty = no QoS

    // groups.*, radians, one entry per group
    std::vector<double> group_azimuths;
    std::vector<double> group_spreads;

    // isac.* / array.*
    std::vector<double> targets;   // radians
    ArrayGeometry geometry = ArrayGeometry::UniformCircular;
    double spacing = 0.5;          // wavelengths (linear arrays)

    // ris.*
    double ris_lambda = 1.0;       // unitarity penalty weight (bdris)
    double ris_learning_rate = 1e-4; // Adam rate of the scattering-matrix MLP
    bool literal_penalty = false;  // diagonal ||phi - 1||^2 fidelity flag
    int warm_iterations = 100;     // diagonal warm start length (bdris)

    // ris pathloss (paper defaults)
    double tx_ris_distance = 50.0;
    double ris_user_distance = 2.5;
    double pathloss_exponent = 2.0;
    double reference_gain_db = -30.0;
    double noise_power_dbm = -80.0;

    // run.* / output.*
    int realizations = 10;
    std::uint64_t seed = 1;
    bool emit_timing = false;      // record wall-clock seconds (breaks byte determinism)
    std::string output_path = "results.csv";

    void validate() const; // throws ValidationError, names the offending key
    UserGroupLayout layout() const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);
std::string serialize_config(const ScenarioConfig& config);

} // namespace metaopt

#endif
