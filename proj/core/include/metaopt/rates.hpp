// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_RATES_HPP
#define METAOPT_RATES_HPP

#include <vector>

#include "metaopt/channel.hpp"
#include "metaopt/matrix.hpp"

namespace metaopt {

enum class PrecoderMode { Hrsma, Sdma };

// Column layout [p_c | p_c,1 .. p_c,G | p_1 .. p_K], N_t x (K+G+1).
// SDMA keeps the layout with the common columns identically zero.
struct PrecoderMatrix {
    ComplexMatrix data;
    double power_budget = 1.0; // P_t, linear
    PrecoderMode mode = PrecoderMode::Hrsma;
    Eigen::Index num_users = 0;  // K
    Eigen::Index num_groups = 0; // G

    Eigen::Index num_streams() const { return num_users + num_groups + 1; }
    Eigen::Index global_col() const { return 0; }
    Eigen::Index group_col(Eigen::Index g) const { return 1 + g; }
    Eigen::Index private_col(Eigen::Index k) const { return 1 + num_groups + k; }
    double power() const { return data.squaredNorm(); } // trace(P P^H)
};

// Per-user achievable rates of the SIC cascade, bits/s/Hz.
struct StreamRates {
    RealVector global_common; // R_c,k
    RealVector group_common;  // R_c,g(k),k (own group)
    RealVector private_rate;  // R_k
};

// Sample-averaged rates plus the committed common rates (minima).
struct SafRates {
    RealVector global_common; // per user
    RealVector group_common;  // per user
    RealVector private_rate;  // per user
    double committed_global = 0.0;       // min_k global_common
    RealVector committed_group;          // per group: min over members
    double average_sum_rate() const;     // ASR
};

// gamma_c / gamma_c,g / gamma_p cascade of H-RSMA for one channel sample.
StreamRates hrsma_stream_rates(const ComplexMatrix& h, const PrecoderMatrix& p,
                               const UserGroupLayout& layout, double noise_power);

// Arithmetic mean of hrsma_stream_rates over the ensemble samples, fixed
// summation order for bit-reproducibility.
SafRates saf_rates(const CsitEnsemble& ensemble, const PrecoderMatrix& p,
                   const UserGroupLayout& layout, double noise_power);

// Sum over targets of a_t^H(theta) (P P^H) a_t(theta).
double probing_power(const PrecoderMatrix& p, const std::vector<double>& targets,
                     const AntennaArray& array);

struct BeampatternTable {
    std::vector<double> angles;
    RealVector total;             // b(theta) per angle
    RealMatrix per_stream;        // angles x streams, |a^H p_d|^2
};

BeampatternTable beampattern(const PrecoderMatrix& p, const AntennaArray& array,
                             const std::vector<double>& angles);

// Per-user rates of the RIS-aided downlink for a given scattering matrix.
RealVector ris_user_rates(const RisLink& link, const ComplexMatrix& phi,
                          const ComplexMatrix& precoder);

} // namespace metaopt

#endif
