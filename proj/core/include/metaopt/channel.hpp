// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_CHANNEL_HPP
#define METAOPT_CHANNEL_HPP

#include <vector>

#include "metaopt/matrix.hpp"
#include "metaopt/rng.hpp"

namespace metaopt {

enum class ArrayGeometry { UniformLinear, UniformCircular };

// Transmit array; element positions are 2-D coordinates in wavelength units,
// so phase terms never need an explicit 1/lambda.
struct AntennaArray {
    ArrayGeometry geometry = ArrayGeometry::UniformLinear;
    double spacing = 0.5;     // delta, wavelengths (linear geometry)
    RealMatrix positions;     // 2 x N_t

    Eigen::Index size() const { return positions.cols(); }

    // ULA along the x axis with the given normalized spacing.
    static AntennaArray uniform_linear(Eigen::Index n, double spacing = 0.5);
    // UCA of radius lambda*D with D = 0.5 / sqrt((1-cos(2pi/n))^2 + sin(2pi/n)^2),
    // elements equally spaced on the circle.
    static AntennaArray uniform_circular(Eigen::Index n);
};

struct UserGroupLayout {
    Eigen::Index num_users = 0;              // K
    Eigen::Index num_groups = 0;             // G
    std::vector<Eigen::Index> membership;    // user -> group
    std::vector<double> azimuths;            // theta_k, radians, per user
    std::vector<double> spreads;             // Delta_k, radians, per user

    Eigen::Index group_of(Eigen::Index k) const { return membership[k]; }
    Eigen::Index group_size(Eigen::Index g) const;
    std::vector<Eigen::Index> group_members(Eigen::Index g) const;
    void validate() const; // throws InconsistentGroupingError

    // K users split as evenly as possible over G groups; users in group g get
    // that group's azimuth and spread.
    static UserGroupLayout equal_groups(Eigen::Index k, Eigen::Index g,
                                        const std::vector<double>& group_azimuths,
                                        const std::vector<double>& group_spreads);
};

// One CSIT realization plus its M conditional CSI samples.
struct CsitEnsemble {
    ComplexMatrix csit;                     // H_hat, N_t x K
    double error_variance = 0.0;            // sigma_e^2 in [0, 1]
    std::vector<ComplexMatrix> samples;     // H^(m), N_t x K each
    std::vector<ComplexMatrix> correlation_roots; // R_k^{1/2} per user
};

struct PathlossParams {
    double attenuation_ref_db = -30.0; // xi_0 at d_0
    double reference_distance = 1.0;   // d_0, meters
    double dist_tx_ris = 50.0;         // d_BR, meters
    double dist_ris_user = 2.5;        // d_RU, meters
    double exponent_tx_ris = 2.0;      // eps_BR
    double exponent_ris_user = 2.0;    // eps_RU

    double gain_tx_ris() const;        // xi_BR, linear power scale
    double gain_ris_user() const;      // xi_RU
};

// Two-hop RIS channel: transmitter -> RIS matrix and RIS -> user vectors.
struct RisLink {
    ComplexMatrix tx_ris;              // G, B x N_t (pathloss applied)
    std::vector<ComplexVector> ris_user; // h_k, B each (pathloss applied)
    double noise_power = 1.0;          // sigma_n^2 per user, linear
};

// One-ring correlation matrix:
// [R]_{ij} = (1/2 Delta) int_{theta-Delta}^{theta+Delta}
//            exp(-j 2 pi Psi(a).(r_i - r_j)) da, Psi(a) = (cos a, sin a).
// Fixed-order Gauss-Legendre evaluation; Hermitian with unit diagonal.
ComplexMatrix one_ring_correlation(const AntennaArray& array, double azimuth,
                                   double spread, int quadrature_points = 128);

// Draws Hhat and the M conditional samples
// H^(m) = sqrt(1 - sigma_e^2) Hhat + sigma_e * Htilde^(m),
// every column shaped by its user's correlation root.
CsitEnsemble sample_csit_ensemble(SeededRng& rng, const UserGroupLayout& layout,
                                  const AntennaArray& array,
                                  double error_variance, int num_samples,
                                  int quadrature_points = 128);

// a_t(theta). Linear geometry: [1, e^{j2 pi delta sin t}, ...]; circular (and
// any position-based) geometry: e^{-j 2 pi Psi(theta).r_i} per element.
ComplexVector steering_vector(const AntennaArray& array, double theta);

RisLink sample_ris_link(SeededRng& rng, Eigen::Index num_tx, Eigen::Index num_users,
                        Eigen::Index num_elements, const PathlossParams& pathloss,
                        double noise_power);

} // namespace metaopt

#endif
