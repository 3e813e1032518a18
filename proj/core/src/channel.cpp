// SPDX-License-Identifier: Apache-2.0

#include "metaopt/channel.hpp"

#include <cmath>
#include <numbers>

#include "metaopt/linalg.hpp"

namespace metaopt {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AntennaArray AntennaArray::uniform_linear(Eigen::Index n, double spacing) {
    if (n < 1)
        throw std::invalid_argument("AntennaArray: need at least one element");
    AntennaArray a;
    a.geometry = ArrayGeometry::UniformLinear;
    a.spacing = spacing;
    a.positions.resize(2, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a.positions(0, i) = spacing * static_cast<double>(i);
        a.positions(1, i) = 0.0;
    }
    return a;
}

AntennaArray AntennaArray::uniform_circular(Eigen::Index n) {
    if (n < 1)
        throw std::invalid_argument("AntennaArray: need at least one element");
    AntennaArray a;
    a.geometry = ArrayGeometry::UniformCircular;
    a.positions.resize(2, n);
    const double phi = kTwoPi / static_cast<double>(n);
    const double radius =
        0.5 / std::sqrt((1.0 - std::cos(phi)) * (1.0 - std::cos(phi)) +
                        std::sin(phi) * std::sin(phi));
    for (Eigen::Index i = 0; i < n; ++i) {
        a.positions(0, i) = radius * std::cos(phi * static_cast<double>(i));
        a.positions(1, i) = radius * std::sin(phi * static_cast<double>(i));
    }
    return a;
}

Eigen::Index UserGroupLayout::group_size(Eigen::Index g) const {
    Eigen::Index c = 0;
    for (auto m : membership)
        if (m == g)
            ++c;
    return c;
}

std::vector<Eigen::Index> UserGroupLayout::group_members(Eigen::Index g) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index k = 0; k < num_users; ++k)
        if (membership[k] == g)
            out.push_back(k);
    return out;
}

void UserGroupLayout::validate() const {
    if (static_cast<Eigen::Index>(membership.size()) != num_users ||
        static_cast<Eigen::Index>(azimuths.size()) != num_users ||
        static_cast<Eigen::Index>(spreads.size()) != num_users)
        throw InconsistentGroupingError("UserGroupLayout: field sizes disagree");
    Eigen::Index total = 0;
    for (Eigen::Index g = 0; g < num_groups; ++g)
        total += group_size(g);
    for (auto m : membership)
        if (m < 0 || m >= num_groups)
            throw InconsistentGroupingError("UserGroupLayout: bad group index");
    if (total != num_users)
        throw InconsistentGroupingError("UserGroupLayout: group sizes do not sum to K");
}

UserGroupLayout UserGroupLayout::equal_groups(
    Eigen::Index k, Eigen::Index g, const std::vector<double>& group_azimuths,
    const std::vector<double>& group_spreads) {
    if (g < 1 || k < g)
        throw InconsistentGroupingError("equal_groups: need K >= G >= 1");
    if (static_cast<Eigen::Index>(group_azimuths.size()) != g ||
        static_cast<Eigen::Index>(group_spreads.size()) != g)
        throw InconsistentGroupingError("equal_groups: need one azimuth/spread per group");
    UserGroupLayout l;
    l.num_users = k;
    l.num_groups = g;
    l.membership.resize(k);
    l.azimuths.resize(k);
    l.spreads.resize(k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const Eigen::Index grp = (u * g) / k; // contiguous blocks, sizes within one
        l.membership[u] = grp;
        l.azimuths[u] = group_azimuths[grp];
        l.spreads[u] = group_spreads[grp];
    }
    return l;
}

double PathlossParams::gain_tx_ris() const {
    return std::pow(10.0, attenuation_ref_db / 10.0) *
           std::pow(dist_tx_ris / reference_distance, -exponent_tx_ris);
}

double PathlossParams::gain_ris_user() const {
    return std::pow(10.0, attenuation_ref_db / 10.0) *
           std::pow(dist_ris_user / reference_distance, -exponent_ris_user);
}

ComplexMatrix one_ring_correlation(const AntennaArray& array, double azimuth,
                                   double spread, int quadrature_points) {
    if (spread <= 0.0)
        throw std::invalid_argument("one_ring_correlation: degenerate spread");
    if (quadrature_points < 1)
        throw std::invalid_argument("one_ring_correlation: need quadrature points");
    const Eigen::Index n = array.size();
    const Quadrature q = gauss_legendre(quadrature_points);

    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (int p = 0; p < quadrature_points; ++p) {
        const double alpha = azimuth + spread * q.nodes[p];
        const double wx = std::cos(alpha);
        const double wy = std::sin(alpha);
        // Per-node phase e^{-j 2 pi Psi(alpha).r_i}; the pairwise term is the
        // outer product v v^H, weight already includes the 1/(2 Delta) factor
        // through the normalized GL weights (sum w = 2 maps to interval 2 Delta).
        ComplexVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phase =
                -kTwoPi * (wx * array.positions(0, i) + wy * array.positions(1, i));
            v[i] = Complex(std::cos(phase), std::sin(phase));
        }
        r.noalias() += (0.5 * q.weights[p]) * (v * v.adjoint());
    }
    // Exact Hermitian symmetry and unit diagonal up to quadrature error.
    r = (r + r.adjoint()) / 2.0;
    return r;
}

CsitEnsemble sample_csit_ensemble(SeededRng& rng, const UserGroupLayout& layout,
                                  const AntennaArray& array,
                                  double error_variance, int num_samples,
                                  int quadrature_points) {
    if (error_variance < 0.0 || error_variance > 1.0)
        throw std::invalid_argument("sample_csit_ensemble: sigma_e^2 outside [0,1]");
    if (num_samples < 1)
        throw std::invalid_argument("sample_csit_ensemble: need M >= 1");
    layout.validate();

    const Eigen::Index nt = array.size();
    const Eigen::Index k = layout.num_users;
    CsitEnsemble e;
    e.error_variance = error_variance;
    e.correlation_roots.reserve(k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const ComplexMatrix r = one_ring_correlation(
            array, layout.azimuths[u], layout.spreads[u], quadrature_points);
        e.correlation_roots.push_back(hermitian_sqrt(r, 1e-9));
    }

    e.csit.resize(nt, k);
    for (Eigen::Index u = 0; u < k; ++u)
        e.csit.col(u) = e.correlation_roots[u] * rng.complex_gaussian_matrix(nt, 1);

    const double keep = std::sqrt(1.0 - error_variance);
    const double err = std::sqrt(error_variance);
    e.samples.reserve(num_samples);
    for (int m = 0; m < num_samples; ++m) {
        ComplexMatrix h(nt, k);
        for (Eigen::Index u = 0; u < k; ++u) {
            const ComplexMatrix tilde =
                e.correlation_roots[u] * rng.complex_gaussian_matrix(nt, 1);
            h.col(u) = keep * e.csit.col(u) + err * tilde.col(0);
        }
        e.samples.push_back(std::move(h));
    }
    return e;
}

ComplexVector steering_vector(const AntennaArray& array, double theta) {
    const Eigen::Index n = array.size();
    ComplexVector a(n);
    if (array.geometry == ArrayGeometry::UniformLinear) {
        const double step = kTwoPi * array.spacing * std::sin(theta);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phase = step * static_cast<double>(i);
            a[i] = Complex(std::cos(phase), std::sin(phase));
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phase =
                -kTwoPi * (std::cos(theta) * array.positions(0, i) +
                           std::sin(theta) * array.positions(1, i));
            a[i] = Complex(std::cos(phase), std::sin(phase));
        }
    }
    return a;
}

RisLink sample_ris_link(SeededRng& rng, Eigen::Index num_tx, Eigen::Index num_users,
                        Eigen::Index num_elements, const PathlossParams& pathloss,
                        double noise_power) {
    if (pathloss.dist_tx_ris <= 0.0 || pathloss.dist_ris_user <= 0.0 ||
        pathloss.reference_distance <= 0.0)
        throw std::invalid_argument("sample_ris_link: distances must be positive");
    RisLink link;
    link.noise_power = noise_power;
    link.tx_ris = std::sqrt(pathloss.gain_tx_ris()) *
                  rng.complex_gaussian_matrix(num_elements, num_tx);
    const double amp = std::sqrt(pathloss.gain_ris_user());
    link.ris_user.reserve(num_users);
    for (Eigen::Index u = 0; u < num_users; ++u)
        link.ris_user.push_back(amp * rng.complex_gaussian_matrix(num_elements, 1));
    return link;
}

} // namespace metaopt
