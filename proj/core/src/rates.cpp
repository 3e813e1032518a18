// SPDX-License-Identifier: Apache-2.0

#include "metaopt/rates.hpp"

#include <cmath>
#include <numbers>

namespace metaopt {

namespace {
const double kInvLn2 = 1.0 / std::numbers::ln2;
}

double SafRates::average_sum_rate() const {
    return committed_global + committed_group.sum() + private_rate.sum();
}

StreamRates hrsma_stream_rates(const ComplexMatrix& h, const PrecoderMatrix& p,
                               const UserGroupLayout& layout, double noise_power) {
    const Eigen::Index k = layout.num_users;
    const Eigen::Index g = layout.num_groups;
    if (h.cols() != k || h.rows() != p.data.rows() ||
        p.data.cols() != p.num_streams() || p.num_users != k || p.num_groups != g)
        throw DimensionMismatchError("hrsma_stream_rates: dimension mismatch");
    if (noise_power <= 0.0)
        throw std::invalid_argument("hrsma_stream_rates: noise power must be positive");

    // q(u, d) = |h_u^H p_d|^2
    const RealMatrix q = (h.adjoint() * p.data).cwiseAbs2();

    StreamRates out;
    out.global_common.resize(k);
    out.group_common.resize(k);
    out.private_rate.resize(k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const Eigen::Index grp = layout.group_of(u);
        double group_total = 0.0;
        for (Eigen::Index j = 0; j < g; ++j)
            group_total += q(u, p.group_col(j));
        double private_total = 0.0;
        for (Eigen::Index j = 0; j < k; ++j)
            private_total += q(u, p.private_col(j));

        const double own_group = q(u, p.group_col(grp));
        const double own_private = q(u, p.private_col(u));

        const double den_c = group_total + private_total + noise_power;
        const double den_g = (group_total - own_group) + private_total + noise_power;
        const double den_p =
            (group_total - own_group) + (private_total - own_private) + noise_power;

        out.global_common[u] = std::log1p(q(u, p.global_col()) / den_c) * kInvLn2;
        out.group_common[u] = std::log1p(own_group / den_g) * kInvLn2;
        out.private_rate[u] = std::log1p(own_private / den_p) * kInvLn2;
    }
    return out;
}

SafRates saf_rates(const CsitEnsemble& ensemble, const PrecoderMatrix& p,
                   const UserGroupLayout& layout, double noise_power) {
    if (ensemble.samples.empty())
        throw std::invalid_argument("saf_rates: ensemble has no samples");
    const Eigen::Index k = layout.num_users;
    SafRates out;
    out.global_common = RealVector::Zero(k);
    out.group_common = RealVector::Zero(k);
    out.private_rate = RealVector::Zero(k);
    for (const auto& h : ensemble.samples) {
        const StreamRates r = hrsma_stream_rates(h, p, layout, noise_power);
        out.global_common += r.global_common;
        out.group_common += r.group_common;
        out.private_rate += r.private_rate;
    }
    const double inv_m = 1.0 / static_cast<double>(ensemble.samples.size());
    out.global_common *= inv_m;
    out.group_common *= inv_m;
    out.private_rate *= inv_m;

    out.committed_global = out.global_common.minCoeff();
    out.committed_group.resize(layout.num_groups);
    for (Eigen::Index g = 0; g < layout.num_groups; ++g) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index u : layout.group_members(g))
            best = std::min(best, out.group_common[u]);
        out.committed_group[g] = best;
    }
    return out;
}

double probing_power(const PrecoderMatrix& p, const std::vector<double>& targets,
                     const AntennaArray& array) {
    if (targets.empty())
        throw std::invalid_argument("probing_power: no targets");
    double total = 0.0;
    for (double theta : targets) {
        const ComplexVector a = steering_vector(array, theta);
        total += (a.adjoint() * p.data).squaredNorm();
    }
    return total;
}

BeampatternTable beampattern(const PrecoderMatrix& p, const AntennaArray& array,
                             const std::vector<double>& angles) {
    if (angles.empty())
        throw std::invalid_argument("beampattern: empty angle grid");
    BeampatternTable t;
    t.angles = angles;
    const Eigen::Index n = static_cast<Eigen::Index>(angles.size());
    t.total.resize(n);
    t.per_stream.resize(n, p.data.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const ComplexVector a = steering_vector(array, angles[i]);
        const Eigen::RowVectorXcd row = a.adjoint() * p.data;
        t.per_stream.row(i) = row.cwiseAbs2();
        t.total[i] = t.per_stream.row(i).sum();
    }
    return t;
}

RealVector ris_user_rates(const RisLink& link, const ComplexMatrix& phi,
                          const ComplexMatrix& precoder) {
    const Eigen::Index k = static_cast<Eigen::Index>(link.ris_user.size());
    const Eigen::Index b = link.tx_ris.rows();
    if (phi.rows() != b || phi.cols() != b || precoder.rows() != link.tx_ris.cols() ||
        precoder.cols() != k)
        throw DimensionMismatchError("ris_user_rates: dimension mismatch");
    RealVector rates(k);
    const ComplexMatrix effective = phi * link.tx_ris * precoder; // B x K
    for (Eigen::Index u = 0; u < k; ++u) {
        const Eigen::RowVectorXcd row = link.ris_user[u].adjoint() * effective;
        const RealVector pw = row.cwiseAbs2();
        const double signal = pw[u];
        const double interference = pw.sum() - signal;
        rates[u] = std::log1p(signal / (interference + link.noise_power)) * kInvLn2;
    }
    return rates;
}

} // namespace metaopt
