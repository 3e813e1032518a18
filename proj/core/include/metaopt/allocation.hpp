// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_ALLOCATION_HPP
#define METAOPT_ALLOCATION_HPP

#include <vector>

#include "metaopt/channel.hpp"
#include "metaopt/matrix.hpp"

namespace metaopt {

struct AllocationInput {
    double global_common = 0.0;   // committed global common SAF
    RealVector group_common;      // committed group common SAF per group
    RealVector private_saf;       // per user
    RealVector thresholds;        // QoS targets per user
};

struct AllocationResult {
    RealVector allocated; // per-user total after distributing the common budgets
};

// Greedy distribution of the committed global and group common rates:
// per group, walk deficient members in index order filling up to threshold
// until the group budget runs out (partial fill, then break); leftover split
// equally among the group's members. If deficits remain, repeat over all
// users from the global budget; otherwise split the global budget equally.
// Branch predicates compare Ops::val; arithmetic goes through Ops, so the
// same transcription drives both the plain and the tape-recorded path.
template <class S, class Ops>
std::vector<S> allocate_common_generic(const S& global_budget,
                                       const std::vector<S>& group_budgets,
                                       const std::vector<S>& private_saf,
                                       const std::vector<double>& thresholds,
                                       const UserGroupLayout& layout, Ops ops) {
    const Eigen::Index k = layout.num_users;
    const Eigen::Index g = layout.num_groups;
    if (static_cast<Eigen::Index>(group_budgets.size()) != g ||
        static_cast<Eigen::Index>(private_saf.size()) != k ||
        static_cast<Eigen::Index>(thresholds.size()) != k)
        throw InconsistentGroupingError("allocate_common_rates: input sizes disagree");
    layout.validate();

    std::vector<S> alloc = private_saf;
    auto deficient = [&](Eigen::Index u) { return ops.val(alloc[u]) < thresholds[u]; };
    auto count_deficits = [&] {
        int c = 0;
        for (Eigen::Index u = 0; u < k; ++u)
            if (deficient(u))
                ++c;
        return c;
    };

    if (count_deficits() > 0) {
        for (Eigen::Index grp = 0; grp < g; ++grp) {
            S avail = group_budgets[grp];
            const auto members = layout.group_members(grp);
            for (Eigen::Index u : members) {
                if (!deficient(u))
                    continue;
                S need = ops.sub(ops.constant(thresholds[u]), alloc[u]);
                if (ops.val(avail) > ops.val(need)) {
                    avail = ops.sub(avail, need);
                    alloc[u] = ops.add(alloc[u], need);
                } else {
                    alloc[u] = ops.add(alloc[u], avail);
                    avail = ops.constant(0.0);
                    break;
                }
            }
            if (ops.val(avail) > 0.0) {
                const double inv = 1.0 / static_cast<double>(members.size());
                for (Eigen::Index u : members)
                    alloc[u] = ops.add(alloc[u], ops.scale(avail, inv));
            }
        }
        if (count_deficits() > 0) {
            S avail = global_budget;
            for (Eigen::Index u = 0; u < k; ++u) {
                if (!deficient(u))
                    continue;
                S need = ops.sub(ops.constant(thresholds[u]), alloc[u]);
                if (ops.val(avail) > ops.val(need)) {
                    avail = ops.sub(avail, need);
                    alloc[u] = ops.add(alloc[u], need);
                } else {
                    alloc[u] = ops.add(alloc[u], avail);
                    avail = ops.constant(0.0);
                    break;
                }
            }
            if (ops.val(avail) > 0.0) {
                const double inv = 1.0 / static_cast<double>(k);
                for (Eigen::Index u = 0; u < k; ++u)
                    alloc[u] = ops.add(alloc[u], ops.scale(avail, inv));
            }
        } else {
            const double inv = 1.0 / static_cast<double>(k);
            for (Eigen::Index u = 0; u < k; ++u)
                alloc[u] = ops.add(alloc[u], ops.scale(global_budget, inv));
        }
    } else {
        for (Eigen::Index grp = 0; grp < g; ++grp) {
            const auto members = layout.group_members(grp);
            const double inv = 1.0 / static_cast<double>(members.size());
            for (Eigen::Index u : members)
                alloc[u] = ops.add(alloc[u], ops.scale(group_budgets[grp], inv));
        }
        const double inv = 1.0 / static_cast<double>(k);
        for (Eigen::Index u = 0; u < k; ++u)
            alloc[u] = ops.add(alloc[u], ops.scale(global_budget, inv));
    }
    return alloc;
}

struct PlainAllocOps {
    double add(double a, double b) const { return a + b; }
    double sub(double a, double b) const { return a - b; }
    double scale(double a, double s) const { return a * s; }
    double val(double a) const { return a; }
    double constant(double v) const { return v; }
};

AllocationResult allocate_common_rates(const AllocationInput& input,
                                       const UserGroupLayout& layout);

} // namespace metaopt

#endif
