// SPDX-License-Identifier: Apache-2.0

#include "metaopt/allocation.hpp"

namespace metaopt {

AllocationResult allocate_common_rates(const AllocationInput& input,
                                       const UserGroupLayout& layout) {
    std::vector<double> groups(input.group_common.begin(), input.group_common.end());
    std::vector<double> privates(input.private_saf.begin(), input.private_saf.end());
    std::vector<double> thresholds(input.thresholds.begin(), input.thresholds.end());
    const std::vector<double> alloc = allocate_common_generic(
        input.global_common, groups, privates, thresholds, layout, PlainAllocOps{});
    AllocationResult r;
    r.allocated = Eigen::Map<const RealVector>(alloc.data(),
                                               static_cast<Eigen::Index>(alloc.size()));
    return r;
}

} // namespace metaopt
