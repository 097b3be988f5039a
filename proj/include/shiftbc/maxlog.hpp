#pragma once

#include <utility>
#include <vector>

#include "shiftbc/index_family.hpp"
#include "shiftbc/symbolic.hpp"
#include "shiftbc/trajectory.hpp"

namespace shiftbc {

// Running maximum over n <= N of min_i gamma * (disagreement radius of the
// q_i(n)-shifted trajectory against target i), reported at the requested
// checkpoints.  If a comparison reaches the edge of a target while still
// agreeing, the value is unresolved and a resolution error names (n, i).
std::vector<std::pair<long long, double>> max_log_distance(
    Trajectory& trajectory, const std::vector<SymbolWindow>& targets,
    const IndexFamily& family, long long n_max, const DistanceParams& params,
    const std::vector<long long>& checkpoints);

}  // namespace shiftbc
