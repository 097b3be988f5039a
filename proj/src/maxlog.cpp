#include "shiftbc/maxlog.hpp"

#include <algorithm>
#include <string>

namespace shiftbc {

namespace {

long long shifted_radius(Trajectory& trajectory, const SymbolWindow& target,
                         long long shift, long long n, int i) {
  const bool two_sided = target.sidedness() == Sidedness::two_sided;
  const Coord fwd_max = target.range().r;
  const Coord bwd_max = two_sided ? -target.range().l : 0;
  const Coord imax = std::max(fwd_max, bwd_max);
  for (Coord m = 0; m <= imax; ++m) {
    if (m <= fwd_max) {
      trajectory.ensure(shift + m, shift + m);
      if (trajectory.symbol(shift + m) != target.at(m)) return m;
    }
    if (two_sided && m <= bwd_max && m > 0) {
      trajectory.ensure(shift - m, shift - m);
      if (trajectory.symbol(shift - m) != target.at(-m)) return m;
    }
  }
  raise(ErrKind::resolution,
        "log-distance unresolved at n = " + std::to_string(n) + ", target " +
            std::to_string(i + 1) + ": agreement reaches the target edge");
}

}  // namespace

std::vector<std::pair<long long, double>> max_log_distance(
    Trajectory& trajectory, const std::vector<SymbolWindow>& targets,
    const IndexFamily& family, long long n_max, const DistanceParams& params,
    const std::vector<long long>& checkpoints) {
  if (static_cast<int>(targets.size()) != family.ell())
    raise(ErrKind::argument, "need exactly one target per index function");
  for (const auto& t : targets)
    if (t.sidedness() != trajectory.sidedness())
      raise(ErrKind::argument, "targets and trajectory differ in sidedness");

  std::vector<std::pair<long long, double>> trace;
  trace.reserve(checkpoints.size());
  double running_max = 0.0;
  std::size_t cp = 0;
  for (long long n = 1; n <= n_max; ++n) {
    double least = 0.0;
    for (int i = 0; i < family.ell(); ++i) {
      const long long shift = family.evaluate_i64(i, n);
      const double phi =
          params.gamma *
          static_cast<double>(shifted_radius(
              trajectory, targets[static_cast<std::size_t>(i)], shift, n, i));
      if (i == 0 || phi < least) least = phi;
      if (least <= running_max) break;  // the min cannot raise the max
    }
    running_max = std::max(running_max, least);
    if (cp < checkpoints.size() && checkpoints[cp] == n) {
      trace.emplace_back(n, running_max);
      ++cp;
    }
  }
  return trace;
}

}  // namespace shiftbc
