#pragma once

#include <vector>

#include "shiftbc/index_family.hpp"
#include "shiftbc/symbolic.hpp"
#include "shiftbc/trajectory.hpp"

namespace shiftbc {

struct HittingTimeRecord {
  long long radius = 0;
  long long tau = 0;  // first hit; equals cap when censored
  bool censored = false;
  long long cap = 0;
  RngSeed omega_seed{};
  RngSeed target_seed{};
};

// First k >= 1 with T^{q_i(k)} omega inside the radius-n cylinder around the
// target for every i simultaneously; censored at cap, never invented.
HittingTimeRecord hitting_time(Trajectory& omega, const SymbolWindow& target,
                               const IndexFamily& family, long long radius,
                               long long cap, RngSeed omega_seed = {},
                               RngSeed target_seed = {});

struct ExponentFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<long long> radii;          // radii entering the fit
  std::vector<double> mean_log_tau;      // per radius, uncensored records only
  std::vector<long long> uncensored;     // per radius
  long long censored_total = 0;
};

// Least-squares slope of mean ln tau against the radius.  Censored records
// are excluded (and counted); radii keep their point only with >= 30
// uncensored records, and the fit needs >= 3 such radii.
ExponentFit exponent_fit(const std::vector<HittingTimeRecord>& records);

}  // namespace shiftbc
