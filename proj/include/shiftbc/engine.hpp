#pragma once

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shiftbc/index_family.hpp"
#include "shiftbc/process.hpp"
#include "shiftbc/schedule.hpp"
#include "shiftbc/trajectory.hpp"

namespace shiftbc {

// Geometrically spaced checkpoints ceil(ratio^j) up to and including n_max,
// merged with any explicitly requested values.
std::vector<long long> geometric_checkpoints(long long n_max, double ratio = 1.2,
                                             std::vector<long long> extras = {});

struct CheckpointRow {
  long long n = 0;
  long long s = 0;  // S_n
  double e = 0.0;   // E_n
};

struct ConvergenceReport {
  std::vector<CheckpointRow> rows;
  double epsilon = 0.5;
  double envelope_c = 20.0;
  RngSeed seed{};
};

// E_N = sum over n <= N of prod_i P(C_n^(i)).
double expected_sum_shift(const ProcessModel& model, const CylinderSchedule& schedule,
                          long long n_max);

// The intersection analogue: sum over n of P(Gamma_n) with
// Gamma_n = intersection over i of T^{-q_i(n)} C_n^(i).
double expected_sum_shift_joint(const ProcessModel& model,
                                const CylinderSchedule& schedule,
                                const IndexFamily& family, long long n_max);

// S_N = #{n <= N : all ell shifted cylinder memberships hold}, with S values
// recorded at the requested checkpoints.
long long nonconventional_sum_shift(
    Trajectory& trajectory, const CylinderSchedule& schedule,
    const IndexFamily& family, long long n_max,
    const std::vector<long long>& checkpoints = {},
    std::vector<std::pair<long long, long long>>* trace = nullptr);

// One streaming pass producing both S and E at each checkpoint.
ConvergenceReport bc_shift_run(const ProcessModel& model,
                               const CylinderSchedule& schedule,
                               const IndexFamily& family, Trajectory& trajectory,
                               long long n_max,
                               const std::vector<long long>& checkpoints,
                               double epsilon, double envelope_c, RngSeed seed);

// Events setup: S_N = sum over n of prod_i indicator(q_i(n)).  Indicators are
// supplied either densely (index j -> indicators[j]) or sparsely; a missing
// index is a range error.
long long nonconventional_sum_events(const std::vector<std::uint8_t>& indicators,
                                     const IndexFamily& family, long long n_max);
long long nonconventional_sum_events(
    const std::unordered_map<long long, bool>& indicators,
    const IndexFamily& family, long long n_max);

// Companion expectation in its literal product form, prod_i P(Gamma_{q_i(n)}).
double expected_sum_events(const std::vector<double>& probabilities,
                           const IndexFamily& family, long long n_max);

struct PairCorrelation {
  double lhs = 0.0;  // sum over m,n in [M,N] of P(G_m & G_n) - P(G_m) P(G_n)
  double rhs = 0.0;  // sum over n in [M,N] of P(G_n)
};

// Exact pair-correlation sum over Gamma_n = intersection of the shifted
// cylinders; O((N-M+1)^2) joint evaluations, guarded at 2000 indices.
PairCorrelation pair_correlation_sum(const ProcessModel& model,
                                     const CylinderSchedule& schedule,
                                     const IndexFamily& family, long long m_min,
                                     long long n_max);

// Sum over n <= N of |P(Gamma_n) - prod_i P(C_n^(i))|; bounded in N for
// summably mixing models.  Requires ell >= 2.
double intersection_vs_product_gap(const ProcessModel& model,
                                   const CylinderSchedule& schedule,
                                   const IndexFamily& family, long long n_max);

struct NestingVerdict {
  enum class Mode { right_d_nested, d_nested };
  Mode mode = Mode::d_nested;
  long long d = 1;
  bool holds = false;
  std::optional<std::pair<long long, long long>> witness;  // (m, n), m < n
};

NestingVerdict verify_nesting(const CylinderSchedule& schedule,
                              NestingVerdict::Mode mode, long long d,
                              long long n_max);

// Fraction of checkpoints (those with E > e) violating
// |S - E| <= C sqrt(E) (ln E)^(3/2 + epsilon).  Diagnostic, not a hard gate.
double envelope_check(const ConvergenceReport& report, double envelope_c,
                      double epsilon);

}  // namespace shiftbc
