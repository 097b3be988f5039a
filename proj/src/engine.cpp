#include "shiftbc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace shiftbc {

std::vector<long long> geometric_checkpoints(long long n_max, double ratio,
                                             std::vector<long long> extras) {
  if (n_max < 1) raise(ErrKind::argument, "checkpoints need n_max >= 1");
  if (!(ratio > 1.0)) raise(ErrKind::argument, "checkpoint ratio must exceed 1");
  std::set<long long> points;
  double v = 1.0;
  while (true) {
    const long long c = static_cast<long long>(std::ceil(v));
    if (c >= n_max) break;
    points.insert(c);
    v *= ratio;
  }
  points.insert(n_max);
  for (long long e : extras)
    if (e >= 1 && e <= n_max) points.insert(e);
  return {points.begin(), points.end()};
}

namespace {

void require_matching_ell(const CylinderSchedule& schedule,
                          const IndexFamily& family) {
  if (schedule.ell() != family.ell())
    raise(ErrKind::argument, "schedule provides " + std::to_string(schedule.ell()) +
                                 " cylinders per n but the family has ell = " +
                                 std::to_string(family.ell()));
}

bool entry_holds(Trajectory& trajectory, const CylinderSchedule& schedule,
                 const IndexFamily& family, long long n) {
  const int ell = schedule.ell();
  for (int i = 0; i < ell; ++i) {
    const long long shift = family.evaluate_i64(i, n);
    const CylinderView v = schedule.view(n, i);
    trajectory.ensure(v.interval.l + shift, v.interval.r + shift);
    for (Coord c = v.interval.l; c <= v.interval.r; ++c)
      if (trajectory.symbol(c + shift) != v.at(c)) return false;
  }
  return true;
}

// Per-n value of prod_i P(C_n^(i)) with memoization: constant for fixed
// schedules, cached per (target, radius) for radius schedules.
class EntryProbability {
 public:
  EntryProbability(const ProcessModel& model, const CylinderSchedule& schedule)
      : model_(model), schedule_(schedule) {
    if (schedule_.kind() == CylinderSchedule::Kind::fixed) {
      fixed_product_ = 1.0;
      for (int i = 0; i < schedule_.ell(); ++i)
        fixed_product_ *=
            cylinder_probability(model_, schedule_.view(1, i).materialize());
    } else if (schedule_.kind() == CylinderSchedule::Kind::radius) {
      logp_by_radius_.resize(static_cast<std::size_t>(schedule_.ell()));
    }
  }

  double product_at(long long n) {
    switch (schedule_.kind()) {
      case CylinderSchedule::Kind::fixed:
        return fixed_product_;
      case CylinderSchedule::Kind::radius: {
        const auto r = static_cast<std::size_t>(schedule_.radius_at(n));
        double log_product = 0.0;
        for (int i = 0; i < schedule_.ell(); ++i) {
          auto& memo = logp_by_radius_[static_cast<std::size_t>(i)];
          if (r >= memo.size()) memo.resize(r + 1, kUnset);
          if (memo[r] == kUnset)
            memo[r] = log_cylinder_probability(
                model_, schedule_.view(n, i).materialize());
          log_product += memo[r];
        }
        return std::exp(log_product);
      }
      case CylinderSchedule::Kind::explicit_list: {
        double p = 1.0;
        for (int i = 0; i < schedule_.ell(); ++i)
          p *= cylinder_probability(model_, schedule_.view(n, i).materialize());
        return p;
      }
    }
    raise(ErrKind::invariant, "schedule kind corrupted");
  }

 private:
  static constexpr double kUnset = std::numeric_limits<double>::infinity();

  const ProcessModel& model_;
  const CylinderSchedule& schedule_;
  double fixed_product_ = 1.0;
  std::vector<std::vector<double>> logp_by_radius_;
};

std::vector<std::pair<Coord, Symbol>> entry_constraints(
    const CylinderSchedule& schedule, const IndexFamily& family, long long n) {
  std::vector<std::pair<Coord, Symbol>> constraints;
  for (int i = 0; i < schedule.ell(); ++i) {
    const long long shift = family.evaluate_i64(i, n);
    const CylinderView v = schedule.view(n, i);
    for (Coord c = v.interval.l; c <= v.interval.r; ++c)
      constraints.emplace_back(c + shift, v.at(c));
  }
  return constraints;
}

}  // namespace

double expected_sum_shift(const ProcessModel& model,
                          const CylinderSchedule& schedule, long long n_max) {
  if (n_max < 1) raise(ErrKind::argument, "expected_sum_shift needs N >= 1");
  EntryProbability prob(model, schedule);
  double e = 0.0;
  for (long long n = 1; n <= n_max; ++n) e += prob.product_at(n);
  return e;
}

double expected_sum_shift_joint(const ProcessModel& model,
                                const CylinderSchedule& schedule,
                                const IndexFamily& family, long long n_max) {
  require_matching_ell(schedule, family);
  double e = 0.0;
  for (long long n = 1; n <= n_max; ++n)
    e += joint_cylinder_probability(model, entry_constraints(schedule, family, n));
  return e;
}

long long nonconventional_sum_shift(
    Trajectory& trajectory, const CylinderSchedule& schedule,
    const IndexFamily& family, long long n_max,
    const std::vector<long long>& checkpoints,
    std::vector<std::pair<long long, long long>>* trace) {
  require_matching_ell(schedule, family);
  long long s = 0;
  std::size_t cp = 0;
  for (long long n = 1; n <= n_max; ++n) {
    if (entry_holds(trajectory, schedule, family, n)) ++s;
    if (trace && cp < checkpoints.size() && checkpoints[cp] == n) {
      trace->emplace_back(n, s);
      ++cp;
    }
  }
  return s;
}

ConvergenceReport bc_shift_run(const ProcessModel& model,
                               const CylinderSchedule& schedule,
                               const IndexFamily& family, Trajectory& trajectory,
                               long long n_max,
                               const std::vector<long long>& checkpoints,
                               double epsilon, double envelope_c, RngSeed seed) {
  require_matching_ell(schedule, family);
  ConvergenceReport report;
  report.epsilon = epsilon;
  report.envelope_c = envelope_c;
  report.seed = seed;
  report.rows.reserve(checkpoints.size());

  EntryProbability prob(model, schedule);
  long long s = 0;
  double e = 0.0;
  std::size_t cp = 0;
  for (long long n = 1; n <= n_max; ++n) {
    if (entry_holds(trajectory, schedule, family, n)) ++s;
    e += prob.product_at(n);
    if (cp < checkpoints.size() && checkpoints[cp] == n) {
      report.rows.push_back({n, s, e});
      ++cp;
    }
  }
  return report;
}

long long nonconventional_sum_events(const std::vector<std::uint8_t>& indicators,
                                     const IndexFamily& family, long long n_max) {
  long long s = 0;
  for (long long n = 1; n <= n_max; ++n) {
    bool all = true;
    for (int i = 0; i < family.ell(); ++i) {
      const long long j = family.evaluate_i64(i, n);
      if (j >= static_cast<long long>(indicators.size()))
        raise(ErrKind::range,
              "indicator trace has no entry for index " + std::to_string(j));
      if (!indicators[static_cast<std::size_t>(j)]) {
        all = false;
        break;
      }
    }
    if (all) ++s;
  }
  return s;
}

long long nonconventional_sum_events(
    const std::unordered_map<long long, bool>& indicators,
    const IndexFamily& family, long long n_max) {
  long long s = 0;
  for (long long n = 1; n <= n_max; ++n) {
    bool all = true;
    for (int i = 0; i < family.ell(); ++i) {
      const long long j = family.evaluate_i64(i, n);
      const auto it = indicators.find(j);
      if (it == indicators.end())
        raise(ErrKind::range,
              "indicator trace has no entry for index " + std::to_string(j));
      if (!it->second) {
        all = false;
        break;
      }
    }
    if (all) ++s;
  }
  return s;
}

double expected_sum_events(const std::vector<double>& probabilities,
                           const IndexFamily& family, long long n_max) {
  double e = 0.0;
  for (long long n = 1; n <= n_max; ++n) {
    double term = 1.0;
    for (int i = 0; i < family.ell(); ++i) {
      const long long j = family.evaluate_i64(i, n);
      if (j >= static_cast<long long>(probabilities.size()))
        raise(ErrKind::range,
              "probability trace has no entry for index " + std::to_string(j));
      term *= probabilities[static_cast<std::size_t>(j)];
    }
    e += term;
  }
  return e;
}

PairCorrelation pair_correlation_sum(const ProcessModel& model,
                                     const CylinderSchedule& schedule,
                                     const IndexFamily& family, long long m_min,
                                     long long n_max) {
  require_matching_ell(schedule, family);
  if (m_min < 1 || n_max < m_min)
    raise(ErrKind::argument, "pair correlation needs 1 <= M <= N");
  const long long count = n_max - m_min + 1;
  if (count > 2000)
    raise(ErrKind::resource,
          "pair correlation over " + std::to_string(count) +
              " indices exceeds the 2000-index guard");

  std::vector<std::vector<std::pair<Coord, Symbol>>> cons;
  std::vector<double> p(static_cast<std::size_t>(count));
  cons.reserve(static_cast<std::size_t>(count));
  for (long long n = m_min; n <= n_max; ++n) {
    cons.push_back(entry_constraints(schedule, family, n));
    p[static_cast<std::size_t>(n - m_min)] =
        joint_cylinder_probability(model, cons.back());
  }

  PairCorrelation out;
  for (long long a = 0; a < count; ++a) {
    out.rhs += p[static_cast<std::size_t>(a)];
    for (long long b = 0; b < count; ++b) {
      double pab;
      if (a == b) {
        pab = p[static_cast<std::size_t>(a)];
      } else {
        auto merged = cons[static_cast<std::size_t>(a)];
        merged.insert(merged.end(), cons[static_cast<std::size_t>(b)].begin(),
                      cons[static_cast<std::size_t>(b)].end());
        pab = joint_cylinder_probability(model, merged);
      }
      out.lhs += pab - p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

double intersection_vs_product_gap(const ProcessModel& model,
                                   const CylinderSchedule& schedule,
                                   const IndexFamily& family, long long n_max) {
  require_matching_ell(schedule, family);
  if (family.ell() < 2)
    raise(ErrKind::argument, "the intersection gap is defined for ell >= 2");
  EntryProbability prob(model, schedule);
  double gap = 0.0;
  for (long long n = 1; n <= n_max; ++n) {
    const double joint =
        joint_cylinder_probability(model, entry_constraints(schedule, family, n));
    gap += std::abs(joint - prob.product_at(n));
  }
  return gap;
}

NestingVerdict verify_nesting(const CylinderSchedule& schedule,
                              NestingVerdict::Mode mode, long long d,
                              long long n_max) {
  if (d < 1) raise(ErrKind::argument, "nesting slack D must be positive");
  NestingVerdict verdict;
  verdict.mode = mode;
  verdict.d = d;
  verdict.holds = true;

  // Lambda_m must be (right-)D-nested in Lambda_n for every m < n, which
  // reduces to running extrema of the earlier endpoints.
  long long max_r = 0, argmax_r = 0, min_l = 0, argmin_l = 0;
  for (long long n = 1; n <= n_max; ++n) {
    const Interval iv = schedule.interval_at(n);
    if (n > 1) {
      if (max_r >= iv.r + d) {
        verdict.holds = false;
        verdict.witness = {argmax_r, n};
        return verdict;
      }
      if (mode == NestingVerdict::Mode::d_nested && min_l <= iv.l - d) {
        verdict.holds = false;
        verdict.witness = {argmin_l, n};
        return verdict;
      }
    }
    if (n == 1 || iv.r > max_r) {
      max_r = iv.r;
      argmax_r = n;
    }
    if (n == 1 || iv.l < min_l) {
      min_l = iv.l;
      argmin_l = n;
    }
  }
  return verdict;
}

double envelope_check(const ConvergenceReport& report, double envelope_c,
                      double epsilon) {
  if (!(envelope_c > 0.0) || !(epsilon > 0.0))
    raise(ErrKind::argument, "envelope check needs C > 0 and epsilon > 0");
  const double e_floor = std::exp(1.0);
  long long considered = 0, violations = 0;
  for (const auto& row : report.rows) {
    if (!(row.e > e_floor)) continue;
    ++considered;
    const double bound = envelope_c * std::sqrt(row.e) *
                         std::pow(std::log(row.e), 1.5 + epsilon);
    if (std::abs(static_cast<double>(row.s) - row.e) > bound) ++violations;
  }
  if (considered == 0) return 0.0;
  return static_cast<double>(violations) / static_cast<double>(considered);
}

}  // namespace shiftbc
