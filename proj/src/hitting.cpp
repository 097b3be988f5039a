#include "shiftbc/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace shiftbc {

HittingTimeRecord hitting_time(Trajectory& omega, const SymbolWindow& target,
                               const IndexFamily& family, long long radius,
                               long long cap, RngSeed omega_seed,
                               RngSeed target_seed) {
  if (radius < 0) raise(ErrKind::argument, "hitting radius must be >= 0");
  if (cap < 1) raise(ErrKind::argument, "hitting cap must be >= 1");
  if (target.sidedness() != omega.sidedness())
    raise(ErrKind::argument, "target and trajectory differ in sidedness");

  const bool two_sided = target.sidedness() == Sidedness::two_sided;
  const Coord lo = two_sided ? -radius : 0;
  const Coord hi = radius;
  if (!target.covers(lo, hi))
    raise(ErrKind::argument, "target window is narrower than the hitting radius");

  // Raw pointer into the target block; bounds were just verified.
  const Symbol* tsym = target.symbols().data() + (lo - target.range().l);
  const Coord span = hi - lo;
  const int ell = family.ell();

  HittingTimeRecord rec;
  rec.radius = radius;
  rec.cap = cap;
  rec.omega_seed = omega_seed;
  rec.target_seed = target_seed;

  for (long long k = 1; k <= cap; ++k) {
    bool all = true;
    for (int i = 0; i < ell && all; ++i) {
      const long long shift = family.evaluate_i64(i, k);
      omega.ensure(shift + lo, shift + hi);
      for (Coord c = 0; c <= span; ++c) {
        if (omega.symbol(shift + lo + c) != tsym[c]) {
          all = false;
          break;
        }
      }
    }
    if (all) {
      rec.tau = k;
      return rec;
    }
  }
  rec.tau = cap;
  rec.censored = true;
  return rec;
}

ExponentFit exponent_fit(const std::vector<HittingTimeRecord>& records) {
  std::map<long long, std::pair<long long, double>> by_radius;  // n -> (count, sum ln tau)
  ExponentFit fit;
  for (const auto& r : records) {
    if (r.censored) {
      ++fit.censored_total;
      continue;
    }
    auto& [count, sum] = by_radius[r.radius];
    ++count;
    sum += std::log(static_cast<double>(r.tau));
  }

  for (const auto& [radius, cs] : by_radius) {
    if (cs.first < 30) continue;  // too thin to anchor a fit point
    fit.radii.push_back(radius);
    fit.uncensored.push_back(cs.first);
    fit.mean_log_tau.push_back(cs.second / static_cast<double>(cs.first));
  }
  const auto k = fit.radii.size();
  if (k < 3)
    raise(ErrKind::insufficient,
          "exponent fit needs at least 3 radii with 30+ uncensored records, got " +
              std::to_string(k));

  double x_bar = 0.0, y_bar = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    x_bar += static_cast<double>(fit.radii[j]);
    y_bar += fit.mean_log_tau[j];
  }
  x_bar /= static_cast<double>(k);
  y_bar /= static_cast<double>(k);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double dx = static_cast<double>(fit.radii[j]) - x_bar;
    sxx += dx * dx;
    sxy += dx * (fit.mean_log_tau[j] - y_bar);
  }
  fit.slope = sxy / sxx;

  double rss = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double fitted =
        y_bar + fit.slope * (static_cast<double>(fit.radii[j]) - x_bar);
    const double res = fit.mean_log_tau[j] - fitted;
    rss += res * res;
  }
  fit.slope_stderr =
      k > 2 ? std::sqrt(std::max(rss, 0.0) / static_cast<double>(k - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace shiftbc
