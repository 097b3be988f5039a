#include "shiftbc/symbolic.hpp"

#include <algorithm>
#include <string>

namespace shiftbc {

bool cylinder_contains(const SymbolWindow& window, const Cylinder& cyl,
                       Coord shift_power) {
  const Coord lo = cyl.interval.l + shift_power;
  const Coord hi = cyl.interval.r + shift_power;
  if (!window.covers(lo, hi))
    raise(ErrKind::range,
          "window does not cover shifted cylinder coordinates [" +
              std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (Coord i = cyl.interval.l; i <= cyl.interval.r; ++i)
    if (window.at(i + shift_power) != cyl.constraint(i)) return false;
  return true;
}

std::optional<Coord> disagreement_radius(const SymbolWindow& w1,
                                         const SymbolWindow& w2) {
  if (w1.sidedness() != w2.sidedness())
    raise(ErrKind::argument, "windows differ in sidedness");

  const Coord lo = std::max(w1.range().l, w2.range().l);
  const Coord hi = std::min(w1.range().r, w2.range().r);
  if (lo > hi) raise(ErrKind::argument, "windows have no common coordinates");

  const bool two_sided = w1.sidedness() == Sidedness::two_sided;
  const Coord imax = two_sided ? std::max(hi, -lo) : hi;
  for (Coord i = 0; i <= imax; ++i) {
    if (i <= hi && w1.at(i) != w2.at(i)) return i;
    if (two_sided && -i >= lo && w1.at(-i) != w2.at(-i)) return i;
  }
  return std::nullopt;
}

double log_distance_phi(const SymbolWindow& w1, const SymbolWindow& w2,
                        const DistanceParams& params) {
  const auto radius = disagreement_radius(w1, w2);
  if (!radius)
    raise(ErrKind::resolution,
          "windows agree on their whole common range; supply wider windows");
  return params.gamma * static_cast<double>(*radius);
}

}  // namespace shiftbc
