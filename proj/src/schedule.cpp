#include "shiftbc/schedule.hpp"

#include <cmath>
#include <string>

namespace shiftbc {

CylinderSchedule CylinderSchedule::fixed(std::vector<Cylinder> per_index) {
  if (per_index.empty())
    raise(ErrKind::argument, "fixed schedule needs at least one cylinder");
  for (const auto& c : per_index)
    if (c.interval.l != per_index.front().interval.l ||
        c.interval.r != per_index.front().interval.r)
      raise(ErrKind::argument,
            "all cylinders of a schedule entry must share one interval");
  CylinderSchedule s;
  s.kind_ = Kind::fixed;
  s.ell_ = static_cast<int>(per_index.size());
  s.fixed_ = std::move(per_index);
  return s;
}

CylinderSchedule CylinderSchedule::radius(double beta,
                                          std::vector<SymbolWindow> targets) {
  if (!(beta >= 0.0)) raise(ErrKind::argument, "radius schedule needs beta >= 0");
  if (targets.empty())
    raise(ErrKind::argument, "radius schedule needs at least one target");
  for (const auto& t : targets)
    if (t.sidedness() != targets.front().sidedness())
      raise(ErrKind::argument, "radius targets must share sidedness");
  CylinderSchedule s;
  s.kind_ = Kind::radius;
  s.ell_ = static_cast<int>(targets.size());
  s.beta_ = beta;
  s.sidedness_ = targets.front().sidedness();
  s.targets_ = std::move(targets);
  return s;
}

CylinderSchedule CylinderSchedule::explicit_list(
    std::map<long long, std::vector<Cylinder>> entries) {
  if (entries.empty()) raise(ErrKind::argument, "explicit schedule is empty");
  const auto ell = entries.begin()->second.size();
  for (const auto& [n, cyls] : entries) {
    if (cyls.size() != ell)
      raise(ErrKind::argument, "explicit schedule entries disagree on ell");
    for (const auto& c : cyls)
      if (c.interval.l != cyls.front().interval.l ||
          c.interval.r != cyls.front().interval.r)
        raise(ErrKind::argument,
              "all cylinders of a schedule entry must share one interval");
  }
  CylinderSchedule s;
  s.kind_ = Kind::explicit_list;
  s.ell_ = static_cast<int>(ell);
  s.entries_ = std::move(entries);
  return s;
}

long long CylinderSchedule::radius_at(long long n) const {
  if (n < 1) raise(ErrKind::argument, "schedule indices start at 1");
  return static_cast<long long>(std::floor(beta_ * std::log(static_cast<double>(n))));
}

Interval CylinderSchedule::interval_at(long long n) const {
  switch (kind_) {
    case Kind::fixed:
      return fixed_.front().interval;
    case Kind::radius: {
      const long long r = radius_at(n);
      return sidedness_ == Sidedness::two_sided ? Interval{-r, r} : Interval{0, r};
    }
    case Kind::explicit_list: {
      auto it = entries_.find(n);
      if (it == entries_.end())
        raise(ErrKind::argument,
              "explicit schedule has no entry for n = " + std::to_string(n));
      return it->second.front().interval;
    }
  }
  raise(ErrKind::invariant, "schedule kind corrupted");
}

CylinderView CylinderSchedule::view(long long n, int i) const {
  if (i < 0 || i >= ell_)
    raise(ErrKind::argument, "schedule cylinder index out of range");
  switch (kind_) {
    case Kind::fixed: {
      const auto& c = fixed_[static_cast<std::size_t>(i)];
      return {c.interval, c.symbols.data()};
    }
    case Kind::radius: {
      const Interval iv = interval_at(n);
      const auto& t = targets_[static_cast<std::size_t>(i)];
      if (!t.covers(iv.l, iv.r))
        raise(ErrKind::resolution,
              "radius-schedule target " + std::to_string(i + 1) +
                  " is narrower than the radius at n = " + std::to_string(n) +
                  "; sample a wider target");
      return {iv, t.symbols().data() + (iv.l - t.range().l)};
    }
    case Kind::explicit_list: {
      auto it = entries_.find(n);
      if (it == entries_.end())
        raise(ErrKind::argument,
              "explicit schedule has no entry for n = " + std::to_string(n));
      const auto& c = it->second[static_cast<std::size_t>(i)];
      return {c.interval, c.symbols.data()};
    }
  }
  raise(ErrKind::invariant, "schedule kind corrupted");
}

}  // namespace shiftbc
