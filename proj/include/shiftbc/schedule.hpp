#pragma once

#include <map>
#include <vector>

#include "shiftbc/symbolic.hpp"

namespace shiftbc {

// A borrowed view of one cylinder of a schedule entry; for radius schedules
// it points straight into the target window, so per-n lookups allocate
// nothing.
struct CylinderView {
  Interval interval;
  const Symbol* base;  // symbol for coordinate interval.l

  Symbol at(Coord c) const { return base[c - interval.l]; }
  Cylinder materialize() const {
    return Cylinder(interval, {base, base + interval.length()});
  }
};

// Per-n families C_n^(1..ell), all defined on a common interval Lambda_n.
//   fixed:    the same ell cylinders for every n.
//   radius:   C_n^(i) pins target i on [-r_n, r_n] (one-sided: [0, r_n]),
//             r_n = floor(beta ln n).
//   explicit: an arbitrary per-n list.
class CylinderSchedule {
 public:
  enum class Kind { fixed, radius, explicit_list };

  static CylinderSchedule fixed(std::vector<Cylinder> per_index);
  static CylinderSchedule radius(double beta, std::vector<SymbolWindow> targets);
  static CylinderSchedule explicit_list(
      std::map<long long, std::vector<Cylinder>> entries);

  Kind kind() const { return kind_; }
  int ell() const { return ell_; }
  double beta() const { return beta_; }
  Sidedness sidedness() const { return sidedness_; }
  const std::vector<SymbolWindow>& targets() const { return targets_; }

  long long radius_at(long long n) const;
  Interval interval_at(long long n) const;
  CylinderView view(long long n, int i) const;

 private:
  CylinderSchedule() = default;

  Kind kind_ = Kind::fixed;
  int ell_ = 0;
  double beta_ = 0.0;
  Sidedness sidedness_ = Sidedness::two_sided;
  std::vector<Cylinder> fixed_;
  std::vector<SymbolWindow> targets_;
  std::map<long long, std::vector<Cylinder>> entries_;
};

}  // namespace shiftbc
