#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shiftbc/errors.hpp"

namespace shiftbc {

// Symbols are nonnegative integers.  Countable alphabets (geometric letters,
// continued-fraction digits) store sampled values directly, so the type is
// wide enough for the occasional huge digit.
using Symbol = std::int64_t;
using Coord = std::int64_t;

enum class Sidedness { two_sided, one_sided };

struct Alphabet {
  enum class Kind { finite, geometric_countable };

  Kind kind = Kind::finite;
  Symbol size = 2;  // meaningful for finite alphabets only

  static Alphabet finite(Symbol size) {
    if (size < 2) raise(ErrKind::argument, "finite alphabet needs at least 2 symbols");
    return Alphabet{Kind::finite, size};
  }
  static Alphabet countable() { return Alphabet{Kind::geometric_countable, 0}; }

  bool valid(Symbol a) const {
    if (a < 0) return false;
    return kind == Kind::geometric_countable || a < size;
  }
};

struct Interval {
  Coord l = 0;
  Coord r = 0;

  Coord length() const { return r - l + 1; }
  bool contains(Coord i) const { return l <= i && i <= r; }
  bool covers(const Interval& o) const { return l <= o.l && o.r <= r; }
};

// A finite block of sampled symbols.  Two-sided windows always contain
// coordinate 0; one-sided windows start at 0.
class SymbolWindow {
 public:
  SymbolWindow(Sidedness sidedness, Interval range, std::vector<Symbol> symbols)
      : sidedness_(sidedness), range_(range), symbols_(std::move(symbols)) {
    if (range_.l > range_.r) raise(ErrKind::argument, "window interval is empty");
    if (sidedness_ == Sidedness::two_sided && !(range_.l <= 0 && 0 <= range_.r))
      raise(ErrKind::argument, "two-sided window must contain coordinate 0");
    if (sidedness_ == Sidedness::one_sided && range_.l != 0)
      raise(ErrKind::argument, "one-sided window must start at coordinate 0");
    if (static_cast<Coord>(symbols_.size()) != range_.length())
      raise(ErrKind::argument, "window symbol count does not match its interval");
  }

  Sidedness sidedness() const { return sidedness_; }
  const Interval& range() const { return range_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  Symbol at(Coord i) const {
    if (!range_.contains(i))
      raise(ErrKind::range, "window does not cover coordinate " + std::to_string(i));
    return symbols_[static_cast<std::size_t>(i - range_.l)];
  }

  bool covers(Coord l, Coord r) const { return range_.l <= l && r <= range_.r; }

 private:
  Sidedness sidedness_;
  Interval range_;
  std::vector<Symbol> symbols_;
};

// Symbol constraints on an integer interval.
struct Cylinder {
  Interval interval;
  std::vector<Symbol> symbols;

  Cylinder(Interval iv, std::vector<Symbol> syms)
      : interval(iv), symbols(std::move(syms)) {
    if (interval.l > interval.r) raise(ErrKind::argument, "cylinder interval is empty");
    if (static_cast<Coord>(symbols.size()) != interval.length())
      raise(ErrKind::argument, "cylinder constraint count does not match its interval");
  }

  Symbol constraint(Coord i) const {
    return symbols[static_cast<std::size_t>(i - interval.l)];
  }
};

struct DistanceParams {
  double gamma = 1.0;

  explicit DistanceParams(double g) : gamma(g) {
    if (!(g > 0.0)) raise(ErrKind::argument, "gamma must be positive");
  }
};

// Membership of the shifted point in a cylinder: checks window(i + shift)
// against the constraint at i for every i in the cylinder interval.
bool cylinder_contains(const SymbolWindow& window, const Cylinder& cyl,
                       Coord shift_power);

// Smallest i >= 0 with a disagreement at i or -i (the -i clause is dropped
// for one-sided windows).  nullopt means the windows agree on their whole
// common range ("exhausted"): the true radius is beyond what was sampled.
std::optional<Coord> disagreement_radius(const SymbolWindow& w1,
                                         const SymbolWindow& w2);

// Phi(w1, w2) = -ln d(w1, w2) = gamma * disagreement radius.
double log_distance_phi(const SymbolWindow& w1, const SymbolWindow& w2,
                        const DistanceParams& params);

}  // namespace shiftbc
