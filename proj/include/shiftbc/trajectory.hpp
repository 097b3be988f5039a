#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shiftbc/process.hpp"
#include "shiftbc/rng.hpp"
#include "shiftbc/symbolic.hpp"

namespace shiftbc {

// Read access into one sampled realization of a process.  Symbols are a pure
// function of (model, seed, coordinate), so reads may happen in any order and
// two trajectories with the same seed agree wherever they overlap.
//
//  - iid models: counter-based, O(1) memory, any coordinate.
//  - markov: buffered, extended on demand in both directions (backward via
//    the time-reversed kernel).  Resident symbols are capped by a budget.
//  - gauss digits: buffered forward, one-sided.
//  - wrapped window: serves a fixed SymbolWindow; asking beyond it raises a
//    resolution error naming the missing span.
class Trajectory {
 public:
  static constexpr long long kDefaultResidentBudget = 1LL << 25;

  static Trajectory from_model(const ProcessModel& model, Sidedness sidedness,
                               RngSeed seed,
                               long long max_resident = kDefaultResidentBudget);
  static Trajectory wrap_window(const SymbolWindow& window);

  Sidedness sidedness() const { return sidedness_; }

  // Makes [lo, hi] readable or throws (resolution for wrapped windows,
  // resource when a buffered model would exceed its budget).
  void ensure(Coord lo, Coord hi);

  Symbol symbol(Coord i) {
    switch (kind_) {
      case Kind::iid:
        return sampling::iid_symbol(*model_, iid_key_, i);
      case Kind::buffered:
        if (i >= 0) {
          if (i >= static_cast<Coord>(forward_.size())) extend_forward(i);
          return forward_[static_cast<std::size_t>(i)];
        }
        if (-i > static_cast<Coord>(backward_.size())) extend_backward(-i);
        return backward_[static_cast<std::size_t>(-i - 1)];
      case Kind::window:
        return window_->at(i);
    }
    raise(ErrKind::invariant, "trajectory kind corrupted");
  }

 private:
  enum class Kind { iid, buffered, window };

  Trajectory() = default;
  void extend_forward(Coord upto);
  void extend_backward(Coord upto);  // upto > 0 means coordinate -upto
  void check_budget(Coord extra) const;

  Kind kind_ = Kind::window;
  Sidedness sidedness_ = Sidedness::two_sided;
  std::optional<ProcessModel> model_;  // owned: a trajectory outlives its argument
  const SymbolWindow* window_ = nullptr;
  RngSeed seed_{};
  long long max_resident_ = kDefaultResidentBudget;

  std::uint64_t iid_key_ = 0;
  std::uint64_t fwd_key_ = 0;
  std::uint64_t bwd_key_ = 0;

  std::vector<Symbol> forward_;   // coordinates 0, 1, 2, ...
  std::vector<Symbol> backward_;  // coordinates -1, -2, ...
  gauss::State gauss_state_{};
};

}  // namespace shiftbc
