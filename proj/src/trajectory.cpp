#include "shiftbc/trajectory.hpp"

#include <string>

namespace shiftbc {

Trajectory Trajectory::from_model(const ProcessModel& model, Sidedness sidedness,
                                  RngSeed seed, long long max_resident) {
  if (sidedness == Sidedness::two_sided && !model.supports_two_sided())
    raise(ErrKind::model, "gauss-digits model is one-sided only");
  Trajectory t;
  t.sidedness_ = sidedness;
  t.model_ = model;
  t.seed_ = seed;
  t.max_resident_ = max_resident;
  if (model.is_iid()) {
    t.kind_ = Kind::iid;
    t.iid_key_ = rng::derive_key(seed, rng::Tag::iid_symbol);
    return t;
  }
  t.kind_ = Kind::buffered;
  if (model.kind() == ProcessModel::Kind::markov) {
    const auto init_key = rng::derive_key(seed, rng::Tag::chain_init);
    t.fwd_key_ = rng::derive_key(seed, rng::Tag::chain_forward);
    t.bwd_key_ = rng::derive_key(seed, rng::Tag::chain_backward);
    t.forward_.push_back(sampling::markov_initial(model.markov_kernel(),
                                                  rng::u01_at(init_key, 0)));
  } else {
    t.fwd_key_ = rng::derive_key(seed, rng::Tag::gauss_digit);
  }
  return t;
}

Trajectory Trajectory::wrap_window(const SymbolWindow& window) {
  Trajectory t;
  t.kind_ = Kind::window;
  t.sidedness_ = window.sidedness();
  t.window_ = &window;
  return t;
}

void Trajectory::check_budget(Coord extra) const {
  const long long resident = static_cast<long long>(forward_.size()) +
                             static_cast<long long>(backward_.size());
  if (resident + extra > max_resident_)
    raise(ErrKind::resource,
          "trajectory would hold " + std::to_string(resident + extra) +
              " symbols, over the resident budget of " +
              std::to_string(max_resident_));
}

void Trajectory::extend_forward(Coord upto) {
  check_budget(upto + 1 - static_cast<Coord>(forward_.size()));
  if (model_->kind() == ProcessModel::Kind::markov) {
    const auto& kernel = model_->markov_kernel();
    Symbol cur = forward_.back();
    for (Coord i = static_cast<Coord>(forward_.size()); i <= upto; ++i) {
      cur = sampling::markov_forward(
          kernel, cur, rng::u01_at(fwd_key_, static_cast<std::uint64_t>(i)));
      forward_.push_back(cur);
    }
  } else {
    for (Coord i = static_cast<Coord>(forward_.size()); i <= upto; ++i) {
      const Symbol d = gauss::digit_from_uniform(
          gauss_state_, rng::u01_at(fwd_key_, static_cast<std::uint64_t>(i)));
      forward_.push_back(d);
      gauss_state_.advance(d);
    }
  }
}

void Trajectory::extend_backward(Coord upto) {
  if (sidedness_ == Sidedness::one_sided)
    raise(ErrKind::range, "one-sided trajectory has no negative coordinates");
  check_budget(upto - static_cast<Coord>(backward_.size()));
  const auto& kernel = model_->markov_kernel();
  Symbol cur = backward_.empty() ? forward_.front() : backward_.back();
  for (Coord i = static_cast<Coord>(backward_.size()) + 1; i <= upto; ++i) {
    cur = sampling::markov_backward(
        kernel, cur, rng::u01_at(bwd_key_, static_cast<std::uint64_t>(i)));
    backward_.push_back(cur);
  }
}

void Trajectory::ensure(Coord lo, Coord hi) {
  if (lo > hi) raise(ErrKind::argument, "empty coordinate span");
  switch (kind_) {
    case Kind::iid:
      if (sidedness_ == Sidedness::one_sided && lo < 0)
        raise(ErrKind::range, "one-sided trajectory has no negative coordinates");
      return;
    case Kind::buffered:
      if (sidedness_ == Sidedness::one_sided && lo < 0)
        raise(ErrKind::range, "one-sided trajectory has no negative coordinates");
      if (hi >= static_cast<Coord>(forward_.size())) extend_forward(hi);
      if (lo < 0 && -lo > static_cast<Coord>(backward_.size())) extend_backward(-lo);
      return;
    case Kind::window:
      if (!window_->covers(lo, hi))
        raise(ErrKind::resolution,
              "window covers [" + std::to_string(window_->range().l) + ", " +
                  std::to_string(window_->range().r) + "] but coordinates [" +
                  std::to_string(lo) + ", " + std::to_string(hi) +
                  "] are required");
      return;
  }
}

}  // namespace shiftbc
