#pragma once

#include <stdexcept>
#include <string>

namespace shiftbc {

// Error taxonomy shared by all modules.  The CLI maps kinds to exit codes:
// resource -> 3, resolution -> 4, everything else -> 2.
enum class ErrKind {
  argument,      // bad value passed by the caller
  range,         // coordinate or index outside the available data
  model,         // process model violates its own requirements
  resolution,    // a window/trajectory was too narrow to decide the answer
  resource,      // an enumeration or run would exceed its declared budget
  unsupported,   // operation not defined for this model/configuration
  invariant,     // a stated invariant failed at runtime
  insufficient,  // not enough data points for the requested statistic
};

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::argument: return "argument";
    case ErrKind::range: return "range";
    case ErrKind::model: return "model";
    case ErrKind::resolution: return "resolution";
    case ErrKind::resource: return "resource";
    case ErrKind::unsupported: return "unsupported";
    case ErrKind::invariant: return "invariant";
    case ErrKind::insufficient: return "insufficient";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrKind::resource: return 3;
      case ErrKind::resolution: return 4;
      default: return 2;
    }
  }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void raise(ErrKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace shiftbc
