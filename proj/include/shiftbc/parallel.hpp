#pragma once

#include <exception>
#include <string>

#include "shiftbc/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shiftbc {

// Replicates are embarrassingly parallel: every worker writes only its own
// pre-allocated slot, so results are identical bytes whichever mode runs.
// The serial mode is the reference implementation the tests compare against.
enum class ExecMode { serial, openmp };

inline ExecMode exec_mode_from_name(const std::string& name) {
  if (name == "serial") return ExecMode::serial;
  if (name == "openmp") return ExecMode::openmp;
  raise(ErrKind::argument, "unknown exec mode '" + name + "'");
}

inline const char* exec_mode_name(ExecMode m) {
  return m == ExecMode::serial ? "serial" : "openmp";
}

template <class Fn>
void for_each_replicate(long long count, ExecMode mode, Fn&& fn) {
#ifdef _OPENMP
  if (mode == ExecMode::openmp) {
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      bool skip;
#pragma omp critical(shiftbc_replicate_err)
      skip = first_error != nullptr;
      if (skip) continue;
      try {
        fn(i);
      } catch (...) {
#pragma omp critical(shiftbc_replicate_err)
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)mode;
#endif
  for (long long i = 0; i < count; ++i) fn(i);
}

}  // namespace shiftbc
