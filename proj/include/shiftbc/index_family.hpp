#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftbc/errors.hpp"

namespace shiftbc {

using BigInt = boost::multiprecision::cpp_int;

// Integer-coefficient polynomial, coefficients low degree first.
struct Polynomial {
  std::vector<long long> coeffs;

  explicit Polynomial(std::vector<long long> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) raise(ErrKind::argument, "polynomial needs coefficients");
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_constant() const { return degree() == 0; }
  long long leading() const { return coeffs.back(); }

  BigInt eval(const BigInt& n) const;
  Polynomial derivative() const;

  // Smallest integer n0 >= 0 such that the polynomial is strictly monotone on
  // [n0, infinity) (integer Cauchy bound on the roots of the derivative).
  long long monotone_threshold() const;
};

Polynomial operator-(const Polynomial& a, const Polynomial& b);

// The index functions q_1..q_ell.  Construction is permissive (so that
// deliberately bad families can be fed to the checkers); nonnegativity is
// enforced pointwise by evaluate and certified globally by
// check_assumption_i.
class IndexFamily {
 public:
  explicit IndexFamily(std::vector<Polynomial> polys);

  int ell() const { return static_cast<int>(polys_.size()); }
  const Polynomial& poly(int i) const { return polys_[static_cast<std::size_t>(i)]; }

  // Exact evaluation of q_{i+1}(n); i is 0-based.  Negative values violate
  // the family invariant and throw, naming (i, n).
  BigInt evaluate(int i, long long n) const;

  // evaluate narrowed to a machine integer; values outside int64 abort the
  // run with a resource error.  Hot path: int128 Horner with a magnitude
  // guard, falling back to exact big-integer evaluation only when the guard
  // trips.
  long long evaluate_i64(int i, long long n) const {
    if (i < 0 || i >= ell()) raise(ErrKind::argument, "index function out of range");
    if (n < 0) raise(ErrKind::argument, "index functions are defined for n >= 0");
    const auto& c = polys_[static_cast<std::size_t>(i)].coeffs;
    constexpr __int128 kGuard = static_cast<__int128>(1) << 62;
    __int128 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * n + *it;
      if (acc > kGuard || acc < -kGuard) return evaluate_i64_slow(i, n);
    }
    if (acc < 0) return evaluate_i64_slow(i, n);  // raises, naming (i, n)
    return static_cast<long long>(acc);
  }

  // min over i != j of |q_i(n) - q_j(n)|; requires ell >= 2.
  long long q_min(long long n) const;

  // Semi-metric delta(m, n) = min over all i, j of |q_i(m) - q_j(n)|.
  long long delta_semimetric(long long m, long long n) const;

 private:
  long long evaluate_i64_slow(int i, long long n) const;

  std::vector<Polynomial> polys_;
};

struct AssumptionReport {
  enum class Part { i, ii };
  Part part;
  bool pass = false;
  // Certified solution-count bound (part i) or exact violating-pair count
  // (part ii).  Only meaningful when pass is true for part i.
  long long bound = 0;
  long long horizon = 0;
  bool certified = false;
  std::string witness;  // present when pass is false
};

// Assumption (i): for every pair i != j and every integer k, the number of
// n >= 0 with q_i(n) - q_j(n) = k or q_i(n) = k is bounded.  The scan extends
// past every polynomial's monotone threshold until tail values clear all
// earlier values, which certifies the reported bound for all n, not just the
// horizon.
AssumptionReport check_assumption_i(const IndexFamily& family, long long horizon);

// Assumption (ii): the pairs n > m >= 0 with max_i q_i(n) <= max_i q_i(m)
// form a finite set; returns its exact cardinality (certified via the
// eventual strict growth of the running maximum).
AssumptionReport check_assumption_ii(const IndexFamily& family, long long horizon);

}  // namespace shiftbc
