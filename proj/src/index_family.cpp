#include "shiftbc/index_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

namespace shiftbc {

BigInt Polynomial::eval(const BigInt& n) const {
  BigInt acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * n + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (is_constant()) return Polynomial({0});
  std::vector<long long> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d[i - 1] = coeffs[i] * static_cast<long long>(i);
  return Polynomial(std::move(d));
}

long long Polynomial::monotone_threshold() const {
  if (degree() <= 1) return 0;
  const Polynomial d = derivative();
  // Integer Cauchy bound: no roots of d beyond 1 + max|a_i| / |a_lead|.
  long long top = 0;
  for (std::size_t i = 0; i + 1 < d.coeffs.size(); ++i)
    top = std::max(top, std::llabs(d.coeffs[i]));
  const long long lead = std::llabs(d.leading());
  return 2 + (top + lead - 1) / lead;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<long long> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
  return Polynomial(std::move(c));
}

IndexFamily::IndexFamily(std::vector<Polynomial> polys) : polys_(std::move(polys)) {
  if (polys_.empty()) raise(ErrKind::argument, "index family needs at least one polynomial");
}

BigInt IndexFamily::evaluate(int i, long long n) const {
  if (i < 0 || i >= ell()) raise(ErrKind::argument, "index function out of range");
  if (n < 0) raise(ErrKind::argument, "index functions are defined for n >= 0");
  BigInt v = polys_[static_cast<std::size_t>(i)].eval(BigInt(n));
  if (v < 0)
    raise(ErrKind::invariant, "q_" + std::to_string(i + 1) + "(" + std::to_string(n) +
                                  ") is negative");
  return v;
}

long long IndexFamily::evaluate_i64_slow(int i, long long n) const {
  const BigInt v = evaluate(i, n);
  if (v > std::numeric_limits<long long>::max())
    raise(ErrKind::resource, "index value q_" + std::to_string(i + 1) + "(" +
                                 std::to_string(n) + ") exceeds the machine range");
  return static_cast<long long>(v);
}

long long IndexFamily::q_min(long long n) const {
  if (ell() < 2) raise(ErrKind::argument, "q_min needs at least two index functions");
  BigInt best = -1;
  for (int i = 0; i < ell(); ++i)
    for (int j = i + 1; j < ell(); ++j) {
      BigInt d = evaluate(i, n) - evaluate(j, n);
      if (d < 0) d = -d;
      if (best < 0 || d < best) best = d;
    }
  if (best > std::numeric_limits<long long>::max())
    raise(ErrKind::resource, "q_min exceeds the machine range");
  return static_cast<long long>(best);
}

long long IndexFamily::delta_semimetric(long long m, long long n) const {
  if (m < 1 || n < 1) raise(ErrKind::argument, "delta is defined for m, n >= 1");
  BigInt best = -1;
  for (int i = 0; i < ell(); ++i) {
    const BigInt qm = evaluate(i, m);
    for (int j = 0; j < ell(); ++j) {
      BigInt d = qm - evaluate(j, n);
      if (d < 0) d = -d;
      if (best < 0 || d < best) best = d;
    }
  }
  if (best > std::numeric_limits<long long>::max())
    raise(ErrKind::resource, "delta exceeds the machine range");
  return static_cast<long long>(best);
}

namespace {

// Does p(n) = k have an integer solution with n > start?  p is strictly
// monotone past its threshold, so bracket by doubling and bisect.
bool tail_attains(const Polynomial& p, const BigInt& k, long long start) {
  const bool incr = p.leading() > 0;
  long long lo = start + 1;
  BigInt v = p.eval(BigInt(lo));
  if (v == k) return true;
  if (incr ? v > k : v < k) return false;  // the tail has already passed k
  long long hi = lo;
  do {
    hi = hi <= (1LL << 61) ? hi * 2 : hi + 1;
    v = p.eval(BigInt(hi));
  } while (incr ? v < k : v > k);
  if (v == k) return true;
  while (lo + 1 < hi) {
    const long long mid = lo + (hi - lo) / 2;
    v = p.eval(BigInt(mid));
    if (v == k) return true;
    if (incr ? v < k : v > k)
      lo = mid;
    else
      hi = mid;
  }
  return false;
}

std::optional<long long> first_negative(const Polynomial& p) {
  if (p.leading() < 0) {
    // Eventually negative; report the first witness past the monotone point.
    long long n = 0;
    while (p.eval(BigInt(n)) >= 0) ++n;
    return n;
  }
  // Nonnegative beyond the Cauchy root bound; scan the head exhaustively.
  long long top = 0;
  for (std::size_t i = 0; i + 1 < p.coeffs.size(); ++i)
    top = std::max(top, std::llabs(p.coeffs[i]));
  const long long lead = std::llabs(p.leading());
  const long long bound = p.is_constant() ? 0 : 2 + (top + lead - 1) / lead;
  for (long long n = 0; n <= bound; ++n)
    if (p.eval(BigInt(n)) < 0) return n;
  return std::nullopt;
}

}  // namespace

AssumptionReport check_assumption_i(const IndexFamily& family, long long horizon) {
  if (horizon < 1) raise(ErrKind::argument, "horizon must be >= 1");
  AssumptionReport rep;
  rep.part = AssumptionReport::Part::i;
  rep.horizon = horizon;

  const int ell = family.ell();
  for (int i = 0; i < ell; ++i) {
    if (family.poly(i).is_constant() && ell == 1 && family.poly(i).leading() >= 0) {
      rep.witness = "q_1 is constant: every k = q_1 has infinitely many solutions";
      return rep;
    }
    if (family.poly(i).is_constant()) {
      rep.witness = "q_" + std::to_string(i + 1) + " is constant";
      return rep;
    }
    if (auto n = first_negative(family.poly(i))) {
      rep.witness = "q_" + std::to_string(i + 1) + "(" + std::to_string(*n) +
                    ") is negative";
      return rep;
    }
  }

  long long k_bound = 1;
  // For the equation set {p_1, p_2(optional)}: count solutions exhaustively on
  // the head [0, scan_end], then for every head value check whether each
  // monotone tail attains it again.  Values seen only in the tails are hit at
  // most once per equation.
  auto account = [&](const std::vector<const Polynomial*>& eqs,
                     long long tail_slots) {
    long long scan_end = 0;
    for (const auto* p : eqs)
      scan_end = std::max(scan_end, p->monotone_threshold());
    std::map<BigInt, long long> counts;
    for (long long n = 0; n <= scan_end; ++n) {
      BigInt prev;
      bool have_prev = false;
      for (const auto* p : eqs) {
        const BigInt v = p->eval(BigInt(n));
        if (have_prev && v == prev) continue;  // same n solves both equations
        ++counts[v];
        prev = v;
        have_prev = true;
      }
    }
    long long worst = tail_slots;
    for (const auto& [k, c] : counts) {
      long long total = c;
      for (const auto* p : eqs)
        if (tail_attains(*p, k, scan_end)) ++total;
      worst = std::max(worst, total);
    }
    k_bound = std::max(k_bound, worst);
  };

  if (ell == 1) {
    const Polynomial* q = &family.poly(0);
    account({q}, 1);
  } else {
    std::vector<Polynomial> diffs;  // keeps storage alive for the pointers
    diffs.reserve(static_cast<std::size_t>(ell) * (ell - 1));
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) {
        if (i == j) continue;
        Polynomial d = family.poly(i) - family.poly(j);
        if (d.is_constant()) {
          rep.witness = "q_" + std::to_string(i + 1) + " - q_" +
                        std::to_string(j + 1) + " is constant (" +
                        std::to_string(d.leading()) + ")";
          return rep;
        }
        diffs.push_back(std::move(d));
      }
    std::size_t idx = 0;
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) {
        if (i == j) continue;
        account({&diffs[idx], &family.poly(i)}, 2);
        ++idx;
      }
  }

  rep.pass = true;
  rep.certified = true;
  rep.bound = k_bound;
  return rep;
}

AssumptionReport check_assumption_ii(const IndexFamily& family, long long horizon) {
  if (horizon < 1) raise(ErrKind::argument, "horizon must be >= 1");
  AssumptionReport rep;
  rep.part = AssumptionReport::Part::ii;
  rep.horizon = horizon;

  const int ell = family.ell();
  bool all_constant = true;
  for (int i = 0; i < ell; ++i) {
    if (!family.poly(i).is_constant()) all_constant = false;
    if (family.poly(i).leading() < 0) {
      rep.witness = "q_" + std::to_string(i + 1) + " tends to -infinity";
      return rep;
    }
  }
  if (all_constant) {
    rep.witness = "all index functions are constant: infinitely many pairs";
    return rep;
  }

  auto max_at = [&](long long n) {
    BigInt m = family.poly(0).eval(BigInt(n));
    for (int i = 1; i < ell; ++i) m = std::max(m, family.poly(i).eval(BigInt(n)));
    return m;
  };

  // Past n0 every nonconstant q_i strictly increases; once the running max
  // additionally clears every earlier value, no pair (m, n) with n beyond
  // that point can violate, so the enumeration below is exhaustive.
  long long n0 = 0;
  for (int i = 0; i < ell; ++i)
    if (!family.poly(i).is_constant())
      n0 = std::max(n0, family.poly(i).monotone_threshold());

  BigInt best = max_at(0);
  long long n1 = n0 + 1;
  constexpr long long kScanCap = 10'000'000;
  for (long long n = 1; n <= kScanCap; ++n) {
    const BigInt v = max_at(n);
    if (n > n0 && v > best) {
      n1 = n;
      break;
    }
    if (v > best) best = v;
    if (n == kScanCap)
      raise(ErrKind::resource, "assumption checker scan exceeded its cap");
  }

  long long violations = 0;
  std::string first_witness;
  std::vector<BigInt> maxima(static_cast<std::size_t>(n1) + 1);
  for (long long n = 0; n <= n1; ++n) maxima[static_cast<std::size_t>(n)] = max_at(n);
  for (long long n = 1; n <= n1; ++n)
    for (long long m = 0; m < n; ++m)
      if (maxima[static_cast<std::size_t>(n)] <= maxima[static_cast<std::size_t>(m)]) {
        if (violations == 0)
          first_witness = "(m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")";
        ++violations;
      }

  rep.pass = true;
  rep.certified = true;
  rep.bound = violations;
  if (violations > 0) rep.witness = first_witness;
  return rep;
}

}  // namespace shiftbc
