#include <doctest.h>

#include <map>

#include "shiftbc/index_family.hpp"

using namespace shiftbc;

namespace {

IndexFamily family(std::vector<std::vector<long long>> coeffs) {
  std::vector<Polynomial> polys;
  for (auto& c : coeffs) polys.emplace_back(std::move(c));
  return IndexFamily(std::move(polys));
}

}  // namespace

TEST_CASE("evaluate") {
  const auto sq = family({{0, 0, 1}});  // n^2
  CHECK(sq.evaluate(0, 7) == 49);
  CHECK(sq.evaluate_i64(0, 7) == 49);

  const auto affine = family({{3, 2}});  // 2n + 3
  CHECK(affine.evaluate(0, 0) == 3);

  const auto dippy = family({{0, -10, 1}});  // n^2 - 10n, negative at n = 3
  CHECK_THROWS_AS(dippy.evaluate(0, 3), Error);
  try {
    dippy.evaluate_i64(0, 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::invariant);
    CHECK(std::string(e.what()).find("q_1(3)") != std::string::npos);
  }
  CHECK(dippy.evaluate(0, 12) == 24);  // fine past the dip
}

TEST_CASE("evaluate_i64 falls back exactly and guards the machine range") {
  const auto big = family({{0, 0, 0, 4'000'000'000LL}});  // 4e9 n^3
  CHECK(big.evaluate_i64(0, 10) == 4'000'000'000'000LL);
  CHECK_THROWS_AS(big.evaluate_i64(0, 1'000'000), Error);  // 4e27
  try {
    big.evaluate_i64(0, 1'000'000);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::resource);
  }
  CHECK(big.evaluate(0, 1'000'000) == BigInt("4000000000000000000000000000"));
}

TEST_CASE("check_assumption_i") {
  const auto rep = check_assumption_i(family({{0, 1}, {0, 0, 1}}), 1000);  // n, n^2
  CHECK(rep.pass);
  CHECK(rep.certified);
  CHECK(rep.bound == 2);  // n^2 - n = 0 at n in {0, 1}

  const auto fail = check_assumption_i(family({{0, 1}, {1, 1}}), 1000);  // n, n+1
  CHECK_FALSE(fail.pass);
  CHECK(fail.witness.find("constant") != std::string::npos);

  const auto inj = check_assumption_i(family({{0, 2}}), 1000);  // 2n
  CHECK(inj.pass);
  CHECK(inj.bound == 1);

  const auto neg = check_assumption_i(family({{-5, 1}}), 1000);  // n - 5
  CHECK_FALSE(neg.pass);
  CHECK(neg.witness.find("negative") != std::string::npos);

  const auto constant = check_assumption_i(family({{7}}), 1000);
  CHECK_FALSE(constant.pass);
}

TEST_CASE("check_assumption_ii") {
  const auto rep = check_assumption_ii(family({{0, 1}, {0, 0, 1}}), 1000);
  CHECK(rep.pass);
  CHECK(rep.bound == 0);

  // (n - 3)^2 + n = n^2 - 5n + 9: hand enumeration of violating pairs
  // M = 9,5,3,3,5,9,15,...: (1,0)..(5,0), (2,1),(3,1),(4,1), (3,2) -> 9 pairs
  const auto dip = check_assumption_ii(family({{9, -5, 1}}), 1000);
  CHECK(dip.pass);
  CHECK(dip.bound == 9);
  CHECK(dip.certified);

  const auto incr = check_assumption_ii(family({{0, 1}, {0, 2}, {1, 3}}), 1000);
  CHECK(incr.pass);
  CHECK(incr.bound == 0);
}

TEST_CASE("q_min and delta_semimetric") {
  const auto f = family({{0, 1}, {0, 0, 1}});  // n, n^2
  CHECK(f.q_min(3) == 6);
  CHECK(f.q_min(1) == 0);
  CHECK(f.delta_semimetric(2, 3) == 1);  // min |{2,4} - {3,9}|
  CHECK(f.delta_semimetric(5, 5) == 0);  // i = j term

  const auto trio = family({{0, 1}, {0, 2}, {0, 3}});
  CHECK(trio.q_min(5) == 5);

  const auto solo = family({{0, 1}});
  CHECK_THROWS_AS(solo.q_min(4), Error);
  CHECK(solo.delta_semimetric(2, 5) == 3);
  CHECK_THROWS_AS(solo.delta_semimetric(0, 5), Error);
}

TEST_CASE("counting bounds from the checker hold by direct tally") {
  // Eq-style statements: #{n <= H : q_min(n) = k} <= K ell^2 and
  // #{n : delta(m, n) = k} <= 2 K^2 ell^2.
  const auto f = family({{0, 1}, {0, 0, 1}});
  const long long horizon = 2000;
  const auto rep = check_assumption_i(f, horizon);
  REQUIRE(rep.pass);
  const long long k_cap = 50;

  std::map<long long, long long> qmin_counts;
  for (long long n = 1; n <= horizon; ++n) {
    const long long q = f.q_min(n);
    if (q <= k_cap) ++qmin_counts[q];
  }
  for (const auto& [k, c] : qmin_counts) CHECK(c <= rep.bound * 4);

  for (long long m : {1LL, 7LL, 50LL}) {
    std::map<long long, long long> delta_counts;
    for (long long n = 1; n <= horizon; ++n) {
      const long long d = f.delta_semimetric(m, n);
      if (d <= k_cap) ++delta_counts[d];
    }
    for (const auto& [k, c] : delta_counts)
      CHECK(c <= 2 * rep.bound * rep.bound * 4);
  }
}

TEST_CASE("paper-class families pass both checkers") {
  const std::vector<std::vector<std::vector<long long>>> families{
      {{0, 1}},                       // n
      {{0, 0, 1}},                    // n^2
      {{3, 2}},                       // 2n + 3
      {{0, 1}, {0, 0, 1}},            // n, n^2
      {{0, 1}, {0, 2}},               // n, 2n
      {{0, 1}, {0, 2}, {1, 3}},       // n, 2n, 3n+1
      {{0, 0, 1}, {0, 1, 1}},         // n^2, n^2+n
      {{9, -5, 1}},                   // (n-3)^2 + n
  };
  for (const auto& coeffs : families) {
    auto f = family(coeffs);
    CHECK(check_assumption_i(f, 100).pass);
    CHECK(check_assumption_ii(f, 100).pass);
  }
}
