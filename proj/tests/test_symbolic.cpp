#include <doctest.h>

#include <random>

#include "shiftbc/symbolic.hpp"

using namespace shiftbc;

namespace {

SymbolWindow two_sided(Interval range, std::vector<Symbol> syms) {
  return SymbolWindow(Sidedness::two_sided, range, std::move(syms));
}

}  // namespace

TEST_CASE("cylinder_contains basics") {
  const auto w = two_sided({-1, 1}, {0, 1, 0});

  CHECK(cylinder_contains(w, Cylinder({0, 0}, {1}), 0));
  CHECK(cylinder_contains(w, Cylinder({0, 0}, {0}), 1));
  CHECK_FALSE(cylinder_contains(w, Cylinder({0, 0}, {1}), 1));

  const auto wide = two_sided({0, 5}, {0, 1, 0, 1, 0, 1});
  CHECK_THROWS_AS(cylinder_contains(wide, Cylinder({0, 1}, {0, 1}), 5), Error);
  try {
    cylinder_contains(wide, Cylinder({0, 1}, {0, 1}), 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::range);
  }
}

TEST_CASE("cylinder_contains is shift equivariant") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> syms(41);
    for (auto& s : syms) s = bit(gen);
    const auto w = two_sided({-20, 20}, syms);
    const Cylinder cyl({-2, 2}, {bit(gen), bit(gen), bit(gen), bit(gen), bit(gen)});
    const long long t = std::uniform_int_distribution<long long>(0, 10)(gen);

    // Relabeling the window by t (coordinate i holds the old i + t) must give
    // the same membership at shift 0.
    std::vector<Symbol> shifted(syms.begin() + t, syms.end());
    const auto wt = two_sided({-20, 20 - t}, shifted);
    CHECK(cylinder_contains(w, cyl, t) == cylinder_contains(wt, cyl, 0));
  }
}

TEST_CASE("disagreement_radius basics") {
  CHECK(disagreement_radius(two_sided({-1, 1}, {1, 0, 1}),
                            two_sided({-1, 1}, {1, 1, 1})) == 0);
  CHECK(disagreement_radius(two_sided({-1, 1}, {1, 0, 1}),
                            two_sided({-1, 1}, {1, 0, 0})) == 1);

  std::vector<Symbol> same(11, 1);
  const auto e = disagreement_radius(two_sided({-5, 5}, same), two_sided({-5, 5}, same));
  CHECK_FALSE(e.has_value());  // exhausted
}

TEST_CASE("disagreement_radius one-sided drops the negative clause") {
  const SymbolWindow a(Sidedness::one_sided, {0, 3}, {1, 1, 0, 1});
  const SymbolWindow b(Sidedness::one_sided, {0, 3}, {1, 1, 1, 1});
  CHECK(disagreement_radius(a, b) == 2);
  CHECK_THROWS_AS(disagreement_radius(a, two_sided({-1, 1}, {1, 1, 0})), Error);
}

TEST_CASE("log_distance_phi scales the radius by gamma") {
  const auto w1 = two_sided({-4, 4}, {0, 0, 0, 0, 0, 0, 0, 1, 0});
  const auto w2 = two_sided({-4, 4}, {0, 0, 0, 0, 0, 0, 0, 0, 0});
  // disagreement at +3
  CHECK(log_distance_phi(w1, w2, DistanceParams(1.0)) == doctest::Approx(3.0));
  CHECK(log_distance_phi(w1, w2, DistanceParams(0.5)) == doctest::Approx(1.5));

  const auto c1 = two_sided({-1, 1}, {1, 0, 1});
  const auto c2 = two_sided({-1, 1}, {1, 1, 1});
  CHECK(log_distance_phi(c1, c2, DistanceParams(2.5)) == 0.0);

  std::vector<Symbol> same(9, 0);
  CHECK_THROWS_AS(log_distance_phi(two_sided({-4, 4}, same), two_sided({-4, 4}, same),
                                   DistanceParams(1.0)),
                  Error);
}

TEST_CASE("metric symmetry and the exp(-gamma m) identity") {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> bit(0, 1);
  const DistanceParams params(0.7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> a(21), b(21);
    for (auto& s : a) s = bit(gen);
    for (auto& s : b) s = bit(gen);
    const auto w1 = two_sided({-10, 10}, a);
    const auto w2 = two_sided({-10, 10}, b);
    const auto m = disagreement_radius(w1, w2);
    if (!m) continue;
    const double phi = log_distance_phi(w1, w2, params);
    CHECK(phi == doctest::Approx(params.gamma * static_cast<double>(*m)));
    CHECK(std::exp(-phi) ==
          doctest::Approx(std::exp(-params.gamma * static_cast<double>(*m))));
    CHECK(log_distance_phi(w2, w1, params) == doctest::Approx(phi));
  }
}

TEST_CASE("cylinder membership matches the distance threshold in both directions") {
  // Membership in the radius-n cylinder around a point is exactly
  // "disagreement radius > n", i.e. d < exp(-gamma n).
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Symbol> a(25), b(25);
    for (auto& s : a) s = bit(gen);
    for (auto& s : b) s = bit(gen);
    // Force frequent deep agreement so both directions get exercised.
    for (int i = 0; i < 25; ++i)
      if (bit(gen) || trial % 3 == 0) b[i] = a[i];
    const auto w1 = two_sided({-12, 12}, a);
    const auto w2 = two_sided({-12, 12}, b);
    const auto radius = disagreement_radius(w1, w2);
    const long long m = radius ? *radius : 13;  // exhausted: deeper than any n below

    for (long long n = 0; n <= 8; ++n) {
      std::vector<Symbol> block(b.begin() + static_cast<std::size_t>(12 - n),
                                b.begin() + static_cast<std::size_t>(12 + n + 1));
      const bool in_cylinder = cylinder_contains(w1, Cylinder({-n, n}, block), 0);
      CHECK(in_cylinder == (m > n));
    }
  }
}

TEST_CASE("window and cylinder validation") {
  CHECK_THROWS_AS(two_sided({2, 5}, {0, 0, 0, 0}), Error);       // must contain 0
  CHECK_THROWS_AS(two_sided({-1, 1}, {0, 0}), Error);            // wrong arity
  CHECK_THROWS_AS(SymbolWindow(Sidedness::one_sided, {1, 3}, {0, 0, 0}), Error);
  CHECK_THROWS_AS(Cylinder({0, 1}, {0}), Error);
  CHECK_THROWS_AS(Alphabet::finite(1), Error);
  CHECK_THROWS_AS(DistanceParams(0.0), Error);
  CHECK(Alphabet::countable().valid(1'000'000'000'000LL));
}
