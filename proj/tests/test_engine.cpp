#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "shiftbc/engine.hpp"
#include "shiftbc/parallel.hpp"
#include "shiftbc/runner.hpp"

using namespace shiftbc;

namespace {

ProcessModel fair_coin() { return ProcessModel::iid_finite({0.5, 0.5}); }
ProcessModel chain() { return ProcessModel::markov({{0.9, 0.1}, {0.2, 0.8}}); }

IndexFamily family(std::vector<std::vector<long long>> coeffs) {
  std::vector<Polynomial> polys;
  for (auto& c : coeffs) polys.emplace_back(std::move(c));
  return IndexFamily(std::move(polys));
}

CylinderSchedule zero_cylinder(int ell) {
  return CylinderSchedule::fixed(
      std::vector<Cylinder>(static_cast<std::size_t>(ell), Cylinder({0, 0}, {0})));
}

}  // namespace

TEST_CASE("geometric checkpoints") {
  const auto cps = geometric_checkpoints(1000, 1.2, {500});
  CHECK(cps.front() == 1);
  CHECK(cps.back() == 1000);
  CHECK(std::find(cps.begin(), cps.end(), 500) != cps.end());
  for (std::size_t i = 1; i < cps.size(); ++i) CHECK(cps[i] > cps[i - 1]);
}

TEST_CASE("expected_sum_shift closed forms") {
  CHECK(expected_sum_shift(fair_coin(), zero_cylinder(1), 10000) == 5000.0);
  CHECK(expected_sum_shift(fair_coin(), zero_cylinder(2), 10000) == 2500.0);

  const auto fixed = CylinderSchedule::fixed({Cylinder({0, 1}, {0, 0})});
  CHECK(expected_sum_shift(chain(), fixed, 1000) ==
        doctest::Approx(0.6 * 1000).epsilon(1e-12));

  // additivity: E(N) - E(M) is the sum over (M, N]
  const double e_n = expected_sum_shift(chain(), fixed, 700);
  const double e_m = expected_sum_shift(chain(), fixed, 300);
  CHECK(e_n - e_m == doctest::Approx(0.6 * 400).epsilon(1e-10));
}

TEST_CASE("nonconventional_sum_shift on fixed windows") {
  const auto fam = family({{0, 1}});
  std::vector<Symbol> zeros(101, 0);
  const SymbolWindow all_zero(Sidedness::two_sided, {0, 100}, zeros);
  Trajectory t0 = Trajectory::wrap_window(all_zero);
  CHECK(nonconventional_sum_shift(t0, zero_cylinder(1), fam, 100) == 100);

  std::vector<Symbol> alt(101);
  for (int i = 0; i <= 100; ++i) alt[static_cast<std::size_t>(i)] = i % 2;
  const SymbolWindow alternating(Sidedness::two_sided, {0, 100}, alt);
  Trajectory t1 = Trajectory::wrap_window(alternating);
  CHECK(nonconventional_sum_shift(t1, zero_cylinder(1), fam, 100) == 50);

  // insufficient window names the required span
  const SymbolWindow narrow(Sidedness::two_sided, {0, 5}, {0, 0, 0, 0, 0, 0});
  Trajectory t2 = Trajectory::wrap_window(narrow);
  CHECK_THROWS_AS(nonconventional_sum_shift(t2, zero_cylinder(1), fam, 10), Error);
  try {
    nonconventional_sum_shift(t2, zero_cylinder(1), fam, 10);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::resolution);
  }
}

TEST_CASE("S_N is monotone, integer, at most N, with checkpoint trace") {
  const auto fam = family({{0, 1}});
  Trajectory t = Trajectory::from_model(fair_coin(), Sidedness::two_sided, {3, 0});
  const auto cps = geometric_checkpoints(2000);
  std::vector<std::pair<long long, long long>> trace;
  const long long s = nonconventional_sum_shift(t, zero_cylinder(1), fam, 2000, cps, &trace);
  CHECK(trace.back().second == s);
  CHECK(s <= 2000);
  long long prev = 0;
  for (const auto& [n, sn] : trace) {
    CHECK(sn >= prev);
    CHECK(sn <= n);
    prev = sn;
  }
}

TEST_CASE("events setup") {
  const auto fam2 = family({{0, 1}, {0, 2}});
  std::vector<std::uint8_t> all_true(2001, 1);
  CHECK(nonconventional_sum_events(all_true, fam2, 1000) == 1000);

  CHECK_THROWS_AS(nonconventional_sum_events(all_true, fam2, 1001), Error);

  // Gamma_j = {omega_j = 0} under the fair coin, ell = 2, q = (n, 2n)
  const long long n_max = 1000000;
  Trajectory t = Trajectory::from_model(fair_coin(), Sidedness::two_sided, {8, 0});
  std::vector<std::uint8_t> ind(static_cast<std::size_t>(2 * n_max + 1));
  for (long long j = 0; j < static_cast<long long>(ind.size()); ++j)
    ind[static_cast<std::size_t>(j)] = t.symbol(j) == 0;
  const long long s = nonconventional_sum_events(ind, fam2, n_max);
  const std::vector<double> probs(ind.size(), 0.5);
  const double e = expected_sum_events(probs, fam2, n_max);
  CHECK(e == doctest::Approx(0.25 * n_max));
  CHECK(std::abs(static_cast<double>(s) / e - 1.0) <= 0.02);

  // sparse map form with q(n) = n^2
  const auto sq = family({{0, 0, 1}});
  std::unordered_map<long long, bool> sparse;
  const long long n_sq = 100000;
  for (long long n = 1; n <= n_sq; ++n) {
    const long long j = n * n;
    sparse.emplace(j, t.symbol(j) == 0);
  }
  const long long s_sq = nonconventional_sum_events(sparse, sq, n_sq);
  CHECK(std::abs(static_cast<double>(s_sq) / (0.5 * n_sq) - 1.0) <= 0.05);

  std::unordered_map<long long, bool> missing;
  CHECK_THROWS_AS(nonconventional_sum_events(missing, sq, 10), Error);
}

TEST_CASE("pair_correlation_sum") {
  const auto fam = family({{0, 1}});
  // single index: lhs = p - p^2 <= rhs = p
  const auto single = pair_correlation_sum(chain(), zero_cylinder(1), fam, 5, 5);
  const double p = 2.0 / 3.0;
  CHECK(single.lhs == doctest::Approx(p - p * p).epsilon(1e-12));
  CHECK(single.lhs <= single.rhs);

  // iid: every off-diagonal covariance vanishes, so lhs is exactly the
  // diagonal variance sum
  const auto iid = pair_correlation_sum(fair_coin(), zero_cylinder(1), fam, 1, 100);
  CHECK(iid.lhs == doctest::Approx(100 * 0.25).epsilon(1e-10));

  // markov: the empirical constant stays bounded as N grows
  const auto a = pair_correlation_sum(chain(), zero_cylinder(1), fam, 1, 250);
  const auto b = pair_correlation_sum(chain(), zero_cylinder(1), fam, 1, 500);
  CHECK(b.lhs / b.rhs <= a.lhs / a.rhs + 0.5);

  CHECK_THROWS_AS(pair_correlation_sum(chain(), zero_cylinder(1), fam, 1, 5000), Error);
}

TEST_CASE("pair correlation lhs matches enumeration on a small window") {
  const auto fam = family({{0, 1}});
  const auto model = chain();
  const auto pc = pair_correlation_sum(model, zero_cylinder(1), fam, 1, 6);
  double lhs = 0.0;
  for (long long m = 1; m <= 6; ++m)
    for (long long n = 1; n <= 6; ++n) {
      std::vector<std::pair<Coord, Symbol>> cons{{m, 0}, {n, 0}};
      const double pmn = oracles::joint_by_enumeration(model, cons, 2);
      const double pm = oracles::joint_by_enumeration(model, {{m, 0}}, 2);
      const double pn = oracles::joint_by_enumeration(model, {{n, 0}}, 2);
      lhs += pmn - pm * pn;
    }
  CHECK(pc.lhs == doctest::Approx(lhs).epsilon(1e-11));
}

TEST_CASE("verify_nesting") {
  // expanding intervals are D-nested for D = 1
  std::map<long long, std::vector<Cylinder>> grow, shrink;
  for (long long n = 1; n <= 50; ++n) {
    grow.emplace(n, std::vector<Cylinder>{
                        Cylinder({-n, n}, std::vector<Symbol>(2 * n + 1, 0))});
    const long long r = 51 - n;
    shrink.emplace(n, std::vector<Cylinder>{
                          Cylinder({0, r}, std::vector<Symbol>(r + 1, 0))});
  }
  const auto growing = CylinderSchedule::explicit_list(std::move(grow));
  CHECK(verify_nesting(growing, NestingVerdict::Mode::d_nested, 1, 50).holds);
  CHECK(verify_nesting(growing, NestingVerdict::Mode::right_d_nested, 1, 50).holds);

  const auto shrinking = CylinderSchedule::explicit_list(std::move(shrink));
  const auto verdict =
      verify_nesting(shrinking, NestingVerdict::Mode::right_d_nested, 3, 50);
  CHECK_FALSE(verdict.holds);
  REQUIRE(verdict.witness.has_value());
  // first n whose right end has dropped by >= D below the running max
  CHECK(verdict.witness->first == 1);
  CHECK(verdict.witness->second == 4);

  // radius schedules have non-decreasing radii, hence 1-nested
  std::vector<SymbolWindow> targets;
  targets.emplace_back(Sidedness::two_sided, Interval{-64, 64},
                       std::vector<Symbol>(129, 0));
  const auto radius = CylinderSchedule::radius(2.0, std::move(targets));
  CHECK(verify_nesting(radius, NestingVerdict::Mode::d_nested, 1, 5000).holds);
}

TEST_CASE("envelope_check") {
  ConvergenceReport exact;
  for (long long n = 10; n <= 1000; n *= 10)
    exact.rows.push_back({n, n, static_cast<double>(n)});
  CHECK(envelope_check(exact, 20.0, 0.5) == 0.0);

  ConvergenceReport bad;
  for (long long n = 10; n <= 100000; n *= 10)
    bad.rows.push_back({n, 10 * n, static_cast<double>(n)});
  CHECK(envelope_check(bad, 1.0, 0.5) == 1.0);

  CHECK_THROWS_AS(envelope_check(exact, 0.0, 0.5), Error);
}

TEST_CASE("intersection_vs_product_gap") {
  const auto fam2 = family({{0, 1}, {0, 2}});
  // iid with non-clashing coordinate sets: every term vanishes
  CHECK(intersection_vs_product_gap(fair_coin(), zero_cylinder(2), fam2, 300) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // markov: partial sums converge geometrically
  const double g1 = intersection_vs_product_gap(chain(), zero_cylinder(2), fam2, 1000);
  const double g2 = intersection_vs_product_gap(chain(), zero_cylinder(2), fam2, 2000);
  CHECK(std::abs(g2 - g1) <= 1e-6);
  CHECK(g2 > 0.0);

  CHECK_THROWS_AS(intersection_vs_product_gap(chain(), zero_cylinder(1),
                                              family({{0, 1}}), 100),
                  Error);
}

TEST_CASE("unbiasedness: mean S_N equals the joint-probability sum") {
  const auto fam2 = family({{0, 1}, {0, 2}});
  const auto model = chain();
  const auto sched = zero_cylinder(2);
  const long long n_max = 10000;
  const int seeds = 200;

  const double expected = expected_sum_shift_joint(model, sched, fam2, n_max);

  std::vector<double> s_values(seeds);
  for_each_replicate(seeds, ExecMode::openmp, [&](long long rep) {
    Trajectory t = Trajectory::from_model(
        model, Sidedness::two_sided,
        role_seed(424242, static_cast<std::uint32_t>(rep), 0));
    s_values[static_cast<std::size_t>(rep)] = static_cast<double>(
        nonconventional_sum_shift(t, sched, fam2, n_max));
  });
  const double mean = oracles::mean(s_values);
  double var = 0.0;
  for (double s : s_values) var += (s - mean) * (s - mean);
  var /= seeds - 1;
  const double se = std::sqrt(var / seeds);
  CHECK(std::abs(mean - expected) <= 4.0 * se);
}

TEST_CASE("replicate pool: serial and openmp produce identical results") {
  const auto fam = family({{0, 1}});
  const auto sched = zero_cylinder(1);
  auto run = [&](ExecMode mode) {
    std::vector<long long> s(32);
    for_each_replicate(32, mode, [&](long long rep) {
      Trajectory t = Trajectory::from_model(
          fair_coin(), Sidedness::two_sided,
          role_seed(7, static_cast<std::uint32_t>(rep), 0));
      s[static_cast<std::size_t>(rep)] =
          nonconventional_sum_shift(t, sched, fam, 20000);
    });
    return s;
  };
  CHECK(run(ExecMode::serial) == run(ExecMode::openmp));
}

TEST_CASE("replicate pool propagates worker errors") {
  CHECK_THROWS_AS(for_each_replicate(8, ExecMode::openmp,
                                     [&](long long i) {
                                       if (i == 5)
                                         raise(ErrKind::resource, "boom");
                                     }),
                  Error);
}
