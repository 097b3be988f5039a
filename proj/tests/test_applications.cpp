#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shiftbc/engine.hpp"
#include "shiftbc/entropy.hpp"
#include "shiftbc/hitting.hpp"
#include "shiftbc/maxlog.hpp"
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

}  // namespace

TEST_CASE("entropy_exact closed forms") {
  CHECK(entropy_exact(fair_coin()) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // hand formula, written out independently of the library path
  const double hand = -(2.0 / 3.0) * (0.9 * std::log(0.9) + 0.1 * std::log(0.1)) -
                      (1.0 / 3.0) * (0.2 * std::log(0.2) + 0.8 * std::log(0.8));
  CHECK(entropy_exact(chain()) == doctest::Approx(hand).epsilon(1e-12));

  // geometric closed form vs direct series summation
  const double p = 0.35;
  double series = 0.0;
  for (Symbol a = 0; a < 400; ++a) {
    const double pa = p * std::pow(1.0 - p, static_cast<double>(a));
    series -= pa * std::log(pa);
  }
  CHECK(entropy_exact(ProcessModel::iid_geometric(p)) ==
        doctest::Approx(series).epsilon(1e-10));

  CHECK_THROWS_AS(entropy_exact(ProcessModel::gauss_digits()), Error);
}

TEST_CASE("entropy_smb: fair coin closed form") {
  const long long r = 16;
  const auto rep = entropy_smb(fair_coin(), Sidedness::two_sided, r, 5, {1, 0});
  const double expected = (2.0 * r + 1.0) * std::log(2.0) / (2.0 * r);
  for (const auto& s : rep.samples) CHECK(s.estimate == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.exact_h.has_value());
  CHECK_THROWS_AS(entropy_smb(fair_coin(), Sidedness::two_sided, 0, 5, {1, 0}), Error);
}

TEST_CASE("entropy_smb approaches entropy_exact for the markov chain") {
  const auto model = chain();
  const double h = entropy_exact(model);
  const auto rep = entropy_smb(model, Sidedness::two_sided, 200, 100, {2, 0});
  CHECK(std::abs(rep.mean() - h) <= 0.01);

  // error decay: batches of 50 seeds at radius r vs 4r
  const long long r = 25;
  int closer = 0;
  for (int batch = 0; batch < 10; ++batch) {
    const RngSeed base{100 + static_cast<std::uint64_t>(batch),
                       static_cast<std::uint32_t>(batch * 50)};
    const double small = entropy_smb(model, Sidedness::two_sided, r, 50, base).mean();
    const double big = entropy_smb(model, Sidedness::two_sided, 4 * r, 50, base).mean();
    if (std::abs(big - h) < std::abs(small - h)) ++closer;
  }
  CHECK(closer >= 8);
}

TEST_CASE("entropy_smb one-sided divisor") {
  const long long r = 16;
  const auto rep = entropy_smb(fair_coin(), Sidedness::one_sided, r, 3, {4, 0});
  const double expected = (r + 1.0) * std::log(2.0) / r;
  for (const auto& s : rep.samples)
    CHECK(s.estimate == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("entropy_smb gauss digits sanity against the quadrature oracle") {
  const double h_ref = oracles::gauss_entropy_quadrature();
  CHECK(h_ref ==
        doctest::Approx(M_PI * M_PI / (6.0 * std::log(2.0))).epsilon(1e-8));
  const auto rep =
      entropy_smb(ProcessModel::gauss_digits(), Sidedness::one_sided, 2000, 10, {5, 0});
  CHECK(std::abs(rep.mean() - h_ref) <= 0.15);
  CHECK_FALSE(rep.exact_h.has_value());
}

TEST_CASE("max_log_distance basics") {
  const auto fam = family({{0, 1}});
  const DistanceParams params(1.0);

  // trajectory equal to the target around the first shift: unresolved
  std::vector<Symbol> zeros(41, 0);
  const SymbolWindow target(Sidedness::two_sided, {-8, 8}, std::vector<Symbol>(17, 0));
  const SymbolWindow flat(Sidedness::two_sided, {-20, 20}, zeros);
  Trajectory t = Trajectory::wrap_window(flat);
  CHECK_THROWS_AS(max_log_distance(t, {target}, fam, 5, params, {5}), Error);
  try {
    max_log_distance(t, {target}, fam, 5, params, {5});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::resolution);
    CHECK(std::string(e.what()).find("n = 1") != std::string::npos);
  }

  // running maximum is non-decreasing and nonnegative
  Trajectory coin = Trajectory::from_model(fair_coin(), Sidedness::two_sided, {6, 0});
  const auto target_w =
      sample_window(fair_coin(), Sidedness::two_sided, {-64, 64},
                    role_seed(6, 0, 1));
  const auto cps = geometric_checkpoints(20000);
  const auto trace = max_log_distance(coin, {target_w}, fam, 20000, params, cps);
  double prev = 0.0;
  for (const auto& [n, m] : trace) {
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(prev >= 1.0);  // certainly found some agreement depth by N = 2e4
}

TEST_CASE("hitting_time basics") {
  const auto fam = family({{0, 1}});
  std::vector<Symbol> zeros(200, 0);
  const SymbolWindow flat(Sidedness::two_sided, {-20, 178}, zeros);
  const SymbolWindow target(Sidedness::two_sided, {-5, 5},
                            std::vector<Symbol>(11, 0));
  Trajectory t = Trajectory::wrap_window(flat);
  const auto rec = hitting_time(t, target, fam, 5, 100);
  CHECK(rec.tau == 1);
  CHECK_FALSE(rec.censored);

  // censoring returns the cap, never an invented tau
  std::vector<Symbol> ones(200, 1);
  const SymbolWindow hostile(Sidedness::two_sided, {-20, 178}, ones);
  Trajectory h = Trajectory::wrap_window(hostile);
  const auto cens = hitting_time(h, target, fam, 5, 50);
  CHECK(cens.censored);
  CHECK(cens.tau == 50);

  CHECK_THROWS_AS(hitting_time(t, target, fam, 9, 100), Error);  // target too narrow
}

TEST_CASE("hitting censoring is monotone in the cap") {
  const auto fam = family({{0, 1}});
  const auto model = fair_coin();
  for (int rep = 0; rep < 20; ++rep) {
    const RngSeed omega_seed = role_seed(31, static_cast<std::uint32_t>(rep), 0);
    const RngSeed target_seed = role_seed(31, static_cast<std::uint32_t>(rep), 1);
    const auto target =
        sample_window(model, Sidedness::two_sided, {-4, 4}, target_seed);
    Trajectory t1 = Trajectory::from_model(model, Sidedness::two_sided, omega_seed);
    Trajectory t2 = Trajectory::from_model(model, Sidedness::two_sided, omega_seed);
    const auto small = hitting_time(t1, target, fam, 4, 200);
    const auto large = hitting_time(t2, target, fam, 4, 100000);
    if (!small.censored) {
      CHECK(large.tau == small.tau);
    } else {
      CHECK(large.tau >= small.tau);
    }
  }
}

TEST_CASE("duality with the max-log statistic on a shared trajectory") {
  // tau_{C_n} <= N  iff  some k <= N lands the shift inside the radius-n
  // cylinder  iff  M_N >= gamma (n + 1).
  const auto fam = family({{0, 1}});
  const auto model = fair_coin();
  const long long n = 3;
  const long long n_max = 3000;
  for (int rep = 0; rep < 10; ++rep) {
    const RngSeed omega_seed = role_seed(55, static_cast<std::uint32_t>(rep), 0);
    const RngSeed target_seed = role_seed(55, static_cast<std::uint32_t>(rep), 1);
    const auto target =
        sample_window(model, Sidedness::two_sided, {-64, 64}, target_seed);
    Trajectory t1 = Trajectory::from_model(model, Sidedness::two_sided, omega_seed);
    Trajectory t2 = Trajectory::from_model(model, Sidedness::two_sided, omega_seed);

    const Cylinder small_target(Interval{-n, n},
                                std::vector<Symbol>(target.symbols().begin() +
                                                        (64 - n),
                                                    target.symbols().begin() +
                                                        (64 + n + 1)));
    const SymbolWindow small_window(Sidedness::two_sided, {-n, n},
                                    small_target.symbols);
    const auto rec = hitting_time(t1, small_window, fam, n, n_max);
    const auto trace =
        max_log_distance(t2, {target}, fam, n_max, DistanceParams(1.0), {n_max});
    const double m_n = trace.back().second;
    CHECK((rec.tau <= n_max && !rec.censored) == (m_n >= static_cast<double>(n + 1)));
  }
}

TEST_CASE("exponent_fit") {
  // tau = 4^n exactly: slope ln 4, zero residual
  std::vector<HittingTimeRecord> records;
  for (long long n = 3; n <= 6; ++n)
    for (int i = 0; i < 30; ++i) {
      HittingTimeRecord r;
      r.radius = n;
      r.tau = 1LL << (2 * n);
      r.cap = 1 << 30;
      records.push_back(r);
    }
  const auto fit = exponent_fit(records);
  CHECK(fit.slope == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(fit.slope_stderr <= 1e-10);
  CHECK(fit.censored_total == 0);

  // censored records are excluded and counted
  HittingTimeRecord c;
  c.radius = 4;
  c.tau = c.cap = 100;
  c.censored = true;
  records.push_back(c);
  const auto fit2 = exponent_fit(records);
  CHECK(fit2.censored_total == 1);
  CHECK(fit2.slope == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  // too few usable radii
  std::vector<HittingTimeRecord> thin(records.begin(), records.begin() + 60);
  CHECK_THROWS_AS(exponent_fit(thin), Error);
}

TEST_CASE("hitting exponent sanity at small radii") {
  const auto fam = family({{0, 1}});
  const auto model = fair_coin();
  std::vector<HittingTimeRecord> records;
  for (long long radius : {3, 4, 5}) {
    for (int rep = 0; rep < 60; ++rep) {
      const RngSeed omega_seed =
          role_seed(77, static_cast<std::uint32_t>(rep), 2 * static_cast<std::uint64_t>(radius));
      const RngSeed target_seed =
          role_seed(77, static_cast<std::uint32_t>(rep), 2 * static_cast<std::uint64_t>(radius) + 1);
      Trajectory t = Trajectory::from_model(model, Sidedness::two_sided, omega_seed);
      const auto target = sample_window(model, Sidedness::two_sided,
                                        {-radius, radius}, target_seed);
      records.push_back(
          hitting_time(t, target, fam, radius, 1 << 22, omega_seed, target_seed));
    }
  }
  const auto fit = exponent_fit(records);
  CHECK(fit.slope > 0.8);
  CHECK(fit.slope < 2.0);
}
