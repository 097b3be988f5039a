#include "shiftbc/process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shiftbc {

namespace {

constexpr double kStochasticTol = 1e-12;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  const auto n = rows.size();
  if (n == 0) raise(ErrKind::model, "transition matrix is empty");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      raise(ErrKind::model, "transition matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void require_row_stochastic(const Eigen::MatrixXd& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) < 0.0)
        raise(ErrKind::model, "transition matrix has a negative entry");
      sum += p(i, j);
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
      raise(ErrKind::model,
            "transition row " + std::to_string(i) + " does not sum to 1");
  }
}

// Primitive (irreducible and aperiodic) iff some boolean power of the
// adjacency pattern is all-positive; Wielandt's bound caps the exponent at
// (s-1)^2 + 1 <= s^2.
bool is_primitive(const Eigen::MatrixXd& p) {
  const int s = static_cast<int>(p.rows());
  std::vector<std::vector<char>> adj(s, std::vector<char>(s, 0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) adj[i][j] = p(i, j) > 0.0 ? 1 : 0;

  auto all_positive = [&](const std::vector<std::vector<char>>& m) {
    for (const auto& row : m)
      for (char v : row)
        if (!v) return false;
    return true;
  };

  std::vector<std::vector<char>> reach = adj;
  for (int step = 1; step <= s * s; ++step) {
    if (all_positive(reach)) return true;
    std::vector<std::vector<char>> next(s, std::vector<char>(s, 0));
    for (int i = 0; i < s; ++i)
      for (int k = 0; k < s; ++k)
        if (reach[i][k])
          for (int j = 0; j < s; ++j)
            if (adj[k][j]) next[i][j] = 1;
    reach = std::move(next);
  }
  return false;
}

Eigen::VectorXd solve_stationary(const Eigen::MatrixXd& p) {
  require_row_stochastic(p);
  if (!is_primitive(p))
    raise(ErrKind::model, "transition matrix is reducible or periodic");

  const auto s = p.rows();
  // pi (P - I) = 0 with the normalization sum(pi) = 1 replacing one equation.
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(s, s);
  a.row(s - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s);
  b(s - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);

  const double residual = (pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff();
  const double mass = std::abs(pi.sum() - 1.0);
  if (residual > kStochasticTol || mass > kStochasticTol || pi.minCoeff() < 0.0)
    raise(ErrKind::model, "stationary distribution solve failed its residual check");
  return pi;
}

}  // namespace

MarkovKernel::MarkovKernel(Eigen::MatrixXd transition)
    : transition_(std::move(transition)) {
  stationary_ = solve_stationary(transition_);
  const auto s = transition_.rows();
  reversed_.resize(s, s);
  for (Eigen::Index a = 0; a < s; ++a)
    for (Eigen::Index b = 0; b < s; ++b)
      reversed_(a, b) = stationary_(b) * transition_(b, a) / stationary_(a);
}

Eigen::MatrixXd MarkovKernel::power(std::uint64_t k) const {
  const auto s = transition_.rows();
  if (k == 0) return Eigen::MatrixXd::Identity(s, s);
  if (k == 1) return transition_;

  std::scoped_lock lock(cache_mutex_);
  if (auto it = power_cache_.find(k); it != power_cache_.end()) return it->second;

  // Binary decomposition over cached squares P^(2^i).
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(s, s);
  Eigen::MatrixXd base = transition_;
  std::uint64_t bit = 1;
  std::uint64_t rest = k;
  while (rest != 0) {
    if (bit > 1) {
      auto sq = power_cache_.find(bit);
      if (sq == power_cache_.end())
        sq = power_cache_.emplace(bit, base * base).first;
      base = sq->second;
    }
    if (rest & 1) result = result * base;
    rest >>= 1;
    bit <<= 1;
  }
  return power_cache_.emplace(k, std::move(result)).first->second;
}

std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& transition) {
  const Eigen::VectorXd pi = solve_stationary(to_matrix(transition));
  return {pi.data(), pi.data() + pi.size()};
}

ProcessModel ProcessModel::iid_finite(std::vector<double> probabilities) {
  if (probabilities.size() < 2)
    raise(ErrKind::model, "iid-finite model needs at least 2 symbols");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) raise(ErrKind::model, "iid-finite probabilities must be strictly positive");
    if (!(p < 1.0)) raise(ErrKind::model, "iid-finite probabilities must be < 1");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStochasticTol)
    raise(ErrKind::model, "iid-finite probabilities do not sum to 1");
  ProcessModel m;
  m.kind_ = Kind::iid_finite;
  m.probs_ = std::move(probabilities);
  return m;
}

ProcessModel ProcessModel::iid_geometric(double success_p) {
  if (!(success_p > 0.0 && success_p < 1.0))
    raise(ErrKind::model, "geometric parameter must lie in (0, 1)");
  ProcessModel m;
  m.kind_ = Kind::iid_geometric;
  m.geo_p_ = success_p;
  return m;
}

ProcessModel ProcessModel::markov(
    const std::vector<std::vector<double>>& transition) {
  ProcessModel m;
  m.kind_ = Kind::markov;
  m.markov_ = std::make_shared<const MarkovKernel>(to_matrix(transition));
  if (m.markov_->states() < 2)
    raise(ErrKind::model, "markov model needs at least 2 states");
  return m;
}

ProcessModel ProcessModel::gauss_digits() {
  ProcessModel m;
  m.kind_ = Kind::gauss_digits;
  return m;
}

Alphabet ProcessModel::alphabet() const {
  switch (kind_) {
    case Kind::iid_finite:
      return Alphabet::finite(static_cast<Symbol>(probs_.size()));
    case Kind::markov:
      return Alphabet::finite(markov_->states());
    case Kind::iid_geometric:
    case Kind::gauss_digits:
      return Alphabet::countable();
  }
  raise(ErrKind::model, "unknown model kind");
}

const MarkovKernel& ProcessModel::markov_kernel() const {
  if (kind_ != Kind::markov)
    raise(ErrKind::unsupported, "operation requires a markov model");
  return *markov_;
}

double ProcessModel::letter_probability(Symbol a) const {
  switch (kind_) {
    case Kind::iid_finite:
      if (a < 0 || a >= static_cast<Symbol>(probs_.size()))
        raise(ErrKind::argument, "symbol outside the finite alphabet");
      return probs_[static_cast<std::size_t>(a)];
    case Kind::iid_geometric:
      if (a < 0) raise(ErrKind::argument, "geometric symbols are nonnegative");
      return geo_p_ * std::pow(1.0 - geo_p_, static_cast<double>(a));
    case Kind::markov:
      if (a < 0 || a >= markov_->states())
        raise(ErrKind::argument, "symbol outside the markov state space");
      return markov_->stationary()(a);
    case Kind::gauss_digits:
      if (a < 1) raise(ErrKind::argument, "continued-fraction digits start at 1");
      return std::log2(1.0 + 1.0 / (static_cast<double>(a) * (static_cast<double>(a) + 2.0)));
  }
  raise(ErrKind::model, "unknown model kind");
}

namespace sampling {

namespace {

Symbol walk_cumulative(const double* probs, Symbol count, double u) {
  double acc = 0.0;
  for (Symbol a = 0; a + 1 < count; ++a) {
    acc += probs[a];
    if (u < acc) return a;
  }
  return count - 1;
}

}  // namespace

Symbol iid_symbol(const ProcessModel& model, std::uint64_t key, Coord coord) {
  const double u = rng::u01_at(key, rng::coord_counter(coord));
  if (model.kind() == ProcessModel::Kind::iid_finite) {
    const auto& p = model.marginals();
    return walk_cumulative(p.data(), static_cast<Symbol>(p.size()), u);
  }
  // Geometric inverse CDF: a = floor(ln(1-u) / ln(1-p)).
  const double p = model.geometric_p();
  return static_cast<Symbol>(std::floor(std::log1p(-u) / std::log1p(-p)));
}

Symbol markov_initial(const MarkovKernel& kernel, double u) {
  return walk_cumulative(kernel.stationary().data(), kernel.states(), u);
}

Symbol markov_forward(const MarkovKernel& kernel, Symbol from, double u) {
  const auto& p = kernel.transition();
  double acc = 0.0;
  for (Symbol b = 0; b + 1 < kernel.states(); ++b) {
    acc += p(from, b);
    if (u < acc) return b;
  }
  return kernel.states() - 1;
}

Symbol markov_backward(const MarkovKernel& kernel, Symbol from, double u) {
  const auto& p = kernel.reversed();
  double acc = 0.0;
  for (Symbol b = 0; b + 1 < kernel.states(); ++b) {
    acc += p(from, b);
    if (u < acc) return b;
  }
  return kernel.states() - 1;
}

}  // namespace sampling

namespace gauss {

void State::advance(Symbol digit) {
  const double d = static_cast<double>(digit);
  log_abs_rs_gap -= std::log((d + r) * (d + s));
  r = 1.0 / (d + r);
  s = 1.0 / (d + s);
}

Symbol digit_from_uniform(const State& st, double u) {
  // Inverse CDF of the tail density 1/((1+rt)(1+st)) on (0,1), then take the
  // integer part of 1/t.  expm1/log1p keep the r ~ s regime accurate.
  const double r = st.r, s = st.s;
  double t;
  if (r == s) {
    t = u * (1.0 + r) / (1.0 + r * (1.0 + u));  // density 1/(1+rt)^2
  } else {
    const double l = std::log1p((s - r) / (1.0 + r));  // ln((1+s)/(1+r))
    const double gm1 = std::expm1(u * l);
    t = gm1 / ((s - r) - r * gm1);
  }
  if (t < 1e-15) t = 1e-15;  // u ~ 0; keeps 1/t inside integer range
  if (t >= 1.0) t = std::nextafter(1.0, 0.0);
  return static_cast<Symbol>(std::floor(1.0 / t));
}

double log_block_probability(const std::vector<Symbol>& digits) {
  State st;
  for (Symbol d : digits) {
    if (d < 1) raise(ErrKind::argument, "continued-fraction digits start at 1");
    st.advance(d);
  }
  // Measure of the fundamental interval: |log2((1+s)/(1+r))|.  When s-r is
  // representable use the exact form; once it underflows switch to the
  // asymptotic ln|s-r| - ln(1+r), whose relative error is below |s-r|.
  const double gap = st.s - st.r;
  const double lnln2 = std::log(std::log(2.0));
  if (std::abs(gap) > 1e-280) {
    return std::log(std::abs(std::log1p(gap / (1.0 + st.r)))) - lnln2;
  }
  return st.log_abs_rs_gap - std::log1p(st.r) - lnln2;
}

}  // namespace gauss

SymbolWindow sample_window(const ProcessModel& model, Sidedness sidedness,
                           Interval range, RngSeed seed) {
  if (sidedness == Sidedness::two_sided && !model.supports_two_sided())
    raise(ErrKind::model, "gauss-digits model is one-sided only");
  if (sidedness == Sidedness::one_sided && range.l != 0)
    raise(ErrKind::argument, "one-sided sampling starts at coordinate 0");
  if (sidedness == Sidedness::two_sided && !(range.l <= 0 && 0 <= range.r))
    raise(ErrKind::argument, "two-sided sampling range must contain 0");

  std::vector<Symbol> symbols(static_cast<std::size_t>(range.length()));

  if (model.is_iid()) {
    const auto key = rng::derive_key(seed, rng::Tag::iid_symbol);
    for (Coord i = range.l; i <= range.r; ++i)
      symbols[static_cast<std::size_t>(i - range.l)] =
          sampling::iid_symbol(model, key, i);
  } else if (model.kind() == ProcessModel::Kind::markov) {
    const auto& kernel = model.markov_kernel();
    const auto init_key = rng::derive_key(seed, rng::Tag::chain_init);
    const auto fwd_key = rng::derive_key(seed, rng::Tag::chain_forward);
    const auto bwd_key = rng::derive_key(seed, rng::Tag::chain_backward);
    Symbol origin = sampling::markov_initial(kernel, rng::u01_at(init_key, 0));
    auto put = [&](Coord i, Symbol v) {
      if (range.contains(i)) symbols[static_cast<std::size_t>(i - range.l)] = v;
    };
    put(0, origin);
    Symbol cur = origin;
    for (Coord i = 1; i <= range.r; ++i) {
      cur = sampling::markov_forward(kernel, cur,
                                     rng::u01_at(fwd_key, static_cast<std::uint64_t>(i)));
      put(i, cur);
    }
    cur = origin;
    for (Coord i = -1; i >= range.l; --i) {
      cur = sampling::markov_backward(kernel, cur,
                                      rng::u01_at(bwd_key, static_cast<std::uint64_t>(-i)));
      put(i, cur);
    }
  } else {  // gauss digits, one-sided
    const auto key = rng::derive_key(seed, rng::Tag::gauss_digit);
    gauss::State st;
    for (Coord i = 0; i <= range.r; ++i) {
      const Symbol d = gauss::digit_from_uniform(
          st, rng::u01_at(key, static_cast<std::uint64_t>(i)));
      symbols[static_cast<std::size_t>(i)] = d;
      st.advance(d);
    }
  }

  return SymbolWindow(sidedness, range, std::move(symbols));
}

namespace {

double markov_block_log_probability(const MarkovKernel& kernel,
                                    const std::vector<Symbol>& syms) {
  for (Symbol a : syms)
    if (a < 0 || a >= kernel.states())
      raise(ErrKind::argument, "symbol outside the markov state space");
  double lp = std::log(kernel.stationary()(syms.front()));
  for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
    const double step = kernel.transition()(syms[i], syms[i + 1]);
    if (step == 0.0) return -std::numeric_limits<double>::infinity();
    lp += std::log(step);
  }
  return lp;
}

}  // namespace

double log_cylinder_probability(const ProcessModel& model, const Cylinder& cyl) {
  switch (model.kind()) {
    case ProcessModel::Kind::iid_finite:
    case ProcessModel::Kind::iid_geometric: {
      double lp = 0.0;
      for (Symbol a : cyl.symbols) lp += std::log(model.letter_probability(a));
      return lp;
    }
    case ProcessModel::Kind::markov:
      return markov_block_log_probability(model.markov_kernel(), cyl.symbols);
    case ProcessModel::Kind::gauss_digits:
      if (cyl.interval.l < 0)
        raise(ErrKind::argument, "gauss-digits cylinders live on nonnegative coordinates");
      // Stationarity: any contiguous digit block has the law of a prefix.
      return gauss::log_block_probability(cyl.symbols);
  }
  raise(ErrKind::model, "unknown model kind");
}

double cylinder_probability(const ProcessModel& model, const Cylinder& cyl) {
  return std::exp(log_cylinder_probability(model, cyl));
}

double joint_cylinder_probability(
    const ProcessModel& model,
    const std::vector<std::pair<Coord, Symbol>>& constraints) {
  if (constraints.empty()) return 1.0;

  auto sorted = constraints;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<Coord, Symbol>> merged;
  merged.reserve(sorted.size());
  for (const auto& [c, s] : sorted) {
    if (!merged.empty() && merged.back().first == c) {
      if (merged.back().second != s) return 0.0;  // conflicting constraints
      continue;
    }
    merged.push_back({c, s});
  }

  switch (model.kind()) {
    case ProcessModel::Kind::iid_finite:
    case ProcessModel::Kind::iid_geometric: {
      double p = 1.0;
      for (const auto& [c, s] : merged) p *= model.letter_probability(s);
      return p;
    }
    case ProcessModel::Kind::markov: {
      const auto& kernel = model.markov_kernel();
      for (const auto& [c, s] : merged)
        if (s < 0 || s >= kernel.states())
          raise(ErrKind::argument, "symbol outside the markov state space");
      double p = kernel.stationary()(merged.front().second);
      for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const auto gap = static_cast<std::uint64_t>(merged[i + 1].first - merged[i].first);
        if (gap == 1) {
          p *= kernel.transition()(merged[i].second, merged[i + 1].second);
        } else {
          p *= kernel.power(gap)(merged[i].second, merged[i + 1].second);
        }
      }
      return p;
    }
    case ProcessModel::Kind::gauss_digits: {
      for (std::size_t i = 0; i + 1 < merged.size(); ++i)
        if (merged[i + 1].first != merged[i].first + 1)
          raise(ErrKind::unsupported,
                "gauss-digits joint probabilities support contiguous blocks only");
      if (merged.front().first < 0)
        raise(ErrKind::argument, "gauss-digits constraints live on nonnegative coordinates");
      std::vector<Symbol> digits;
      digits.reserve(merged.size());
      for (const auto& [c, s] : merged) digits.push_back(s);
      return std::exp(gauss::log_block_probability(digits));
    }
  }
  raise(ErrKind::model, "unknown model kind");
}

double phi_exact(const ProcessModel& model, int k) {
  if (k < 1) raise(ErrKind::argument, "mixing coefficients need k >= 1");
  if (model.is_iid()) return 0.0;
  if (model.kind() != ProcessModel::Kind::markov)
    raise(ErrKind::unsupported,
          "phi_exact supports iid and markov models only; use the oracle");
  const auto& kernel = model.markov_kernel();
  const Eigen::MatrixXd pk = kernel.power(static_cast<std::uint64_t>(k));
  double worst = 0.0;
  for (int a = 0; a < kernel.states(); ++a) {
    double tv = 0.0;
    for (int b = 0; b < kernel.states(); ++b)
      tv += std::abs(pk(a, b) - kernel.stationary()(b));
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

double psi_exact(const ProcessModel& model, int k) {
  if (k < 1) raise(ErrKind::argument, "mixing coefficients need k >= 1");
  if (model.is_iid()) return 0.0;
  if (model.kind() != ProcessModel::Kind::markov)
    raise(ErrKind::unsupported,
          "psi_exact supports iid and markov models only; use the oracle");
  const auto& kernel = model.markov_kernel();
  const Eigen::MatrixXd pk = kernel.power(static_cast<std::uint64_t>(k));
  double worst = 0.0;
  for (int a = 0; a < kernel.states(); ++a)
    for (int b = 0; b < kernel.states(); ++b)
      worst = std::max(worst,
                       std::abs(pk(a, b) / kernel.stationary()(b) - 1.0));
  return worst;
}

namespace {

// Path probability of a fully contiguous word starting anywhere (stationary).
double word_probability(const ProcessModel& model, const std::vector<Symbol>& w) {
  if (model.is_iid()) {
    double p = 1.0;
    for (Symbol a : w) p *= model.letter_probability(a);
    return p;
  }
  const auto& kernel = model.markov_kernel();
  double p = kernel.stationary()(w.front());
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    p *= kernel.transition()(w[i], w[i + 1]);
  return p;
}

bool next_word(std::vector<Symbol>& w, Symbol base) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (++(*it) < base) return true;
    *it = 0;
  }
  return false;
}

}  // namespace

double mixing_oracle_bruteforce(const ProcessModel& model, MixingKind kind,
                                int k, int max_len) {
  if (k < 1) raise(ErrKind::argument, "mixing coefficients need k >= 1");
  if (max_len < 1) raise(ErrKind::argument, "max_len must be >= 1");
  const Alphabet ab = model.alphabet();
  if (ab.kind != Alphabet::Kind::finite)
    raise(ErrKind::unsupported, "the brute-force oracle needs a finite alphabet");
  const Symbol s = ab.size;

  // The joint of a past word A (ending at 0) and a future word B (starting at
  // k) is summed over all fill-in words on coordinates 1..k-1, using only
  // single-step path probabilities.
  const double paths =
      std::pow(static_cast<double>(s), 2.0 * max_len + static_cast<double>(k) - 1.0);
  if (paths > 1e8)
    raise(ErrKind::resource, "mixing oracle enumeration would exceed 1e8 paths");

  const int gap = k - 1;
  double worst = 0.0;
  for (int la = 1; la <= max_len; ++la) {
    for (int lb = 1; lb <= max_len; ++lb) {
      std::vector<Symbol> a(static_cast<std::size_t>(la), 0);
      do {
        const double pa = word_probability(model, a);
        if (pa == 0.0) continue;
        std::vector<Symbol> b(static_cast<std::size_t>(lb), 0);
        do {
          const double pb = word_probability(model, b);
          if (pb == 0.0) continue;
          double pab = 0.0;
          std::vector<Symbol> fill(static_cast<std::size_t>(gap), 0);
          std::vector<Symbol> whole;
          whole.reserve(a.size() + fill.size() + b.size());
          do {
            whole.assign(a.begin(), a.end());
            whole.insert(whole.end(), fill.begin(), fill.end());
            whole.insert(whole.end(), b.begin(), b.end());
            pab += word_probability(model, whole);
          } while (gap > 0 && next_word(fill, s));
          const double score = kind == MixingKind::phi
                                   ? std::abs(pab / pa - pb)
                                   : std::abs(pab / (pa * pb) - 1.0);
          worst = std::max(worst, score);
        } while (next_word(b, s));
      } while (next_word(a, s));
    }
  }
  return worst;
}

MixingProfile::MixingProfile(MixingKind kind, Provenance prov,
                             std::vector<std::pair<int, double>> vals)
    : kind(kind), provenance(prov), values(std::move(vals)) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : values) {
    if (v < 0.0) raise(ErrKind::invariant, "mixing coefficient below 0");
    if (kind == MixingKind::phi && v > 1.0 + 1e-12)
      raise(ErrKind::invariant, "phi coefficient above 1");
    if (v > prev + 1e-12)
      raise(ErrKind::invariant,
            "mixing coefficients must be non-increasing in the gap");
    prev = v;
  }
}

MixingProfile make_mixing_profile(const ProcessModel& model, MixingKind kind,
                                  int k_max) {
  std::vector<std::pair<int, double>> vals;
  vals.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k)
    vals.emplace_back(k, kind == MixingKind::phi ? phi_exact(model, k)
                                                 : psi_exact(model, k));
  return MixingProfile(kind, MixingProfile::Provenance::exact_formula,
                       std::move(vals));
}

}  // namespace shiftbc
