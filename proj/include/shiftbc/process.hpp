#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shiftbc/rng.hpp"
#include "shiftbc/symbolic.hpp"

namespace shiftbc {

// Finite-state Markov shift with stationary start.  Matrix powers are cached
// (repeated squaring) because joint probabilities ask for the same gaps over
// and over.  The cache is the only mutable state and is mutex-guarded so a
// kernel can be shared across replicate workers.
class MarkovKernel {
 public:
  explicit MarkovKernel(Eigen::MatrixXd transition);

  int states() const { return static_cast<int>(transition_.rows()); }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }
  // Time-reversed kernel rev(a,b) = pi_b P(b,a) / pi_a; the unique backward
  // extension that keeps two-sided windows stationary.
  const Eigen::MatrixXd& reversed() const { return reversed_; }

  // P^k for k >= 0 (k = 0 gives the identity).
  Eigen::MatrixXd power(std::uint64_t k) const;

 private:
  Eigen::MatrixXd transition_;
  Eigen::VectorXd stationary_;
  Eigen::MatrixXd reversed_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, Eigen::MatrixXd> power_cache_;
};

// pi with pi P = pi, sum 1, residual <= 1e-12.  Rejects matrices that are not
// row-stochastic or not primitive (irreducible + aperiodic).
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& transition);

// A stationary shift-invariant law with exact probability kernels.
class ProcessModel {
 public:
  enum class Kind { iid_finite, iid_geometric, markov, gauss_digits };

  static ProcessModel iid_finite(std::vector<double> probabilities);
  static ProcessModel iid_geometric(double success_p);
  static ProcessModel markov(const std::vector<std::vector<double>>& transition);
  static ProcessModel gauss_digits();

  Kind kind() const { return kind_; }
  bool is_iid() const {
    return kind_ == Kind::iid_finite || kind_ == Kind::iid_geometric;
  }
  bool supports_two_sided() const { return kind_ != Kind::gauss_digits; }
  Alphabet alphabet() const;

  const std::vector<double>& marginals() const { return probs_; }
  double geometric_p() const { return geo_p_; }
  const MarkovKernel& markov_kernel() const;

  // P([a]) for a single letter.
  double letter_probability(Symbol a) const;

 private:
  ProcessModel() = default;

  Kind kind_ = Kind::iid_finite;
  std::vector<double> probs_;
  double geo_p_ = 0.0;
  std::shared_ptr<const MarkovKernel> markov_;
};

// Stationary sampling of a window of coordinates.  Symbols are a pure
// function of (model, seed, coordinate): windows of different ranges drawn
// with the same seed agree on their overlap.
SymbolWindow sample_window(const ProcessModel& model, Sidedness sidedness,
                           Interval range, RngSeed seed);

// Exact stationary probability of a cylinder.  Gauss digits support any
// contiguous block (stationarity reduces it to a prefix of digits).
double cylinder_probability(const ProcessModel& model, const Cylinder& cyl);

// ln P(C) in nats, exact and stable for cylinders far too long for the plain
// probability to be representable.
double log_cylinder_probability(const ProcessModel& model, const Cylinder& cyl);

// Exact probability that all (coordinate, symbol) constraints hold at once.
// Conflicting constraints at one coordinate give 0.  Gauss digits support
// contiguous constraint blocks only.
double joint_cylinder_probability(
    const ProcessModel& model,
    const std::vector<std::pair<Coord, Symbol>>& constraints);

// Mixing coefficients.  iid models are exactly 0; Markov models use the
// conditional total-variation / ratio forms validated in-repo against the
// brute-force supremum oracle.
double phi_exact(const ProcessModel& model, int k);
double psi_exact(const ProcessModel& model, int k);

enum class MixingKind { phi, psi };

// Supremum of the dependence coefficient over pairs of cylinder events with
// block lengths <= max_len separated by gap k.  Joint probabilities are
// computed by enumerating the gap fill-in words, independent of the
// matrix-power path used by the exact formulas.  Returns a lower bound on the
// true coefficient; for 2-state Markov chains (and for psi on any finite
// chain) the bound is tight.
double mixing_oracle_bruteforce(const ProcessModel& model, MixingKind kind,
                                int k, int max_len);

struct MixingProfile {
  MixingKind kind;
  enum class Provenance { exact_formula, brute_force_oracle };
  Provenance provenance;
  std::vector<std::pair<int, double>> values;  // (k, coefficient), k ascending

  MixingProfile(MixingKind kind, Provenance prov,
                std::vector<std::pair<int, double>> vals);
};

MixingProfile make_mixing_profile(const ProcessModel& model, MixingKind kind,
                                  int k_max);

// Per-coordinate sampling primitives shared by sample_window and the lazy
// trajectories.  Each consumes exactly one addressed uniform, so the symbol
// at a coordinate does not depend on which other coordinates were realized.
namespace sampling {

Symbol iid_symbol(const ProcessModel& model, std::uint64_t key, Coord coord);
Symbol markov_initial(const MarkovKernel& kernel, double u);
Symbol markov_forward(const MarkovKernel& kernel, Symbol from, double u);
Symbol markov_backward(const MarkovKernel& kernel, Symbol from, double u);

}  // namespace sampling

namespace gauss {

// Conditional state of the continued-fraction digit process after a block of
// digits: r = q_{n-1}/q_n and s = (q_{n-1}+p_{n-1})/(q_n+p_n) in terms of the
// convergents.  The conditional density of the tail t in (0,1) is
// proportional to 1/((1+rt)(1+st)); the next digit is floor(1/t).  Both the
// exact sampler and the exact cylinder measure run on this O(1) state.
struct State {
  double r = 0.0;
  double s = 1.0;
  double log_abs_rs_gap = 0.0;  // ln |s - r|, tracked for deep cylinders

  void advance(Symbol digit);
};

Symbol digit_from_uniform(const State& st, double u);

// ln of the Gauss measure of the fundamental interval of a digit block.
double log_block_probability(const std::vector<Symbol>& digits);

}  // namespace gauss

}  // namespace shiftbc
