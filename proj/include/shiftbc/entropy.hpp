#pragma once

#include <optional>
#include <vector>

#include "shiftbc/process.hpp"

namespace shiftbc {

// Kolmogorov-Sinai entropy of the shift, in nats.  Closed form for iid and
// markov models; unsupported for gauss digits (use entropy_smb there, with
// the quadrature reference value living in the test suite).
double entropy_exact(const ProcessModel& model);

struct EntropyReport {
  std::optional<double> exact_h;
  Sidedness divisor_mode = Sidedness::two_sided;  // divisor 2r vs r
  struct Sample {
    long long radius;
    double estimate;  // -(1/divisor) ln P(C_radius(target))
    std::uint32_t stream;
  };
  std::vector<Sample> samples;

  double mean() const;
};

// Empirical entropy via cylinder probabilities around freshly sampled
// targets: estimate = -ln P(C_r(target)) / (2r), divisor r when one-sided.
EntropyReport entropy_smb(const ProcessModel& model, Sidedness sidedness,
                          long long radius, int seeds, RngSeed base);

}  // namespace shiftbc
