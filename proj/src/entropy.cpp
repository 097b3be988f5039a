#include "shiftbc/entropy.hpp"

#include <cmath>

namespace shiftbc {

double entropy_exact(const ProcessModel& model) {
  switch (model.kind()) {
    case ProcessModel::Kind::iid_finite: {
      double h = 0.0;
      for (double p : model.marginals()) h -= p * std::log(p);
      return h;
    }
    case ProcessModel::Kind::iid_geometric: {
      const double p = model.geometric_p();
      return -std::log(p) - (1.0 - p) / p * std::log1p(-p);
    }
    case ProcessModel::Kind::markov: {
      const auto& kernel = model.markov_kernel();
      double h = 0.0;
      for (int a = 0; a < kernel.states(); ++a) {
        double row = 0.0;
        for (int b = 0; b < kernel.states(); ++b) {
          const double p = kernel.transition()(a, b);
          if (p > 0.0) row -= p * std::log(p);
        }
        h += kernel.stationary()(a) * row;
      }
      return h;
    }
    case ProcessModel::Kind::gauss_digits:
      raise(ErrKind::unsupported,
            "gauss-digits entropy has no closed form here; use entropy_smb");
  }
  raise(ErrKind::model, "unknown model kind");
}

double EntropyReport::mean() const {
  if (samples.empty()) raise(ErrKind::insufficient, "entropy report has no samples");
  double m = 0.0;
  for (const auto& s : samples) m += s.estimate;
  return m / static_cast<double>(samples.size());
}

EntropyReport entropy_smb(const ProcessModel& model, Sidedness sidedness,
                          long long radius, int seeds, RngSeed base) {
  if (radius < 1) raise(ErrKind::argument, "entropy_smb needs radius >= 1");
  if (seeds < 1) raise(ErrKind::argument, "entropy_smb needs at least one seed");
  if (sidedness == Sidedness::two_sided && !model.supports_two_sided())
    raise(ErrKind::model, "gauss-digits model is one-sided only");

  EntropyReport report;
  report.divisor_mode = sidedness;
  try {
    report.exact_h = entropy_exact(model);
  } catch (const Error&) {
    report.exact_h.reset();
  }

  const Interval range = sidedness == Sidedness::two_sided
                             ? Interval{-radius, radius}
                             : Interval{0, radius};
  const double divisor = sidedness == Sidedness::two_sided
                             ? 2.0 * static_cast<double>(radius)
                             : static_cast<double>(radius);
  report.samples.reserve(static_cast<std::size_t>(seeds));
  for (int s = 0; s < seeds; ++s) {
    const RngSeed seed{base.seed, base.stream + static_cast<std::uint32_t>(s)};
    const SymbolWindow target = sample_window(model, sidedness, range, seed);
    const Cylinder cyl(range, target.symbols());
    const double logp = log_cylinder_probability(model, cyl);
    if (!(logp < 0.0) || std::isinf(logp))
      raise(ErrKind::invariant,
            "sampled cylinder has an impossible probability; kernels must be positive");
    report.samples.push_back({radius, -logp / divisor, seed.stream});
  }
  return report;
}

}  // namespace shiftbc
