#include "shiftbc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include "shiftbc/engine.hpp"
#include "shiftbc/entropy.hpp"
#include "shiftbc/hitting.hpp"
#include "shiftbc/maxlog.hpp"
#include "shiftbc/parallel.hpp"
#include "shiftbc/version.hpp"

namespace shiftbc {

namespace fs = std::filesystem;
using nlohmann::json;

RngSeed role_seed(std::uint64_t base_seed, std::uint32_t stream,
                  std::uint64_t role) {
  return RngSeed{rng::mix64(base_seed ^ rng::mix64(role + 0x8F1B5A5D1C2E3F47ULL)),
                 stream};
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json base_summary(const std::string& command, const ExperimentConfig& cfg) {
  return json{{"command", command},
              {"version", kVersion},
              {"config_hash", config_hash(cfg)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrKind::argument, "cannot open " + path.string() + " for writing");
  out << text;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// Row data can be emitted as CSV or as a JSON array of objects.
class RowWriter {
 public:
  RowWriter(std::string format, std::vector<std::string> columns)
      : json_(format == "json"), columns_(std::move(columns)) {
    if (format != "csv" && format != "json")
      raise(ErrKind::argument, "format must be 'csv' or 'json'");
  }

  void row(const std::vector<std::string>& values) {
    rows_.push_back(values);
  }

  std::string finish() const {
    if (!json_) {
      std::string out;
      for (std::size_t c = 0; c < columns_.size(); ++c)
        out += (c ? "," : "") + columns_[c];
      out += "\n";
      for (const auto& r : rows_) {
        for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + r[c];
        out += "\n";
      }
      return out;
    }
    json arr = json::array();
    for (const auto& r : rows_) {
      json obj;
      for (std::size_t c = 0; c < r.size(); ++c) obj[columns_[c]] = r[c];
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }

  const char* extension() const { return json_ ? "json" : "csv"; }

 private:
  bool json_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void require_assumptions(const IndexFamily& family, long long horizon) {
  const auto rep_i = check_assumption_i(family, horizon);
  if (!rep_i.pass)
    raise(ErrKind::argument,
          "index family fails Assumption (i): " + rep_i.witness);
  const auto rep_ii = check_assumption_ii(family, horizon);
  if (!rep_ii.pass)
    raise(ErrKind::argument,
          "index family fails Assumption (ii): " + rep_ii.witness);
}

double median(std::vector<double> v) {
  if (v.empty()) raise(ErrKind::insufficient, "median of an empty set");
  std::sort(v.begin(), v.end());
  const auto k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

struct CommandContext {
  const ExperimentConfig& cfg;
  fs::path out;
  bool complete = false;
};

// ---------------------------------------------------------------- mix ----

void run_mix(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProcessModel model = model_from_config(cfg);
  if (cfg.k_max < 1) raise(ErrKind::argument, "mix needs k_max >= 1");

  RowWriter rows(cfg.format, {"kind", "k", "value", "provenance"});
  json sums;
  for (const MixingKind kind : {MixingKind::phi, MixingKind::psi}) {
    const char* name = kind == MixingKind::phi ? "phi" : "psi";
    const MixingProfile profile = make_mixing_profile(model, kind, cfg.k_max);
    double sum = 0.0;
    for (const auto& [k, v] : profile.values) {
      rows.row({name, std::to_string(k), fmt(v), "exact-formula"});
      sum += v;
    }
    sums[std::string(name) + "_partial_sum"] = sum;
    if (cfg.oracle_max_len > 0) {
      for (const auto& [k, v] : profile.values) {
        const double ov = mixing_oracle_bruteforce(model, kind, k, cfg.oracle_max_len);
        rows.row({name, std::to_string(k), fmt(ov), "brute-force-oracle"});
        (void)v;
      }
    }
  }

  write_text(ctx.out / (std::string("mixing.") + rows.extension()), rows.finish());
  json summary = base_summary("mix", cfg);
  summary["k_max"] = cfg.k_max;
  summary["partial_sums"] = sums;
  write_json(ctx.out / "summary.json", summary);
  ctx.complete = true;
}

// ------------------------------------------------------------- check-q ----

void run_checkq(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const IndexFamily family = family_from_config(cfg);
  const long long horizon = std::max<long long>(cfg.n_max, 1);

  const auto rep_i = check_assumption_i(family, horizon);
  const auto rep_ii = check_assumption_ii(family, horizon);

  auto to_json = [](const AssumptionReport& r) {
    return json{{"pass", r.pass},
                {"bound", r.bound},
                {"horizon", r.horizon},
                {"certified", r.certified},
                {"witness", r.witness}};
  };
  json summary = base_summary("check-q", cfg);
  summary["assumption_i"] = to_json(rep_i);
  summary["assumption_ii"] = to_json(rep_ii);
  summary["pass"] = rep_i.pass && rep_ii.pass;
  write_json(ctx.out / "assumption_report.json", summary);
  ctx.complete = true;

  if (!rep_i.pass)
    raise(ErrKind::argument, "Assumption (i) fails: " + rep_i.witness);
  if (!rep_ii.pass)
    raise(ErrKind::argument, "Assumption (ii) fails: " + rep_ii.witness);
}

// -------------------------------------------------------------- bc-run ----

struct BcReplicateOutput {
  std::vector<CheckpointRow> rows;
  double violation_fraction = 0.0;
};

void run_bcrun(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProcessModel model = model_from_config(cfg);
  const IndexFamily family = family_from_config(cfg);
  const Sidedness sided = sidedness_from_config(cfg);
  if (cfg.n_max < 1) raise(ErrKind::argument, "bc-run needs N >= 1");
  if (cfg.replicates < 1) raise(ErrKind::argument, "bc-run needs replicates >= 1");
  require_assumptions(family, cfg.n_max);

  const auto checkpoints = geometric_checkpoints(cfg.n_max);
  const ExecMode mode = exec_mode_from_name(cfg.exec);
  const bool events = cfg.setup == "events";
  if (!events && cfg.setup != "shift")
    raise(ErrKind::argument, "setup must be 'shift' or 'events'");

  std::vector<BcReplicateOutput> outputs(static_cast<std::size_t>(cfg.replicates));
  for_each_replicate(cfg.replicates, mode, [&](long long rep) {
    const auto stream = static_cast<std::uint32_t>(rep);
    Trajectory traj = Trajectory::from_model(model, sided,
                                             role_seed(cfg.seed, stream, 0),
                                             cfg.max_resident);
    auto& out = outputs[static_cast<std::size_t>(rep)];

    if (events) {
      // Events setup: Gamma_j = {omega_j = event_symbol}, indicators read off
      // the sampled trajectory at the realized indices.
      std::unordered_map<long long, bool> indicators;
      for (long long n = 1; n <= cfg.n_max; ++n)
        for (int i = 0; i < family.ell(); ++i) {
          const long long j = family.evaluate_i64(i, n);
          traj.ensure(j, j);
          indicators.emplace(j, traj.symbol(j) == cfg.event_symbol);
        }
      const double p = model.letter_probability(cfg.event_symbol);
      const double term = std::pow(p, family.ell());
      long long s = 0;
      std::size_t cp = 0;
      for (long long n = 1; n <= cfg.n_max; ++n) {
        bool all = true;
        for (int i = 0; i < family.ell() && all; ++i)
          all = indicators.at(family.evaluate_i64(i, n));
        if (all) ++s;
        if (cp < checkpoints.size() && checkpoints[cp] == n) {
          out.rows.push_back({n, s, term * static_cast<double>(n)});
          ++cp;
        }
      }
      ConvergenceReport rep_view;
      rep_view.rows = out.rows;
      out.violation_fraction = envelope_check(rep_view, cfg.envelope_c, cfg.epsilon);
      return;
    }

    CylinderSchedule schedule = [&] {
      if (cfg.schedule_kind == "fixed-cylinder") {
        const Cylinder cyl(Interval{cfg.cylinder_l, cfg.cylinder_r},
                           std::vector<Symbol>(cfg.cylinder_symbols.begin(),
                                               cfg.cylinder_symbols.end()));
        return CylinderSchedule::fixed(
            std::vector<Cylinder>(static_cast<std::size_t>(family.ell()), cyl));
      }
      if (cfg.schedule_kind != "radius-schedule")
        raise(ErrKind::argument,
              "schedule kind must be 'fixed-cylinder' or 'radius-schedule'");
      const long long hw = std::max<long long>(
          cfg.target_halfwidth,
          static_cast<long long>(cfg.beta * std::log(static_cast<double>(cfg.n_max))) + 2);
      const Interval range =
          sided == Sidedness::two_sided ? Interval{-hw, hw} : Interval{0, hw};
      std::vector<SymbolWindow> targets;
      targets.reserve(static_cast<std::size_t>(family.ell()));
      for (int i = 0; i < family.ell(); ++i)
        targets.push_back(sample_window(
            model, sided, range,
            role_seed(cfg.seed, stream, 1 + static_cast<std::uint64_t>(i))));
      return CylinderSchedule::radius(cfg.beta, std::move(targets));
    }();

    const ConvergenceReport report =
        bc_shift_run(model, schedule, family, traj, cfg.n_max, checkpoints,
                     cfg.epsilon, cfg.envelope_c, RngSeed{cfg.seed, stream});
    out.rows = report.rows;
    out.violation_fraction = envelope_check(report, cfg.envelope_c, cfg.epsilon);
  });

  RowWriter rows(cfg.format, {"N", "S_N", "E_N", "ratio", "gap", "envelope_ref",
                              "seed", "stream"});
  json finals = json::array();
  const double e_floor = std::exp(1.0);
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    const auto& out = outputs[static_cast<std::size_t>(rep)];
    for (const auto& row : out.rows) {
      const double ratio = row.e > 0.0 ? static_cast<double>(row.s) / row.e : 0.0;
      const double gap = std::abs(static_cast<double>(row.s) - row.e);
      const std::string env_ref =
          row.e > e_floor
              ? fmt(std::sqrt(row.e) *
                    std::pow(std::log(row.e), 1.5 + cfg.epsilon))
              : "";
      rows.row({std::to_string(row.n), std::to_string(row.s), fmt(row.e),
                fmt(ratio), fmt(gap), env_ref, std::to_string(cfg.seed),
                std::to_string(rep)});
    }
    const auto& last = out.rows.back();
    finals.push_back(json{{"stream", rep},
                          {"S", last.s},
                          {"E", last.e},
                          {"ratio", last.e > 0.0
                                        ? static_cast<double>(last.s) / last.e
                                        : 0.0},
                          {"envelope_violation_fraction", out.violation_fraction}});
  }

  write_text(ctx.out / (std::string("bc_run.") + rows.extension()), rows.finish());
  json summary = base_summary("bc-run", cfg);
  summary["N"] = cfg.n_max;
  summary["replicates"] = cfg.replicates;
  summary["setup"] = cfg.setup;
  summary["finals"] = finals;
  write_json(ctx.out / "summary.json", summary);
  ctx.complete = true;
}

// ------------------------------------------------------------- entropy ----

void run_entropy(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProcessModel model = model_from_config(cfg);
  const Sidedness sided = sidedness_from_config(cfg);

  const EntropyReport report = entropy_smb(model, sided, cfg.smb_radius,
                                           cfg.replicates, RngSeed{cfg.seed, 0});

  RowWriter rows(cfg.format, {"radius", "estimate", "seed", "stream"});
  for (const auto& s : report.samples)
    rows.row({std::to_string(s.radius), fmt(s.estimate), std::to_string(cfg.seed),
              std::to_string(s.stream)});
  write_text(ctx.out / (std::string("entropy.") + rows.extension()), rows.finish());

  json summary = base_summary("entropy", cfg);
  summary["divisor_mode"] =
      report.divisor_mode == Sidedness::two_sided ? "two-sided" : "one-sided";
  summary["radius"] = cfg.smb_radius;
  summary["samples"] = report.samples.size();
  summary["smb_mean"] = report.mean();
  if (report.exact_h)
    summary["exact_h"] = *report.exact_h;
  else
    summary["exact_h"] = nullptr;
  write_json(ctx.out / "summary.json", summary);
  ctx.complete = true;
}

// -------------------------------------------------------------- maxlog ----

void run_maxlog(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProcessModel model = model_from_config(cfg);
  const IndexFamily family = family_from_config(cfg);
  const Sidedness sided = sidedness_from_config(cfg);
  if (cfg.replicates < 1) raise(ErrKind::argument, "maxlog needs replicates >= 1");
  require_assumptions(family, cfg.n_max);

  const auto checkpoints = geometric_checkpoints(cfg.n_max);
  const DistanceParams params(cfg.gamma);
  const ExecMode mode = exec_mode_from_name(cfg.exec);
  const Interval target_range = sided == Sidedness::two_sided
                                    ? Interval{-cfg.target_halfwidth, cfg.target_halfwidth}
                                    : Interval{0, cfg.target_halfwidth};

  std::vector<std::vector<std::pair<long long, double>>> traces(
      static_cast<std::size_t>(cfg.replicates));
  for_each_replicate(cfg.replicates, mode, [&](long long rep) {
    const auto stream = static_cast<std::uint32_t>(rep);
    Trajectory traj = Trajectory::from_model(model, sided,
                                             role_seed(cfg.seed, stream, 0),
                                             cfg.max_resident);
    std::vector<SymbolWindow> targets;
    targets.reserve(static_cast<std::size_t>(family.ell()));
    for (int i = 0; i < family.ell(); ++i)
      targets.push_back(sample_window(
          model, sided, target_range,
          role_seed(cfg.seed, stream, 1 + static_cast<std::uint64_t>(i))));
    traces[static_cast<std::size_t>(rep)] =
        max_log_distance(traj, targets, family, cfg.n_max, params, checkpoints);
  });

  RowWriter rows(cfg.format, {"N", "M_N", "M_over_lnN", "seed", "stream"});
  std::vector<double> finals;
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    for (const auto& [n, m] : traces[static_cast<std::size_t>(rep)]) {
      const double over = n > 1 ? m / std::log(static_cast<double>(n)) : 0.0;
      rows.row({std::to_string(n), fmt(m), fmt(over), std::to_string(cfg.seed),
                std::to_string(rep)});
    }
    const auto& [n, m] = traces[static_cast<std::size_t>(rep)].back();
    finals.push_back(m / std::log(static_cast<double>(n)));
  }
  write_text(ctx.out / (std::string("maxlog.") + rows.extension()), rows.finish());

  json summary = base_summary("maxlog", cfg);
  summary["N"] = cfg.n_max;
  summary["replicates"] = cfg.replicates;
  summary["gamma"] = cfg.gamma;
  summary["median_final_ratio"] = median(finals);
  try {
    const double h = entropy_exact(model);
    const double sides = sided == Sidedness::two_sided ? 2.0 : 1.0;
    summary["limit"] = cfg.gamma / (sides * family.ell() * h);
  } catch (const Error&) {
    summary["limit"] = nullptr;
  }
  write_json(ctx.out / "summary.json", summary);
  ctx.complete = true;
}

// ----------------------------------------------------------------- hit ----

void run_hit(CommandContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ProcessModel model = model_from_config(cfg);
  const IndexFamily family = family_from_config(cfg);
  const Sidedness sided = sidedness_from_config(cfg);
  if (cfg.radii.empty()) raise(ErrKind::argument, "hit needs a list of radii");
  if (cfg.replicates < 1) raise(ErrKind::argument, "hit needs replicates >= 1");
  require_assumptions(family, cfg.cap);

  const ExecMode mode = exec_mode_from_name(cfg.exec);
  const auto n_radii = cfg.radii.size();
  std::vector<HittingTimeRecord> records(
      n_radii * static_cast<std::size_t>(cfg.replicates));

  for_each_replicate(static_cast<long long>(records.size()), mode, [&](long long idx) {
    const auto radius_idx = static_cast<std::size_t>(idx) / static_cast<std::size_t>(cfg.replicates);
    const auto rep = static_cast<std::uint32_t>(
        static_cast<std::size_t>(idx) % static_cast<std::size_t>(cfg.replicates));
    const long long radius = cfg.radii[radius_idx];
    const RngSeed omega_seed =
        role_seed(cfg.seed, rep, 2 * static_cast<std::uint64_t>(radius));
    const RngSeed target_seed =
        role_seed(cfg.seed, rep, 2 * static_cast<std::uint64_t>(radius) + 1);
    Trajectory omega =
        Trajectory::from_model(model, sided, omega_seed, cfg.max_resident);
    const Interval range = sided == Sidedness::two_sided ? Interval{-radius, radius}
                                                         : Interval{0, radius};
    const SymbolWindow target = sample_window(model, sided, range, target_seed);
    records[static_cast<std::size_t>(idx)] = hitting_time(
        omega, target, family, radius, cfg.cap, omega_seed, target_seed);
  });

  RowWriter rows(cfg.format,
                 {"n", "tau", "censored", "seed", "stream_omega", "stream_target"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    rows.row({std::to_string(r.radius), std::to_string(r.tau),
              r.censored ? "1" : "0", std::to_string(cfg.seed),
              std::to_string(r.omega_seed.stream),
              std::to_string(r.target_seed.stream)});
  }
  write_text(ctx.out / (std::string("hits.") + rows.extension()), rows.finish());

  const ExponentFit fit = exponent_fit(records);
  json summary = base_summary("hit", cfg);
  summary["slope"] = fit.slope;
  summary["stderr"] = fit.slope_stderr;
  summary["radii"] = fit.radii;
  summary["mean_log_tau"] = fit.mean_log_tau;
  summary["uncensored"] = fit.uncensored;
  summary["censored_total"] = fit.censored_total;
  summary["cap"] = cfg.cap;
  try {
    const double h = entropy_exact(model);
    const double sides = sided == Sidedness::two_sided ? 2.0 : 1.0;
    summary["target"] = sides * family.ell() * h;
  } catch (const Error&) {
    summary["target"] = nullptr;
  }
  write_json(ctx.out / "fit.json", summary);
  ctx.complete = true;
}

}  // namespace

void run_command_or_throw(const std::string& command, const ExperimentConfig& cfg) {
  CommandContext ctx{cfg, fs::path(cfg.out_dir), false};
  fs::create_directories(ctx.out);
  // A fresh run invalidates any failure marker from a previous attempt.
  fs::remove(ctx.out / "FAILED");

  try {
    if (command == "mix") run_mix(ctx);
    else if (command == "check-q") run_checkq(ctx);
    else if (command == "bc-run") run_bcrun(ctx);
    else if (command == "entropy") run_entropy(ctx);
    else if (command == "maxlog") run_maxlog(ctx);
    else if (command == "hit") run_hit(ctx);
    else raise(ErrKind::argument, "unknown command '" + command + "'");
  } catch (const Error& e) {
    if (!ctx.complete) {
      const json marker{{"error", {{"kind", err_kind_name(e.kind())},
                                   {"message", e.what()},
                                   {"exit_code", e.exit_code()}}}};
      write_json(ctx.out / "FAILED", marker);
    }
    throw;
  }
}

int run_command(const std::string& command, const ExperimentConfig& cfg) {
  try {
    run_command_or_throw(command, cfg);
    return 0;
  } catch (const Error& e) {
    const json err{{"error", {{"kind", err_kind_name(e.kind())},
                              {"message", e.what()},
                              {"exit_code", e.exit_code()}}}};
    std::cerr << err.dump() << "\n";
    return e.exit_code();
  }
}

}  // namespace shiftbc
