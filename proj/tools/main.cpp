#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "shiftbc/runner.hpp"
#include "shiftbc/version.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<std::string> out_dir, format, exec, sidedness, setup, model_kind;
  std::optional<long long> n_max, cap, smb_radius, target_halfwidth, event_symbol;
  std::optional<double> gamma, beta, epsilon, envelope_c, geometric_p;
  std::optional<int> k_max, oracle_max_len;
  std::optional<std::vector<long long>> radii;
};

void add_common_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON config file");
  sub->add_option("--seed", o.seed, "base RNG seed");
  sub->add_option("--replicates", o.replicates, "number of replicates");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--format", o.format, "row data format: csv or json");
  sub->add_option("--N", o.n_max, "run length N");
  sub->add_option("--exec", o.exec, "replicate execution: serial or openmp");
  sub->add_option("--sidedness", o.sidedness, "two-sided or one-sided");
  sub->add_option("--setup", o.setup, "bc-run setup: shift or events");
  sub->add_option("--event-symbol", o.event_symbol, "events setup symbol");
  sub->add_option("--model", o.model_kind, "model kind override");
  sub->add_option("--p", o.geometric_p, "iid-geometric success parameter");
  sub->add_option("--cap", o.cap, "hitting-time censoring cap");
  sub->add_option("--radii", o.radii, "hitting radii");
  sub->add_option("--smb-radius", o.smb_radius, "entropy cylinder radius");
  sub->add_option("--target-halfwidth", o.target_halfwidth, "sampled target halfwidth");
  sub->add_option("--gamma", o.gamma, "log-distance scale gamma");
  sub->add_option("--beta", o.beta, "radius schedule beta");
  sub->add_option("--epsilon", o.epsilon, "envelope epsilon");
  sub->add_option("--envelope-C", o.envelope_c, "envelope constant C");
  sub->add_option("--k-max", o.k_max, "largest mixing gap");
  sub->add_option("--oracle-max-len", o.oracle_max_len,
                  "mix: emit brute-force oracle rows up to this block length");
}

shiftbc::ExperimentConfig build_config(const Overrides& o) {
  shiftbc::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in)
      shiftbc::raise(shiftbc::ErrKind::argument,
                     "cannot read config file " + o.config_path);
    nlohmann::json j;
    in >> j;
    cfg = shiftbc::config_from_json(j);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.format) cfg.format = *o.format;
  if (o.n_max) cfg.n_max = *o.n_max;
  if (o.exec) cfg.exec = *o.exec;
  if (o.sidedness) cfg.sidedness = *o.sidedness;
  if (o.setup) cfg.setup = *o.setup;
  if (o.event_symbol) cfg.event_symbol = *o.event_symbol;
  if (o.model_kind) cfg.model_kind = *o.model_kind;
  if (o.geometric_p) cfg.geometric_p = *o.geometric_p;
  if (o.cap) cfg.cap = *o.cap;
  if (o.radii) cfg.radii = *o.radii;
  if (o.smb_radius) cfg.smb_radius = *o.smb_radius;
  if (o.target_halfwidth) cfg.target_halfwidth = *o.target_halfwidth;
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.beta) cfg.beta = *o.beta;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.envelope_c) cfg.envelope_c = *o.envelope_c;
  if (o.k_max) cfg.k_max = *o.k_max;
  if (o.oracle_max_len) cfg.oracle_max_len = *o.oracle_max_len;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(shiftbc::kVersion) +
               " - strong Borel-Cantelli sums, mixing coefficients, entropy and "
               "hitting times on shift spaces"};
  app.require_subcommand(1);

  Overrides o;
  for (const char* name : {"mix", "check-q", "bc-run", "entropy", "maxlog", "hit"})
    add_common_options(app.add_subcommand(name), o);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return shiftbc::run_command(command, build_config(o));
  } catch (const shiftbc::Error& e) {
    std::cerr << "{\"error\":{\"kind\":\"" << shiftbc::err_kind_name(e.kind())
              << "\",\"message\":\"" << e.what() << "\"}}\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"kind\":\"internal\",\"message\":\"" << e.what()
              << "\"}}\n";
    return 2;
  }
}
