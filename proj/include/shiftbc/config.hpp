#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftbc/index_family.hpp"
#include "shiftbc/process.hpp"
#include "shiftbc/trajectory.hpp"

namespace shiftbc {

// Everything an experiment needs, mirrored 1:1 by the JSON config file and
// overridable by CLI flags of the same name.
struct ExperimentConfig {
  // model
  std::string model_kind = "iid-finite";  // iid-finite | iid-geometric | markov | gauss-digits
  std::vector<double> probabilities = {0.5, 0.5};
  double geometric_p = 0.5;
  std::vector<std::vector<double>> transition;

  // index family: coefficient lists, low degree first ([0,1] is n)
  std::vector<std::vector<long long>> family = {{0, 1}};

  // schedule
  std::string schedule_kind = "fixed-cylinder";  // fixed-cylinder | radius-schedule
  long long cylinder_l = 0;
  long long cylinder_r = 0;
  std::vector<long long> cylinder_symbols = {0};
  double beta = 0.0;
  long long target_halfwidth = 64;

  // bc-run setup
  std::string setup = "shift";  // shift | events
  long long event_symbol = 0;

  long long n_max = 10000;
  std::vector<long long> radii = {4, 5, 6, 7, 8};
  long long cap = 100000000;
  long long smb_radius = 200;
  int replicates = 1;
  std::uint64_t seed = 1;
  std::string sidedness = "two-sided";  // two-sided | one-sided
  double gamma = 1.0;
  double epsilon = 0.5;
  double envelope_c = 20.0;
  int k_max = 10;
  int oracle_max_len = 0;  // mix: also emit brute-force oracle rows when > 0
  std::string exec = "openmp";
  std::string out_dir = "out";
  std::string format = "csv";  // csv | json row data
  long long max_resident = Trajectory::kDefaultResidentBudget;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

// FNV-1a over the canonical JSON dump; embedded in every summary.
std::string config_hash(const ExperimentConfig& cfg);

ProcessModel model_from_config(const ExperimentConfig& cfg);
IndexFamily family_from_config(const ExperimentConfig& cfg);
Sidedness sidedness_from_config(const ExperimentConfig& cfg);

}  // namespace shiftbc
