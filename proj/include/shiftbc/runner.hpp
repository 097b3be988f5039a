#pragma once

#include <string>

#include "shiftbc/config.hpp"

namespace shiftbc {

// Executes one CLI command, writing row data and a summary into
// cfg.out_dir.  Commands: mix, check-q, bc-run, entropy, maxlog, hit.
// Throws Error on any failure; when artifacts are incomplete at that point a
// FAILED marker holding the machine-readable error object is left behind.
void run_command_or_throw(const std::string& command, const ExperimentConfig& cfg);

// Same, but maps errors to the documented exit codes (0 success,
// 2 validation, 3 resource guard, 4 resolution) and prints the error object
// to stderr.
int run_command(const std::string& command, const ExperimentConfig& cfg);

// Derived per-role seeds: the trajectory and each sampled target of one
// replicate share (seed, stream) but must be independent draws.
RngSeed role_seed(std::uint64_t base_seed, std::uint32_t stream, std::uint64_t role);

}  // namespace shiftbc
