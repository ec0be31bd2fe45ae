#pragma once

#include <string>

namespace gzk {

// Executes the experiment described by a JSON config file. Outputs (manifest,
// CSV tables, reports, field dumps) land in the config's output directory,
// overridable by out_root (or the GZK_OUTPUT_ROOT environment variable).
// Returns the process exit code: 0 = PASS, 1 = FAIL verdict, 2 = error.
int run_experiment_file(const std::string& config_path, const std::string& out_root = "");

// Stable listing of the available experiments, their parameters and the claim
// each one exercises.
std::string list_experiments_text();

}  // namespace gzk
