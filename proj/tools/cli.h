//
// Copyright 2026 The Pancake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PANCAKE_TOOLS_CLI_H_
#define PANCAKE_TOOLS_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pancake::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

// Raised for anything wrong with the invocation; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  int d = 256;
  double eps_star = 1.0;
  double delta_star = 1e-10;
  double delta_sens = 1.0;
  double beta = 1e-4;
  // Unset means 2 sqrt(d).
  std::optional<double> gamma;
  // Unset means calibrated from (delta_sens, eps_star, delta_star).
  std::optional<double> sigma;
  double t = 0.25;
  std::vector<double> delta_grid{0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.49};
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  std::string output;
  std::string mech = "gpm";
  std::string mitigation = "none";
  std::string key_mode = "fresh";
  std::string query_file;
  std::int64_t n_records = 1000;
  int n_samples = 10;
  int n_directions = 50;
  int batches = 15;
  int batch_size = 64;
  int n_servers = 5;
  int n_backdoored = 1;
  int n_colluding = 1;
  int threshold = 3;

  double resolved_gamma() const;
  double resolved_sigma() const;
};

// Parses flags and an optional `--config FILE` of `key = value` lines (keys
// are flag names without dashes; `#` starts a comment). Flags override file
// values. Throws ConfigError on unknown keys, bad types or failed validation.
// Returns nullopt when help was requested (text already written to `out`).
std::optional<RunConfig> ParseConfig(int argc, const char* const* argv,
                                     std::ostream& out);

// Resolved configuration as a single-line JSON object.
std::string ConfigJson(const RunConfig& cfg);

// Runs one subcommand. Results go to cfg.output, else to
// $PANCAKE_OUTPUT_DIR/<subcommand>.csv when that variable is set, else to
// `out`. A failed run leaves no partial file behind.
int Dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// ParseConfig + Dispatch with exit-code mapping.
int RunMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace pancake::cli

#endif  // PANCAKE_TOOLS_CLI_H_
