// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GREENCELL_CONFIG_HPP
#define GREENCELL_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "greencell/mm.hpp"
#include "greencell/radio.hpp"
#include "greencell/scenario.hpp"

namespace greencell {

struct ScenarioConfig {
  int grid_rows = 10;
  int grid_cols = 10;
  double spacing_m = 500.0;
  double bandwidth_hz = 5e6;
  double static_power_w = 400.0;
  double rate_bps = 122000.0;
  double mean_users = 400.0;
  /// Sweep load levels (mean user counts, reported under the lambda
  /// label). Empty means: sweep only mean_users.
  std::vector<double> lambda_list;
  HotspotSpec hotspots{3, 500.0, 0.05, 250.0, {}};
  std::uint64_t seed = 1;
  /// Optional plain-text imports; when set they replace the generated
  /// grid / sampled snapshot (solve only; sweeps always sample).
  std::string topology_file;
  std::string users_file;
};

/// Everything one run needs, captured in a single file so experiments are
/// reproducible from one artifact. CLI flags override file values.
struct RunConfig {
  ScenarioConfig scenario;
  RadioConfig radio;
  MMConfig solver;
  int realizations = 10;
  std::string out_dir = "out";

  void validate() const;  // throws ConfigError
};

/// Parses a JSON run configuration. Unknown keys are rejected so typos
/// fail loudly. Throws ConfigError.
RunConfig parse_config_text(const std::string& text);

/// Loads and parses a configuration file. Throws ConfigError.
RunConfig load_config(const std::string& path);

/// Serializes the effective configuration (for provenance next to run
/// outputs).
std::string config_to_text(const RunConfig& cfg);

}  // namespace greencell

#endif  // GREENCELL_CONFIG_HPP
