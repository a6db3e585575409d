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

#include "greencell/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "greencell/errors.hpp"

namespace greencell {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& section) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key \"" + key + "\" in " + section);
    }
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) {
    try {
      target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
  }
}

void parse_hotspots(const json& obj, HotspotSpec& spec) {
  require_known_keys(obj,
                     {"count", "radius_m", "drop_probability", "position_sigma_m",
                      "centers"},
                     "scenario.hotspots");
  read_into(obj, "count", spec.count);
  read_into(obj, "radius_m", spec.radius_m);
  read_into(obj, "drop_probability", spec.drop_probability);
  read_into(obj, "position_sigma_m", spec.position_sigma_m);
  if (obj.contains("centers")) {
    spec.centers.clear();
    for (const auto& c : obj.at("centers")) {
      if (!c.is_array() || c.size() != 2) {
        throw ConfigError("hotspot centers must be [x, y] pairs");
      }
      spec.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
  }
}

void parse_scenario(const json& obj, ScenarioConfig& sc) {
  require_known_keys(obj,
                     {"grid_rows", "grid_cols", "spacing_m", "bandwidth_hz",
                      "static_power_w", "rate_bps", "mean_users", "lambda_list",
                      "hotspots", "seed", "topology_file", "users_file"},
                     "scenario");
  read_into(obj, "grid_rows", sc.grid_rows);
  read_into(obj, "grid_cols", sc.grid_cols);
  read_into(obj, "spacing_m", sc.spacing_m);
  read_into(obj, "bandwidth_hz", sc.bandwidth_hz);
  read_into(obj, "static_power_w", sc.static_power_w);
  read_into(obj, "rate_bps", sc.rate_bps);
  read_into(obj, "mean_users", sc.mean_users);
  read_into(obj, "lambda_list", sc.lambda_list);
  read_into(obj, "seed", sc.seed);
  read_into(obj, "topology_file", sc.topology_file);
  read_into(obj, "users_file", sc.users_file);
  if (obj.contains("hotspots")) parse_hotspots(obj.at("hotspots"), sc.hotspots);
}

void parse_radio(const json& obj, RadioConfig& rc) {
  require_known_keys(obj,
                     {"tx_power_dbm", "pathloss_intercept_db",
                      "pathloss_exponent_coeff", "shadow_sigma_db",
                      "noise_psd_dbm_per_hz", "bandwidth_eff", "sinr_eff",
                      "min_distance_m"},
                     "radio");
  read_into(obj, "tx_power_dbm", rc.tx_power_dbm);
  read_into(obj, "pathloss_intercept_db", rc.pathloss_intercept_db);
  read_into(obj, "pathloss_exponent_coeff", rc.pathloss_exponent_coeff);
  read_into(obj, "shadow_sigma_db", rc.shadow_sigma_db);
  read_into(obj, "noise_psd_dbm_per_hz", rc.noise_psd_dbm_per_hz);
  read_into(obj, "bandwidth_eff", rc.bandwidth_eff);
  read_into(obj, "sinr_eff", rc.sinr_eff);
  read_into(obj, "min_distance_m", rc.min_distance_m);
}

void parse_solver(const json& obj, MMConfig& mc) {
  require_known_keys(obj, {"epsilon", "epsilon_star", "max_iters", "keep_iterates"},
                     "solver");
  read_into(obj, "epsilon", mc.epsilon);
  read_into(obj, "epsilon_star", mc.epsilon_star);
  read_into(obj, "max_iters", mc.max_iters);
  read_into(obj, "keep_iterates", mc.keep_iterates);
}

}  // namespace

void RunConfig::validate() const {
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (scenario.grid_rows < 1 || scenario.grid_cols < 1) {
    throw ConfigError("grid must be at least 1x1");
  }
  if (!(scenario.spacing_m > 0.0)) throw ConfigError("spacing_m must be > 0");
  if (!(scenario.bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be > 0");
  if (!(scenario.static_power_w > 0.0)) {
    throw ConfigError("static_power_w must be > 0");
  }
  if (!(scenario.rate_bps > 0.0)) throw ConfigError("rate_bps must be > 0");
  if (!(scenario.mean_users > 0.0)) throw ConfigError("mean_users must be > 0");
  for (double l : scenario.lambda_list) {
    if (!(l > 0.0)) throw ConfigError("lambda_list entries must be > 0");
  }
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
  try {
    scenario.hotspots.validate();
    radio.validate();
    solver.validate();
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("configuration root must be an object");
  require_known_keys(root, {"scenario", "radio", "solver", "realizations", "out_dir"},
                     "configuration root");

  RunConfig cfg;
  if (root.contains("scenario")) parse_scenario(root.at("scenario"), cfg.scenario);
  if (root.contains("radio")) parse_radio(root.at("radio"), cfg.radio);
  if (root.contains("solver")) parse_solver(root.at("solver"), cfg.solver);
  read_into(root, "realizations", cfg.realizations);
  read_into(root, "out_dir", cfg.out_dir);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_to_text(const RunConfig& cfg) {
  json hotspots = {
      {"count", cfg.scenario.hotspots.count},
      {"radius_m", cfg.scenario.hotspots.radius_m},
      {"drop_probability", cfg.scenario.hotspots.drop_probability},
      {"position_sigma_m", cfg.scenario.hotspots.position_sigma_m},
  };
  if (!cfg.scenario.hotspots.centers.empty()) {
    json centers = json::array();
    for (const auto& c : cfg.scenario.hotspots.centers) {
      centers.push_back({c.x, c.y});
    }
    hotspots["centers"] = centers;
  }
  json root = {
      {"scenario",
       {{"grid_rows", cfg.scenario.grid_rows},
        {"grid_cols", cfg.scenario.grid_cols},
        {"spacing_m", cfg.scenario.spacing_m},
        {"bandwidth_hz", cfg.scenario.bandwidth_hz},
        {"static_power_w", cfg.scenario.static_power_w},
        {"rate_bps", cfg.scenario.rate_bps},
        {"mean_users", cfg.scenario.mean_users},
        {"lambda_list", cfg.scenario.lambda_list},
        {"hotspots", hotspots},
        {"seed", cfg.scenario.seed},
        {"topology_file", cfg.scenario.topology_file},
        {"users_file", cfg.scenario.users_file}}},
      {"radio",
       {{"tx_power_dbm", cfg.radio.tx_power_dbm},
        {"pathloss_intercept_db", cfg.radio.pathloss_intercept_db},
        {"pathloss_exponent_coeff", cfg.radio.pathloss_exponent_coeff},
        {"shadow_sigma_db", cfg.radio.shadow_sigma_db},
        {"noise_psd_dbm_per_hz", cfg.radio.noise_psd_dbm_per_hz},
        {"bandwidth_eff", cfg.radio.bandwidth_eff},
        {"sinr_eff", cfg.radio.sinr_eff},
        {"min_distance_m", cfg.radio.min_distance_m}}},
      {"solver",
       {{"epsilon", cfg.solver.epsilon},
        {"epsilon_star", cfg.solver.epsilon_star},
        {"max_iters", cfg.solver.max_iters},
        {"keep_iterates", cfg.solver.keep_iterates}}},
      {"realizations", cfg.realizations},
      {"out_dir", cfg.out_dir},
  };
  return root.dump(2) + "\n";
}

}  // namespace greencell
