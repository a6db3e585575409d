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

#include "greencell/radio.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "greencell/errors.hpp"
#include "greencell/kernels.hpp"

namespace greencell {

void RadioConfig::validate() const {
  if (!(bandwidth_eff > 0.0)) throw InvalidInputError("bandwidth_eff must be > 0");
  if (!(sinr_eff > 0.0)) throw InvalidInputError("sinr_eff must be > 0");
  if (shadow_sigma_db < 0.0) throw InvalidInputError("shadow_sigma_db must be >= 0");
  if (!(min_distance_m > 0.0)) throw InvalidInputError("min_distance_m must be > 0");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(pathloss_intercept_db) ||
      !std::isfinite(pathloss_exponent_coeff) ||
      !std::isfinite(noise_psd_dbm_per_hz)) {
    throw InvalidInputError("radio config fields must be finite");
  }
}

double path_loss_db(double distance_m, const RadioConfig& cfg) {
  if (!std::isfinite(distance_m)) {
    throw InvalidInputError("path loss: distance must be finite");
  }
  const double d = std::max(distance_m, cfg.min_distance_m);
  return cfg.pathloss_intercept_db +
         cfg.pathloss_exponent_coeff * std::log10(d / 1000.0);
}

double received_power_w(std::size_t bs_index, std::size_t user_index,
                        double distance_m, double shadow_db,
                        const RadioConfig& cfg) {
  if (!std::isfinite(shadow_db)) {
    throw InvalidInputError("received power: shadow term must be finite (link " +
                            std::to_string(bs_index) + "," +
                            std::to_string(user_index) + ")");
  }
  const double loss_db = path_loss_db(distance_m, cfg);
  return watts_from_dbm(cfg.tx_power_dbm - loss_db - shadow_db);
}

double spectral_efficiency(double p_signal_w, double p_interference_sum_w,
                           double p_noise_w, const RadioConfig& cfg) {
  if (p_signal_w < 0.0 || p_interference_sum_w < 0.0) {
    throw InvalidInputError("spectral efficiency: powers must be >= 0");
  }
  if (!(p_noise_w > 0.0)) {
    throw InvalidInputError("spectral efficiency: noise power must be > 0");
  }
  const double sinr =
      p_signal_w / (cfg.sinr_eff * (p_interference_sum_w + p_noise_w));
  return cfg.bandwidth_eff * std::log2(1.0 + sinr);
}

LinkMatrix build_link_matrix(const NetworkTopology& topo,
                             const UserSnapshot& users, const RadioConfig& cfg,
                             std::span<const double> shadow_db) {
  cfg.validate();
  topo.validate();
  const std::size_t m = topo.size();
  const std::size_t n = users.size();
  if (m == 0 || n == 0) {
    throw InvalidInputError("link matrix needs at least one station and one user");
  }
  if (shadow_db.size() != m * n) {
    throw InvalidInputError("shadow sample matrix has wrong dimensions");
  }

  LinkMatrix link;
  link.num_stations = m;
  link.num_users = n;
  link.rx_power_w.resize(m * n);
  link.spec_eff.resize(m * n);
  link.demand_hz.resize(m * n);

  double max_band = 0.0;
  for (const auto& s : topo.stations) max_band = std::max(max_band, s.bandwidth_hz);
  const double noise_w = watts_from_dbm(cfg.noise_psd_dbm_per_hz) * max_band;

  for (std::size_t j = 0; j < n; ++j) {
    const auto& user = users.users[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double d = wrap_distance(topo.stations[i].position_m,
                                     user.position_m, topo.extent_m);
      link.rx_power_w[link.idx(i, j)] =
          received_power_w(i, j, d, shadow_db[link.idx(i, j)], cfg);
    }
    // worst case: every other station transmits, so the interference on
    // link (i,j) is the column total minus the serving station's power
    const std::span<const double> col(&link.rx_power_w[link.idx(0, j)], m);
    const double total = kernels::sum(col);
    for (std::size_t i = 0; i < m; ++i) {
      const double signal = link.rx(i, j);
      const double interference = std::max(0.0, total - signal);
      const double omega =
          spectral_efficiency(signal, interference, noise_w, cfg);
      link.spec_eff[link.idx(i, j)] = omega;
      link.demand_hz[link.idx(i, j)] =
          omega > 0.0 ? user.rate_bps / omega
                      : std::numeric_limits<double>::infinity();
    }
  }
  return link;
}

}  // namespace greencell
