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

#ifndef GREENCELL_RADIO_HPP
#define GREENCELL_RADIO_HPP

#include <cmath>
#include <span>
#include <vector>

#include "greencell/scenario.hpp"

namespace greencell {

/// Log-distance path loss with log-normal shadowing, urban-macro style
/// defaults (intercept 128.1 dB + 37.6 dB per decade of km, sigma 8 dB,
/// 46 dBm transmit power, -174 dBm/Hz noise density).
struct RadioConfig {
  double tx_power_dbm = 46.0;
  double pathloss_intercept_db = 128.1;
  double pathloss_exponent_coeff = 37.6;  // dB per decade of distance in km
  double shadow_sigma_db = 8.0;
  double noise_psd_dbm_per_hz = -174.0;
  double bandwidth_eff = 1.0;  // scales the log term
  double sinr_eff = 1.0;       // scales interference-plus-noise
  double min_distance_m = 35.0;

  void validate() const;
};

inline double watts_from_dbm(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double dbm_from_watts(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Per-link constants the optimizer consumes. All matrices are M x N,
/// column-major (index i + M*j), immutable after construction and safe to
/// share across concurrent solver runs.
struct LinkMatrix {
  std::size_t num_stations = 0;
  std::size_t num_users = 0;
  std::vector<double> rx_power_w;  // P_ij, strictly positive
  std::vector<double> spec_eff;    // omega_ij in bit/s/Hz under worst-case
                                   // interference (every other station on)
  std::vector<double> demand_hz;   // r_j / omega_ij; +inf when omega == 0

  std::size_t idx(std::size_t i, std::size_t j) const {
    return i + num_stations * j;
  }
  double rx(std::size_t i, std::size_t j) const { return rx_power_w[idx(i, j)]; }
  double omega(std::size_t i, std::size_t j) const { return spec_eff[idx(i, j)]; }
  double demand(std::size_t i, std::size_t j) const {
    return demand_hz[idx(i, j)];
  }
};

/// pathloss_intercept_db + pathloss_exponent_coeff * log10(d / 1 km),
/// with d clamped to cfg.min_distance_m from below.
double path_loss_db(double distance_m, const RadioConfig& cfg);

/// Transmit power minus path loss minus shadowing, converted to watts.
/// The link indices only appear in error messages.
double received_power_w(std::size_t bs_index, std::size_t user_index,
                        double distance_m, double shadow_db,
                        const RadioConfig& cfg);

/// bandwidth_eff * log2(1 + S / (sinr_eff * (I + N))).
double spectral_efficiency(double p_signal_w, double p_interference_sum_w,
                           double p_noise_w, const RadioConfig& cfg);

/// Builds the full link matrix. The interference for link (i,j) is the sum
/// of received powers from every station except i: a pre-optimization
/// constant, independent of which stations end up active. Noise per user is
/// the noise density integrated over the widest station band.
/// shadow_db must hold M*N values, column-major.
LinkMatrix build_link_matrix(const NetworkTopology& topo,
                             const UserSnapshot& users, const RadioConfig& cfg,
                             std::span<const double> shadow_db);

}  // namespace greencell

#endif  // GREENCELL_RADIO_HPP
