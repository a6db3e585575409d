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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "greencell/errors.hpp"
#include "greencell/radio.hpp"
#include "support/builders.hpp"

using namespace greencell;

TEST_SUITE_BEGIN("radio");

TEST_CASE("path loss formula and clamping") {
  RadioConfig cfg;
  CHECK(path_loss_db(1000.0, cfg) == doctest::Approx(128.1));
  CHECK(path_loss_db(100.0, cfg) == doctest::Approx(90.5));
  // distances below the minimum evaluate at the minimum
  CHECK(path_loss_db(1.0, cfg) == path_loss_db(cfg.min_distance_m, cfg));
  CHECK_THROWS_AS(path_loss_db(std::numeric_limits<double>::quiet_NaN(), cfg),
                  InvalidInputError);
  CHECK_THROWS_AS(path_loss_db(std::numeric_limits<double>::infinity(), cfg),
                  InvalidInputError);
}

TEST_CASE("received power in watts") {
  RadioConfig cfg;
  cfg.shadow_sigma_db = 0.0;
  // 46 dBm transmit, 128.1 dB loss at 1 km: 10^((46-128.1-30)/10) W
  const double p = received_power_w(0, 0, 1000.0, 0.0, cfg);
  CHECK(p == doctest::Approx(6.16595001861e-12).epsilon(1e-9));
  CHECK(p > 0.0);

  // +3 dB transmit power multiplies the received power by ~1.995
  RadioConfig boosted = cfg;
  boosted.tx_power_dbm += 3.0;
  CHECK(received_power_w(0, 0, 1000.0, 0.0, boosted) / p ==
        doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-12));

  // shadowing shifts power deterministically once drawn
  CHECK(received_power_w(0, 0, 1000.0, 10.0, cfg) ==
        doctest::Approx(p / 10.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      received_power_w(0, 0, 1000.0, std::numeric_limits<double>::quiet_NaN(), cfg),
      InvalidInputError);
}

TEST_CASE("spectral efficiency formula") {
  RadioConfig cfg;
  cfg.bandwidth_eff = 1.0;
  cfg.sinr_eff = 1.0;
  CHECK(spectral_efficiency(0.0, 1e-10, 1e-12, cfg) == 0.0);
  CHECK(spectral_efficiency(1e-9, 0.0, 1e-10, cfg) ==
        doctest::Approx(std::log2(11.0)).epsilon(1e-12));

  RadioConfig halved = cfg;
  halved.bandwidth_eff = 0.5;
  CHECK(spectral_efficiency(1e-9, 0.0, 1e-10, halved) ==
        doctest::Approx(0.5 * std::log2(11.0)).epsilon(1e-12));

  CHECK_THROWS_AS(spectral_efficiency(-1.0, 0.0, 1e-10, cfg), InvalidInputError);
  CHECK_THROWS_AS(spectral_efficiency(1.0, -2.0, 1e-10, cfg), InvalidInputError);
  CHECK_THROWS_AS(spectral_efficiency(1.0, 0.0, 0.0, cfg), InvalidInputError);
}

TEST_CASE("spectral efficiency is monotone in signal and interference") {
  RadioConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> power(1e-14, 1e-8);
  for (int trial = 0; trial < 500; ++trial) {
    const double s = power(rng);
    const double i = power(rng);
    const double n = power(rng);
    const double base = spectral_efficiency(s, i, n, cfg);
    CHECK(spectral_efficiency(s * 1.01, i, n, cfg) > base);
    CHECK(spectral_efficiency(s, i * 1.01 + 1e-15, n, cfg) < base);
  }
}

TEST_CASE("link matrix on a single station has no interference") {
  const auto topo = test_support::line_topology(1);
  const auto users = test_support::users_at({{100.0, 250.0}, {300.0, 250.0}});
  RadioConfig cfg;
  const std::vector<double> shadow(2, 0.0);
  const auto link = build_link_matrix(topo, users, cfg, shadow);

  const double noise = watts_from_dbm(cfg.noise_psd_dbm_per_hz) * 5e6;
  for (std::size_t j = 0; j < 2; ++j) {
    const double d = wrap_distance(topo.stations[0].position_m,
                                   users.users[j].position_m, topo.extent_m);
    const double expected =
        spectral_efficiency(received_power_w(0, j, d, 0.0, cfg), 0.0, noise, cfg);
    CHECK(link.omega(0, j) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("equidistant user sees symmetric links") {
  NetworkTopology topo;
  topo.extent_m = {2000.0, 2000.0};
  topo.stations.push_back({0, {500.0, 1000.0}, 5e6, 400.0});
  topo.stations.push_back({1, {1500.0, 1000.0}, 5e6, 400.0});
  const auto users = test_support::users_at({{1000.0, 1000.0}});
  RadioConfig cfg;
  const std::vector<double> shadow(2, 0.0);
  const auto link = build_link_matrix(topo, users, cfg, shadow);
  CHECK(link.omega(0, 0) == doctest::Approx(link.omega(1, 0)).epsilon(1e-12));
  CHECK(link.demand(0, 0) == doctest::Approx(link.demand(1, 0)).epsilon(1e-12));
}

TEST_CASE("3-station instance matches a per-entry hand evaluation") {
  NetworkTopology topo;
  topo.extent_m = {3000.0, 3000.0};
  topo.stations.push_back({0, {200.0, 300.0}, 4e6, 400.0});
  topo.stations.push_back({1, {1700.0, 400.0}, 5e6, 350.0});
  topo.stations.push_back({2, {900.0, 2500.0}, 6e6, 450.0});
  const auto users =
      test_support::users_at({{600.0, 700.0}, {2500.0, 2500.0}}, 122000.0);
  RadioConfig cfg;
  std::vector<double> shadow{1.0, -2.0, 3.5, 0.5, -4.0, 2.0};  // column-major

  const auto link = build_link_matrix(topo, users, cfg, shadow);

  // independent per-entry evaluation straight from the definitions
  const double noise = watts_from_dbm(cfg.noise_psd_dbm_per_hz) * 6e6;
  for (std::size_t j = 0; j < 2; ++j) {
    double rx[3];
    for (std::size_t i = 0; i < 3; ++i) {
      const double d = wrap_distance(topo.stations[i].position_m,
                                     users.users[j].position_m, topo.extent_m);
      const double loss =
          cfg.pathloss_intercept_db +
          cfg.pathloss_exponent_coeff * std::log10(std::max(d, 35.0) / 1000.0);
      rx[i] = std::pow(10.0, (cfg.tx_power_dbm - loss - shadow[i + 3 * j] - 30.0) / 10.0);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      double interference = 0.0;
      for (std::size_t d = 0; d < 3; ++d) {
        if (d != i) interference += rx[d];
      }
      const double omega = std::log2(1.0 + rx[i] / (interference + noise));
      CHECK(link.rx(i, j) == doctest::Approx(rx[i]).epsilon(1e-12));
      CHECK(link.omega(i, j) == doctest::Approx(omega).epsilon(1e-10));
      CHECK(link.demand(i, j) == doctest::Approx(122000.0 / omega).epsilon(1e-10));
    }
  }
}

TEST_CASE("demand times spectral efficiency recovers the rate") {
  const auto topo = test_support::line_topology(4);
  RadioConfig cfg;
  const auto users = test_support::users_at(
      {{100.0, 100.0}, {700.0, 400.0}, {1400.0, 50.0}, {1900.0, 300.0}, {60.0, 450.0}},
      122000.0);
  const auto shadow = sample_shadow_db(5, 4, 5, cfg.shadow_sigma_db);
  const auto link = build_link_matrix(topo, users, cfg, shadow);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (!std::isfinite(link.demand(i, j))) continue;
      CHECK(link.demand(i, j) * link.omega(i, j) ==
            doctest::Approx(122000.0).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(build_link_matrix(topo, users, cfg, std::vector<double>(3, 0.0)),
                  InvalidInputError);
}

TEST_SUITE_END();
