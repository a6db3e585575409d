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

// Hand-built fixtures shared across test files.

#ifndef GREENCELL_TESTS_SUPPORT_BUILDERS_HPP
#define GREENCELL_TESTS_SUPPORT_BUILDERS_HPP

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "greencell/lp.hpp"
#include "greencell/radio.hpp"
#include "greencell/scenario.hpp"

namespace test_support {

/// LinkMatrix straight from a demand table (rows = stations). Spectral
/// efficiencies are back-filled so demand * omega == rate holds with the
/// uniform rate 1.0; received powers are placeholders.
inline greencell::LinkMatrix link_from_demands(
    std::size_t num_stations, std::size_t num_users,
    const std::vector<std::vector<double>>& demand_rows, double rate = 1.0) {
  greencell::LinkMatrix link;
  link.num_stations = num_stations;
  link.num_users = num_users;
  link.rx_power_w.assign(num_stations * num_users, 1e-12);
  link.spec_eff.resize(num_stations * num_users);
  link.demand_hz.resize(num_stations * num_users);
  for (std::size_t i = 0; i < num_stations; ++i) {
    for (std::size_t j = 0; j < num_users; ++j) {
      const double b = demand_rows[i][j];
      link.demand_hz[link.idx(i, j)] = b;
      link.spec_eff[link.idx(i, j)] = std::isfinite(b) ? rate / b : 0.0;
    }
  }
  return link;
}

/// Row of stations on a line, unit bandwidth/power unless overridden.
inline greencell::NetworkTopology line_topology(std::size_t num_stations,
                                                double spacing_m = 500.0,
                                                double bandwidth_hz = 5e6,
                                                double static_power_w = 400.0) {
  greencell::NetworkTopology topo;
  topo.extent_m = {spacing_m * static_cast<double>(num_stations), spacing_m};
  for (std::size_t i = 0; i < num_stations; ++i) {
    greencell::Station s;
    s.id = static_cast<int>(i);
    s.position_m = {spacing_m * (static_cast<double>(i) + 0.25), spacing_m * 0.5};
    s.bandwidth_hz = bandwidth_hz;
    s.static_power_w = static_power_w;
    topo.stations.push_back(s);
  }
  return topo;
}

inline greencell::UserSnapshot users_at(const std::vector<greencell::Vec2>& positions,
                                        double rate_bps = 122000.0) {
  greencell::UserSnapshot snap;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    snap.users.push_back({static_cast<int>(j), positions[j], rate_bps});
  }
  return snap;
}

/// Worst constraint violation of a candidate point (capacities normalized
/// to 1, equalities absolute, bounds absolute).
inline double lp_violation(const greencell::AssignmentLP& lp,
                           const std::vector<double>& w) {
  double worst = 0.0;
  std::vector<double> user_sum(lp.num_users, 0.0);
  std::vector<double> cap_sum(lp.num_stations, 0.0);
  for (std::size_t v = 0; v < lp.num_vars(); ++v) {
    user_sum[static_cast<std::size_t>(lp.var_user[v])] += w[v];
    const auto i = static_cast<std::size_t>(lp.var_station[v]);
    cap_sum[i] += w[v] * lp.demand_hz[v] / lp.capacity_hz[i];
    worst = std::max(worst, std::max(-w[v], w[v] - 1.0));
  }
  for (std::size_t j = 0; j < lp.num_users; ++j) {
    worst = std::max(worst, std::abs(user_sum[j] - 1.0));
  }
  for (std::size_t i = 0; i < lp.num_stations; ++i) {
    worst = std::max(worst, cap_sum[i] - 1.0);
  }
  return worst;
}

/// Random point satisfying the per-user simplex constraints (capacities
/// unchecked: callers filter with lp_violation).
inline std::vector<double> random_user_distribution(const greencell::AssignmentLP& lp,
                                                    std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(lp.num_vars(), 0.0);
  for (std::size_t j = 0; j < lp.num_users; ++j) {
    double total = 0.0;
    for (std::size_t v = 0; v < lp.num_vars(); ++v) {
      if (static_cast<std::size_t>(lp.var_user[v]) == j) {
        w[v] = expo(rng);
        total += w[v];
      }
    }
    for (std::size_t v = 0; v < lp.num_vars(); ++v) {
      if (static_cast<std::size_t>(lp.var_user[v]) == j) w[v] /= total;
    }
  }
  return w;
}

/// Random feasible binary assignment by rejection (users in random order,
/// uniformly chosen among stations with room). Empty when a draw gets
/// stuck.
inline std::vector<double> random_binary_point(const greencell::AssignmentLP& lp,
                                               std::mt19937_64& rng) {
  std::vector<double> residual = lp.capacity_hz;
  std::vector<double> w(lp.num_vars(), 0.0);
  std::vector<std::size_t> order(lp.num_users);
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t j : order) {
    std::vector<std::size_t> options;
    for (std::size_t v = 0; v < lp.num_vars(); ++v) {
      if (static_cast<std::size_t>(lp.var_user[v]) != j) continue;
      if (lp.demand_hz[v] <=
          residual[static_cast<std::size_t>(lp.var_station[v])]) {
        options.push_back(v);
      }
    }
    if (options.empty()) return {};
    const std::size_t v =
        options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    w[v] = 1.0;
    residual[static_cast<std::size_t>(lp.var_station[v])] -= lp.demand_hz[v];
  }
  return w;
}

/// Random feasible point: convex mixture of a few random feasible binary
/// assignments (feasible by convexity). Empty when sampling fails.
inline std::vector<double> random_feasible_mixture(const greencell::AssignmentLP& lp,
                                                   std::mt19937_64& rng,
                                                   int components = 3) {
  std::vector<std::vector<double>> parts;
  for (int attempt = 0;
       attempt < 10 * components && static_cast<int>(parts.size()) < components;
       ++attempt) {
    auto part = random_binary_point(lp, rng);
    if (!part.empty()) parts.push_back(std::move(part));
  }
  if (parts.empty()) return {};
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(parts.size());
  double total = 0.0;
  for (auto& t : weights) {
    t = expo(rng);
    total += t;
  }
  std::vector<double> w(lp.num_vars(), 0.0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t v = 0; v < w.size(); ++v) {
      w[v] += (weights[p] / total) * parts[p][v];
    }
  }
  return w;
}

/// Full relaxed vector (M*N) from an LP-space point.
inline std::vector<double> scatter(const greencell::AssignmentLP& lp,
                                   const std::vector<double>& w_vars) {
  std::vector<double> w(lp.num_stations * lp.num_users, 0.0);
  for (std::size_t v = 0; v < lp.num_vars(); ++v) {
    const auto i = static_cast<std::size_t>(lp.var_station[v]);
    const auto j = static_cast<std::size_t>(lp.var_user[v]);
    w[i + lp.num_stations * j] = w_vars[v];
  }
  return w;
}

}  // namespace test_support

#endif  // GREENCELL_TESTS_SUPPORT_BUILDERS_HPP
