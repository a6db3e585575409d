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

#include "greencell/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "greencell/errors.hpp"

namespace greencell {

namespace {

constexpr std::size_t kMaxBruteStations = 6;
constexpr std::size_t kMaxBruteUsers = 10;

// Depth-first search: can every user be hosted by the subset, respecting
// residual bandwidth? Users are placed in index order, stations tried in
// ascending id, first feasible completion wins.
bool assign_users_dfs(const LinkMatrix& link, const std::vector<std::size_t>& subset,
                      std::vector<double>& residual, std::size_t user,
                      std::vector<std::int32_t>& assignment) {
  if (user == link.num_users) return true;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    const std::size_t i = subset[k];
    const double b = link.demand(i, user);
    if (!std::isfinite(b) || b > residual[k]) continue;
    residual[k] -= b;
    assignment[user] = static_cast<std::int32_t>(i);
    if (assign_users_dfs(link, subset, residual, user + 1, assignment)) return true;
    residual[k] += b;
    assignment[user] = -1;
  }
  return false;
}

BinaryAssignment materialize(const LinkMatrix& link,
                             std::span<const double> capacities_hz,
                             std::vector<std::int32_t> assignment) {
  BinaryAssignment out;
  out.assigned_station = std::move(assignment);
  out.residual_bandwidth_hz.assign(capacities_hz.begin(), capacities_hz.end());
  std::vector<char> active(link.num_stations, 0);
  for (std::size_t j = 0; j < link.num_users; ++j) {
    const auto i = static_cast<std::size_t>(out.assigned_station[j]);
    out.residual_bandwidth_hz[i] -= link.demand(i, j);
    active[i] = 1;
  }
  for (std::size_t i = 0; i < link.num_stations; ++i) {
    if (active[i]) out.active_set.push_back(static_cast<std::int32_t>(i));
  }
  verify_assignment(out, link, capacities_hz);
  return out;
}

}  // namespace

BruteForceResult brute_force_optimum(const LinkMatrix& link,
                                     std::span<const double> capacities_hz) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (m > kMaxBruteStations || n > kMaxBruteUsers) {
    throw SizeLimitError("brute force is desk-scale only (M <= " +
                         std::to_string(kMaxBruteStations) + ", N <= " +
                         std::to_string(kMaxBruteUsers) + ")");
  }
  if (capacities_hz.size() != m) {
    throw InvalidInputError("brute force: capacity vector has wrong length");
  }

  // subsets in increasing cardinality: the first feasible one is optimal
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<char> mask(m, 0);
    std::fill(mask.end() - static_cast<std::ptrdiff_t>(k), mask.end(), 1);
    // std::next_permutation over the mask walks subsets in a fixed order
    do {
      std::vector<std::size_t> subset;
      std::vector<double> residual;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask[i]) {
          subset.push_back(i);
          residual.push_back(capacities_hz[i]);
        }
      }
      std::vector<std::int32_t> assignment(n, -1);
      if (assign_users_dfs(link, subset, residual, 0, assignment)) {
        BruteForceResult result;
        result.assignment = materialize(link, capacities_hz, std::move(assignment));
        result.min_active_count = result.assignment.active_count();
        return result;
      }
    } while (std::next_permutation(mask.begin(), mask.end()));
  }
  throw InfeasibleError("no subset of stations can host all users");
}

BinaryAssignment nearest_station_solution(const LinkMatrix& link,
                                          const NetworkTopology& topo,
                                          const UserSnapshot& users) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (topo.size() != m || users.size() != n) {
    throw InvalidInputError("nearest baseline: dimensions disagree");
  }
  std::vector<std::int32_t> assignment(n, -1);
  std::vector<double> residual = topo.capacities_hz();
  std::vector<std::size_t> order(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return wrap_distance(topo.stations[a].position_m, users.users[j].position_m,
                           topo.extent_m) <
             wrap_distance(topo.stations[b].position_m, users.users[j].position_m,
                           topo.extent_m);
    });
    bool placed = false;
    for (std::size_t i : order) {
      const double b = link.demand(i, j);
      if (std::isfinite(b) && b <= residual[i]) {
        assignment[j] = static_cast<std::int32_t>(i);
        residual[i] -= b;
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InfeasibleError("nearest-station baseline cannot place user " +
                            std::to_string(j));
    }
  }
  return materialize(link, topo.capacities_hz(), std::move(assignment));
}

BinaryAssignment greedy_switchoff(const LinkMatrix& link,
                                  const NetworkTopology& topo,
                                  const UserSnapshot& users) {
  BinaryAssignment current = nearest_station_solution(link, topo, users);
  const std::size_t n = link.num_users;
  const std::vector<double> capacities = topo.capacities_hz();

  auto served_load = [&](std::size_t station) {
    double load = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<std::size_t>(current.assigned_station[j]) == station) {
        load += link.demand(station, j);
      }
    }
    return load;
  };

  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<std::size_t> candidates(current.active_set.begin(),
                                        current.active_set.end());
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       return served_load(a) < served_load(b);
                     });
    for (std::size_t victim : candidates) {
      // tentatively move every user of the victim to another active
      // station, best spectral efficiency first
      std::vector<std::int32_t> trial = current.assigned_station;
      std::vector<double> residual = current.residual_bandwidth_hz;
      bool all_moved = true;
      for (std::size_t j = 0; j < n && all_moved; ++j) {
        if (static_cast<std::size_t>(trial[j]) != victim) continue;
        std::vector<std::size_t> targets;
        for (std::int32_t i : current.active_set) {
          if (static_cast<std::size_t>(i) != victim) {
            targets.push_back(static_cast<std::size_t>(i));
          }
        }
        std::stable_sort(targets.begin(), targets.end(),
                         [&](std::size_t a, std::size_t b) {
                           return link.omega(a, j) > link.omega(b, j);
                         });
        bool moved = false;
        for (std::size_t i : targets) {
          const double b = link.demand(i, j);
          if (std::isfinite(b) && b <= residual[i]) {
            residual[i] -= b;
            residual[victim] += link.demand(victim, j);
            trial[j] = static_cast<std::int32_t>(i);
            moved = true;
            break;
          }
        }
        all_moved = moved;
      }
      if (all_moved) {
        current.assigned_station = std::move(trial);
        current.residual_bandwidth_hz = std::move(residual);
        current.active_set.erase(
            std::remove(current.active_set.begin(), current.active_set.end(),
                        static_cast<std::int32_t>(victim)),
            current.active_set.end());
        improved = true;
        break;  // recompute loads against the committed state
      }
    }
  }
  verify_assignment(current, link, capacities);
  return current;
}

}  // namespace greencell
