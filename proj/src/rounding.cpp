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

#include "greencell/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>

#include "greencell/errors.hpp"

namespace greencell {

namespace {

constexpr double kIntegralTol = 1e-6;  // LP output carries float noise
// capacity checks allow a relative sliver so LP-feasible inputs round cleanly
constexpr double kCapacitySlack = 1e-9;

bool fits(double demand, double residual, double capacity) {
  return std::isfinite(demand) && demand <= residual + kCapacitySlack * capacity;
}

}  // namespace

BinaryAssignment round_assignment(const RelaxedAssignment& w, const LinkMatrix& link,
                                  const NetworkTopology& topo,
                                  const UserSnapshot& users) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (w.num_stations != m || w.num_users != n || topo.size() != m ||
      users.size() != n) {
    throw InvalidInputError("round_assignment: dimensions disagree");
  }

  BinaryAssignment out;
  out.assigned_station.assign(n, -1);
  out.residual_bandwidth_hz = topo.capacities_hz();
  const std::vector<double> capacities = out.residual_bandwidth_hz;
  std::vector<char> active(m, 0);

  auto assign = [&](std::size_t user, std::size_t station) {
    out.assigned_station[user] = static_cast<std::int32_t>(station);
    out.residual_bandwidth_hz[station] -= link.demand(station, user);
    active[station] = 1;
  };

  // step 1: integral columns keep their station. Feasibility is inherited
  // from the relaxed solution; verify it anyway.
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t one_at = -1;
    bool integral = true;
    for (std::size_t i = 0; i < m && integral; ++i) {
      const double v = w.at(i, j);
      if (v >= 1.0 - kIntegralTol) {
        integral = one_at < 0;
        one_at = static_cast<std::int64_t>(i);
      } else if (v > kIntegralTol) {
        integral = false;
      }
    }
    if (integral && one_at >= 0) {
      const auto i = static_cast<std::size_t>(one_at);
      if (!fits(link.demand(i, j), out.residual_bandwidth_hz[i], capacities[i])) {
        throw InvalidInputError(
            "integral entries of the input already violate a bandwidth budget");
      }
      assign(j, i);
    }
  }

  // step 2: fractional entries in descending order; when a user comes up
  // first, it takes its largest entry whose station still has room
  struct Entry {
    double value;
    std::size_t user;
    std::size_t station;
  };
  std::vector<Entry> fractional;
  for (std::size_t j = 0; j < n; ++j) {
    if (out.assigned_station[j] >= 0) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = w.at(i, j);
      if (v > kIntegralTol && v < 1.0 - kIntegralTol) {
        fractional.push_back({v, j, i});
      }
    }
  }
  std::sort(fractional.begin(), fractional.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.user, a.station) < std::tie(b.user, b.station);
  });
  for (std::size_t k = 0; k < fractional.size(); ++k) {
    const std::size_t j = fractional[k].user;
    if (out.assigned_station[j] >= 0) continue;
    for (std::size_t kk = k; kk < fractional.size(); ++kk) {
      if (fractional[kk].user != j) continue;
      const std::size_t i = fractional[kk].station;
      if (fits(link.demand(i, j), out.residual_bandwidth_hz[i], capacities[i])) {
        assign(j, i);
        break;
      }
    }
  }

  // step 3: whoever is left wakes the closest sleeping station with room;
  // failing that, any active station in decreasing residual order
  for (std::size_t j = 0; j < n; ++j) {
    if (out.assigned_station[j] >= 0) continue;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       return wrap_distance(topo.stations[a].position_m,
                                            users.users[j].position_m, topo.extent_m) <
                              wrap_distance(topo.stations[b].position_m,
                                            users.users[j].position_m, topo.extent_m);
                     });
    bool placed = false;
    for (std::size_t i : candidates) {
      if (fits(link.demand(i, j), out.residual_bandwidth_hz[i], capacities[i])) {
        assign(j, i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      candidates.clear();
      for (std::size_t i = 0; i < m; ++i) {
        if (active[i]) candidates.push_back(i);
      }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](std::size_t a, std::size_t b) {
                         return out.residual_bandwidth_hz[a] >
                                out.residual_bandwidth_hz[b];
                       });
      for (std::size_t i : candidates) {
        if (fits(link.demand(i, j), out.residual_bandwidth_hz[i], capacities[i])) {
          assign(j, i);
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      throw InfeasibleError("user " + std::to_string(j) +
                            " fits no station; rounding failed");
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (active[i]) out.active_set.push_back(static_cast<std::int32_t>(i));
  }
  verify_assignment(out, link, capacities);
  return out;
}

EnergyReport energy_of(const BinaryAssignment& assignment,
                       const NetworkTopology& topo) {
  EnergyReport report;
  report.active_count = assignment.active_count();
  for (std::int32_t i : assignment.active_set) {
    report.total_power_w += topo.stations[static_cast<std::size_t>(i)].static_power_w;
  }
  return report;
}

void verify_assignment(const BinaryAssignment& assignment, const LinkMatrix& link,
                       std::span<const double> capacities_hz) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (assignment.assigned_station.size() != n || capacities_hz.size() != m) {
    throw InvalidInputError("verify_assignment: dimensions disagree");
  }
  std::vector<double> load(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = assignment.assigned_station[j];
    if (i < 0 || static_cast<std::size_t>(i) >= m) {
      throw InvalidInputError("user " + std::to_string(j) + " is unassigned");
    }
    const double b = link.demand(static_cast<std::size_t>(i), j);
    if (!std::isfinite(b)) {
      throw InvalidInputError("user " + std::to_string(j) +
                              " assigned over a dead link");
    }
    load[static_cast<std::size_t>(i)] += b;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (load[i] > capacities_hz[i] * (1.0 + kCapacitySlack)) {
      throw InvalidInputError("bandwidth budget of station " + std::to_string(i) +
                              " exceeded");
    }
  }
}

void write_assignment(std::ostream& os, const BinaryAssignment& assignment) {
  os << "# user_id station_id\n";
  for (std::size_t j = 0; j < assignment.assigned_station.size(); ++j) {
    os << j << ' ' << assignment.assigned_station[j] << '\n';
  }
  os << "# active_stations";
  for (std::int32_t i : assignment.active_set) os << ' ' << i;
  os << '\n';
}

}  // namespace greencell
