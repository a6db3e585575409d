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

#ifndef GREENCELL_ROUNDING_HPP
#define GREENCELL_ROUNDING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "greencell/mm.hpp"
#include "greencell/radio.hpp"
#include "greencell/scenario.hpp"

namespace greencell {

/// A binary user-to-station assignment that respects every bandwidth
/// budget; stations without users are considered switched off.
struct BinaryAssignment {
  std::vector<std::int32_t> assigned_station;  // per user
  std::vector<std::int32_t> active_set;        // sorted, ascending
  std::vector<double> residual_bandwidth_hz;   // per station

  int active_count() const { return static_cast<int>(active_set.size()); }
};

struct EnergyReport {
  double total_power_w = 0.0;
  int active_count = 0;
};

/// Deterministic rounding of a fractional assignment:
///   1. users with an integral column keep their station;
///   2. fractional entries are visited in descending order and each still
///      unassigned user takes its largest-entry station that fits;
///   3. leftover users activate the closest sleeping station (wrap
///      distance) with room, then, as a last resort, any active station in
///      decreasing residual-capacity order.
/// Throws InfeasibleError when a user fits nowhere at all. The result
/// always satisfies the rate and bandwidth constraints.
/// Step 3 needs user positions, hence the snapshot parameter.
BinaryAssignment round_assignment(const RelaxedAssignment& w, const LinkMatrix& link,
                                  const NetworkTopology& topo,
                                  const UserSnapshot& users);

/// Sum of static powers over active stations.
EnergyReport energy_of(const BinaryAssignment& assignment,
                       const NetworkTopology& topo);

/// Re-checks both constraint families; throws InvalidInputError on
/// violation. Used by tests and by producers of assignments.
void verify_assignment(const BinaryAssignment& assignment, const LinkMatrix& link,
                       std::span<const double> capacities_hz);

/// "user_id station_id" per line plus the active-station list.
void write_assignment(std::ostream& os, const BinaryAssignment& assignment);

}  // namespace greencell

#endif  // GREENCELL_ROUNDING_HPP
