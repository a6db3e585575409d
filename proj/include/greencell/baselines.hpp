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

#ifndef GREENCELL_BASELINES_HPP
#define GREENCELL_BASELINES_HPP

#include <span>

#include "greencell/radio.hpp"
#include "greencell/rounding.hpp"
#include "greencell/scenario.hpp"

namespace greencell {

struct BruteForceResult {
  int min_active_count = 0;
  BinaryAssignment assignment;
};

/// Exact minimum number of active stations, by enumerating station subsets
/// in increasing cardinality and exhaustively assigning users within each
/// subset. Desk-scale only: refuses instances beyond 6 stations or 10
/// users (SizeLimitError). Throws InfeasibleError when even the full
/// station set cannot host everyone.
BruteForceResult brute_force_optimum(const LinkMatrix& link,
                                     std::span<const double> capacities_hz);

/// Every user on its nearest station with remaining bandwidth (spillover
/// to the next-nearest when full). Throws InfeasibleError when some user
/// cannot be placed greedily; the relaxed initializer, by contrast, falls
/// back to an LP feasibility solve.
BinaryAssignment nearest_station_solution(const LinkMatrix& link,
                                          const NetworkTopology& topo,
                                          const UserSnapshot& users);

/// Greedy switch-off: start from nearest_station_solution, then repeatedly
/// take the active station with the least served load and try to move all
/// of its users onto other active stations (best spectral efficiency
/// first). Deactivate on success; stop when no station can be emptied.
/// Stands in for adaptive cell-shrinking comparisons; it is labeled
/// greedy_switchoff in every output.
BinaryAssignment greedy_switchoff(const LinkMatrix& link,
                                  const NetworkTopology& topo,
                                  const UserSnapshot& users);

}  // namespace greencell

#endif  // GREENCELL_BASELINES_HPP
