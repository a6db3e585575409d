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

#ifndef GREENCELL_LP_HPP
#define GREENCELL_LP_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "greencell/radio.hpp"

namespace greencell {

/// The bounded LP behind one reweighting step:
///
///   minimize    sum_v cost[v] * w[v]
///   subject to  sum_{v in user j}   w[v]              = 1      (N rows)
///               sum_{v in station i} demand[v] * w[v] <= B_i   (M rows)
///               0 <= w[v] <= 1
///
/// Variables are the admitted (station, user) links; links with zero
/// spectral efficiency are not variables at all (their weight is fixed 0).
struct AssignmentLP {
  std::size_t num_stations = 0;
  std::size_t num_users = 0;
  std::vector<double> cost;                // per variable
  std::vector<double> demand_hz;           // per variable, finite and > 0
  std::vector<std::int32_t> var_station;   // per variable
  std::vector<std::int32_t> var_user;      // per variable
  std::vector<std::int32_t> var_of_link;   // i + M*j -> variable index or -1
  std::vector<double> capacity_hz;         // per station, > 0

  std::size_t num_vars() const { return cost.size(); }

  /// Expands one cost per station to the per-variable cost vector.
  void set_station_costs(std::span<const double> station_costs);

  void validate() const;
};

enum class LPStatus { optimal, infeasible };

struct LPSolution {
  std::vector<double> w;  // per variable, in [0,1]; empty when infeasible
  double objective = 0.0;
  LPStatus status = LPStatus::optimal;
};

/// Assembles the LP from the link matrix. Throws InfeasibleError when some
/// user has no admitted link, InvalidInputError on dimension mismatches.
AssignmentLP build_lp(const LinkMatrix& link, std::span<const double> capacities_hz,
                      std::span<const double> station_costs);

/// Solves to a deterministic optimal basic solution (fixed pivot rules,
/// ties by lowest index). Throws SolverFailureError when the engine gives
/// up; infeasibility is a status, not an exception.
LPSolution solve(const AssignmentLP& lp);

/// Phase-1 style feasibility solve: any feasible point, or infeasible.
LPSolution find_feasible_point(const AssignmentLP& lp);

/// Plain-text dump for cross-checking against external solvers.
void dump_lp(std::ostream& os, const AssignmentLP& lp);

/// Bounded-variable revised simplex with an explicit basis inverse.
/// Capacity rows are scaled to O(1) internally. One instance is
/// single-threaded; distinct instances may run concurrently.
///
/// The solver is warm-startable: within a reweighting loop the constraint
/// set never changes, so after one full solve each new cost vector can be
/// re-optimized from the previous optimal basis (resolve).
class SimplexSolver {
 public:
  explicit SimplexSolver(AssignmentLP lp);
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  /// Fresh solve: feasibility phase then optimization phase.
  LPSolution solve();

  /// Swaps in new per-variable costs and re-optimizes from the current
  /// basis. Requires a prior successful solve() or feasible_point().
  LPSolution resolve(std::span<const double> variable_costs);

  /// Feasibility phase only.
  LPSolution feasible_point();

  const AssignmentLP& lp() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace greencell

#endif  // GREENCELL_LP_HPP
