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

#ifndef GREENCELL_MM_HPP
#define GREENCELL_MM_HPP

#include <span>
#include <utility>
#include <vector>

#include "greencell/lp.hpp"
#include "greencell/radio.hpp"
#include "greencell/scenario.hpp"

namespace greencell {

struct MMConfig {
  double epsilon = 1e-3;       // smoothing of the log-sum objective
  double epsilon_star = 1e-3;  // stop when the objective improves by less
  int max_iters = 20;
  bool keep_iterates = false;  // retain every w^(n) in the trace

  void validate() const;
};

/// Relaxed connection variables: w in [0,1]^(M*N), column-major
/// vectorization of the assignment matrix (index i + M*j). Links excluded
/// from the LP stay exactly zero.
struct RelaxedAssignment {
  std::size_t num_stations = 0;
  std::size_t num_users = 0;
  std::vector<double> w;

  double at(std::size_t i, std::size_t j) const { return w[i + num_stations * j]; }
};

enum class TerminationReason { tolerance, max_iters };

struct SolveTrace {
  // entry n is the state after n reweighting steps; entry 0 is the start
  std::vector<double> objective_per_iter;
  std::vector<int> active_count_per_iter;
  std::vector<std::vector<double>> w_per_iter;  // only when keep_iterates
  int iterations_used = 0;
  TerminationReason termination_reason = TerminationReason::max_iters;
};

/// Station loads: row i sums w over all users.
std::vector<double> row_sums(std::span<const double> w, std::size_t num_stations,
                             std::size_t num_users);

/// sum_i ln(epsilon + row_sum_i). The smoothed row-sparsity objective;
/// any log base gives the same minimizers, natural log keeps the gradient
/// simple.
double objective(std::span<const double> w, double epsilon,
                 std::size_t num_stations, std::size_t num_users);

/// Component (i,j) equals 1/(epsilon + row_sum_i): constant across users
/// of one station, huge for empty stations (which keeps them empty).
std::vector<double> gradient(std::span<const double> w, double epsilon,
                             std::size_t num_stations, std::size_t num_users);

/// Stations whose load exceeds the activity threshold.
int count_active(std::span<const double> w, std::size_t num_stations,
                 std::size_t num_users, double threshold = 1e-6);

/// Greedy start: users in index order, each fully assigned to the nearest
/// station (wrap distance) with remaining bandwidth. If any user cannot be
/// placed greedily, falls back to a feasibility solve of the full LP.
/// Throws InfeasibleError when even that fails.
RelaxedAssignment initialize(const LinkMatrix& link, const NetworkTopology& topo,
                             const UserSnapshot& users);

/// One reweighting step: per-station costs 1/(epsilon + row_sum_i), then
/// the assignment LP at those costs.
RelaxedAssignment mm_step(const RelaxedAssignment& w, const LinkMatrix& link,
                          std::span<const double> capacities_hz, double epsilon);

/// The stopping rule (skipped on the first step, which has no predecessor).
bool has_converged(double f_prev, double f_curr, double epsilon_star);

/// Full run: initialize, then reweight until the objective improvement
/// drops below epsilon_star or max_iters is hit. Reaching max_iters is a
/// normal exit, not an error. Single-threaded per run; concurrent runs on
/// distinct inputs are safe.
std::pair<RelaxedAssignment, SolveTrace> run(const LinkMatrix& link,
                                             const NetworkTopology& topo,
                                             const UserSnapshot& users,
                                             const MMConfig& cfg);

/// sum_i log(1 + |h_i|/epsilon) / log(1 + 1/epsilon): approaches the
/// number of nonzeros as epsilon goes to 0. Exists so the relaxation can
/// be property-tested.
double l0_relaxation_value(std::span<const double> h, double epsilon);

}  // namespace greencell

#endif  // GREENCELL_MM_HPP
