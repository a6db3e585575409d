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

#ifndef GREENCELL_VALIDATION_HPP
#define GREENCELL_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "greencell/lp.hpp"
#include "greencell/mm.hpp"

// Independent oracles and the invariant suite behind `greencell validate`.
// Nothing here may call into the code path it is checking: the gradient
// check uses central differences of the objective, the LP check enumerates
// polytope vertices directly, instance feasibility is established by an
// explicit witness rather than by the solver.

namespace greencell::validation {

/// Central finite differences of the row-sparsity objective.
std::vector<double> objective_fd_gradient(std::span<const double> w, double epsilon,
                                          std::size_t num_stations,
                                          std::size_t num_users, double step);

struct VertexEnumResult {
  LPStatus status = LPStatus::infeasible;
  double objective = 0.0;
};

/// Exact LP optimum by enumerating candidate active sets (the user
/// equalities plus every choice of capacity rows and bounds). Limited to
/// 10 variables; throws SizeLimitError beyond that.
VertexEnumResult lp_optimum_by_vertex_enumeration(const AssignmentLP& lp);

/// Small random assignment LP (at most 8 variables). May be infeasible;
/// that is intentional, status agreement is part of the oracle check.
AssignmentLP random_assignment_lp(std::uint64_t seed);

struct SyntheticInstance {
  NetworkTopology topo;
  UserSnapshot users;
  LinkMatrix link;
};

/// Random deployment with capacities chosen so that the plain
/// nearest-station assignment fits: feasibility holds by witness, not by
/// solver fiat. `tightness` (> 1) is the capacity margin over that witness
/// load; smaller values give harder instances.
SyntheticInstance random_instance(std::uint64_t seed, std::size_t num_stations,
                                  std::size_t num_users, double tightness = 1.3);

/// Sparse test vector with nonzero magnitudes in [0.1, 10], drawn
/// log-uniformly with a bounded total log-mass so the counting limit is
/// clean (see the l0 checks). Returns the vector; nonzero count via out
/// parameter.
std::vector<double> random_l0_vector(std::uint64_t seed, std::size_t* nonzeros);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  /// Multiplies the numeric tolerances of the gradient, descent, and LP
  /// checks; 0.1 is the --strict setting.
  double tolerance_scale = 1.0;
  /// Test hook: biases the analytic gradient so the gradient check must
  /// fail (negative control).
  bool corrupt_gradient = false;
  std::uint64_t seed = 12345;
};

/// Gradient vs finite differences, monotone descent, LP vertex-oracle
/// equivalence, and the sparsity-limit check. One result per property.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options);

}  // namespace greencell::validation

#endif  // GREENCELL_VALIDATION_HPP
