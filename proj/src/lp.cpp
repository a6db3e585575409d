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

#include "greencell/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "greencell/errors.hpp"
#include "greencell/kernels.hpp"

namespace greencell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances on the row-scaled system (capacity rows divided by B_i, so
// every right-hand side is 1).
constexpr double kDualTol = 1e-9;    // reduced-cost significance
constexpr double kPivotTol = 1e-10;  // smallest acceptable pivot magnitude
constexpr double kRatioTieTol = 1e-10;
constexpr double kDegenStepTol = 1e-12;
constexpr double kPhase1Tol = 1e-8;     // residual infeasibility after phase 1
constexpr double kSolutionTol = 1e-7;   // published feasibility guarantee
constexpr double kSingularTol = 1e-11;  // refactorization pivot floor
constexpr int kRefactorInterval = 120;
constexpr int kDegenerateBlandSwitch = 128;  // consecutive degenerate pivots

}  // namespace

void AssignmentLP::set_station_costs(std::span<const double> station_costs) {
  if (station_costs.size() != num_stations) {
    throw InvalidInputError("station cost vector has wrong length");
  }
  for (std::size_t v = 0; v < num_vars(); ++v) {
    cost[v] = station_costs[static_cast<std::size_t>(var_station[v])];
  }
}

void AssignmentLP::validate() const {
  const std::size_t nv = num_vars();
  if (demand_hz.size() != nv || var_station.size() != nv || var_user.size() != nv) {
    throw InvalidInputError("assignment LP arrays disagree in length");
  }
  if (capacity_hz.size() != num_stations) {
    throw InvalidInputError("capacity vector has wrong length");
  }
  if (var_of_link.size() != num_stations * num_users) {
    throw InvalidInputError("variable index map has wrong size");
  }
  for (double b : capacity_hz) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw InvalidInputError("capacities must be positive and finite");
    }
  }
  std::vector<char> user_covered(num_users, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!(demand_hz[v] > 0.0) || !std::isfinite(demand_hz[v])) {
      throw InvalidInputError("variable demands must be positive and finite");
    }
    const auto i = var_station[v];
    const auto j = var_user[v];
    if (i < 0 || static_cast<std::size_t>(i) >= num_stations || j < 0 ||
        static_cast<std::size_t>(j) >= num_users) {
      throw InvalidInputError("variable references an out-of-range link");
    }
    user_covered[static_cast<std::size_t>(j)] = 1;
  }
  for (std::size_t j = 0; j < num_users; ++j) {
    if (!user_covered[j]) {
      throw InfeasibleError("user " + std::to_string(j) +
                            " has no admitted link: infeasible by construction");
    }
  }
}

AssignmentLP build_lp(const LinkMatrix& link, std::span<const double> capacities_hz,
                      std::span<const double> station_costs) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (capacities_hz.size() != m) {
    throw InvalidInputError("build_lp: capacity vector has wrong length");
  }
  if (station_costs.size() != m) {
    throw InvalidInputError("build_lp: station cost vector has wrong length");
  }

  AssignmentLP lp;
  lp.num_stations = m;
  lp.num_users = n;
  lp.capacity_hz.assign(capacities_hz.begin(), capacities_hz.end());
  lp.var_of_link.assign(m * n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double b = link.demand(i, j);
      if (!std::isfinite(b)) continue;  // omega == 0: link not a variable
      lp.var_of_link[link.idx(i, j)] = static_cast<std::int32_t>(lp.cost.size());
      lp.cost.push_back(station_costs[i]);
      lp.demand_hz.push_back(b);
      lp.var_station.push_back(static_cast<std::int32_t>(i));
      lp.var_user.push_back(static_cast<std::int32_t>(j));
    }
  }
  lp.validate();
  return lp;
}

void dump_lp(std::ostream& os, const AssignmentLP& lp) {
  os.precision(17);
  os << "assignment_lp " << lp.num_stations << ' ' << lp.num_users << ' '
     << lp.num_vars() << '\n';
  os << "# minimize sum cost[v]*w[v]; per user sum w = 1; per station sum "
        "demand*w <= capacity; 0 <= w <= 1\n";
  for (std::size_t v = 0; v < lp.num_vars(); ++v) {
    os << "var " << v << ' ' << lp.var_station[v] << ' ' << lp.var_user[v] << ' '
       << lp.cost[v] << ' ' << lp.demand_hz[v] << '\n';
  }
  for (std::size_t i = 0; i < lp.num_stations; ++i) {
    os << "capacity " << i << ' ' << lp.capacity_hz[i] << '\n';
  }
}

// ---------------------------------------------------------------------------
// Revised simplex with bounds.
//
// Row layout (all right-hand sides equal 1 after scaling):
//   rows [0, N)      user equalities      sum_i w_ij  = 1
//   rows [N, N+M)    scaled capacities    sum_j (b_ij / B_i) w_ij <= 1
//
// Column layout:
//   [0, nv)              structural, bounds [0, 1], two nonzeros each
//   [nv, nv+M)           slacks of capacity rows, bounds [0, inf)
//   [nv+M, nv+M+N)       artificials of user rows, bounds [0, inf) during
//                        the feasibility phase, then fixed to 0
//
// All lower bounds are zero. The basis inverse is kept explicitly,
// column-major, and rebuilt from scratch periodically; BTRAN is a dot per
// column, FTRAN and the eta update are axpys, pricing of the structural
// block is one reduced_costs kernel call.
// ---------------------------------------------------------------------------

struct SimplexSolver::Impl {
  enum class VarState : std::uint8_t { basic, at_lower, at_upper };

  AssignmentLP lp;

  std::size_t m = 0;   // rows = num_users + num_stations
  std::size_t nv = 0;  // structural variables
  std::size_t nt = 0;  // total columns incl. slacks and artificials

  // structural column data (row-scaled capacity coefficients)
  std::vector<std::int32_t> user_row;  // per structural variable
  std::vector<std::int32_t> cap_row;   // per structural variable
  std::vector<double> cap_coef;        // demand / B_i

  std::vector<double> upper;       // per column; lower bounds are all 0
  std::vector<double> obj;         // phase-2 objective per column
  std::vector<double> binv;        // m*m, column-major
  std::vector<std::int32_t> basic_var;  // per row
  std::vector<std::int32_t> basic_pos;  // per column, -1 if nonbasic
  std::vector<VarState> state;          // per column
  std::vector<double> x_basic;          // per row

  // scratch
  std::vector<double> y;         // duals
  std::vector<double> d_struct;  // structural reduced costs
  std::vector<double> alpha;     // FTRAN result
  std::vector<double> c_basic;
  std::vector<double> rhs_work;

  bool bland = false;
  bool has_feasible_basis = false;
  int degenerate_streak = 0;
  int pivots_since_refactor = 0;
  long iterations = 0;
  long iteration_cap = 0;

  explicit Impl(AssignmentLP in) : lp(std::move(in)) {
    lp.validate();
    const std::size_t num_users = lp.num_users;
    const std::size_t num_stations = lp.num_stations;
    nv = lp.num_vars();
    m = num_users + num_stations;
    nt = nv + num_stations + num_users;
    iteration_cap = 1000 + 50 * static_cast<long>(m);

    user_row.resize(nv);
    cap_row.resize(nv);
    cap_coef.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      user_row[v] = lp.var_user[v];
      cap_row[v] = static_cast<std::int32_t>(num_users + lp.var_station[v]);
      cap_coef[v] =
          lp.demand_hz[v] / lp.capacity_hz[static_cast<std::size_t>(lp.var_station[v])];
    }

    upper.assign(nt, kInf);
    for (std::size_t v = 0; v < nv; ++v) upper[v] = 1.0;

    obj.assign(nt, 0.0);
    for (std::size_t v = 0; v < nv; ++v) obj[v] = lp.cost[v];

    y.resize(m);
    d_struct.resize(nv);
    alpha.resize(m);
    c_basic.resize(m);
    rhs_work.resize(m);
  }

  std::span<double> binv_col(std::size_t c) { return {binv.data() + c * m, m}; }
  std::span<const double> binv_col(std::size_t c) const {
    return {binv.data() + c * m, m};
  }

  std::size_t slack_col(std::size_t station) const { return nv + station; }
  std::size_t artificial_col(std::size_t user) const {
    return nv + lp.num_stations + user;
  }
  bool is_artificial(std::size_t col) const { return col >= nv + lp.num_stations; }

  // column of the scaled constraint matrix, at most two nonzeros
  int column_nnz(std::size_t col, std::int32_t rows[2], double vals[2]) const {
    if (col < nv) {
      rows[0] = user_row[col];
      vals[0] = 1.0;
      rows[1] = cap_row[col];
      vals[1] = cap_coef[col];
      return 2;
    }
    if (col < nv + lp.num_stations) {
      rows[0] = static_cast<std::int32_t>(lp.num_users + (col - nv));
      vals[0] = 1.0;
      return 1;
    }
    rows[0] = static_cast<std::int32_t>(col - nv - lp.num_stations);
    vals[0] = 1.0;
    return 1;
  }

  void reset_to_initial_basis() {
    binv.assign(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) binv[r * m + r] = 1.0;
    basic_var.resize(m);
    basic_pos.assign(nt, -1);
    state.assign(nt, VarState::at_lower);
    for (std::size_t j = 0; j < lp.num_users; ++j) {
      const std::size_t col = artificial_col(j);
      basic_var[j] = static_cast<std::int32_t>(col);
      basic_pos[col] = static_cast<std::int32_t>(j);
      state[col] = VarState::basic;
      upper[col] = kInf;  // re-open artificials for a fresh feasibility phase
    }
    for (std::size_t i = 0; i < lp.num_stations; ++i) {
      const std::size_t row = lp.num_users + i;
      const std::size_t col = slack_col(i);
      basic_var[row] = static_cast<std::int32_t>(col);
      basic_pos[col] = static_cast<std::int32_t>(row);
      state[col] = VarState::basic;
    }
    x_basic.assign(m, 1.0);  // scaled right-hand side
    bland = false;
    has_feasible_basis = false;
    degenerate_streak = 0;
    pivots_since_refactor = 0;
    iterations = 0;
  }

  // FTRAN for constraint column `col`: alpha = Binv * a_col.
  void ftran(std::size_t col) {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    std::int32_t rows[2];
    double vals[2];
    const int nnz = column_nnz(col, rows, vals);
    for (int k = 0; k < nnz; ++k) {
      kernels::axpy(vals[k], binv_col(static_cast<std::size_t>(rows[k])), alpha);
    }
  }

  void compute_duals(const std::vector<double>& costs) {
    for (std::size_t r = 0; r < m; ++r) {
      c_basic[r] = costs[static_cast<std::size_t>(basic_var[r])];
    }
    for (std::size_t c = 0; c < m; ++c) {
      y[c] = kernels::dot(c_basic, binv_col(c));
    }
  }

  double reduced_cost(std::size_t col, const std::vector<double>& costs) const {
    std::int32_t rows[2];
    double vals[2];
    const int nnz = column_nnz(col, rows, vals);
    double d = costs[col];
    for (int k = 0; k < nnz; ++k) {
      d -= vals[k] * y[static_cast<std::size_t>(rows[k])];
    }
    return d;
  }

  bool eligible(std::size_t col, double d) const {
    if (state[col] == VarState::basic) return false;
    if (upper[col] <= 0.0) return false;  // fixed (retired artificials)
    if (state[col] == VarState::at_lower) return d < -kDualTol;
    return d > kDualTol;  // at upper bound
  }

  // Returns the entering column or -1 at optimality.
  std::int64_t choose_entering(const std::vector<double>& costs) {
    compute_duals(costs);
    kernels::reduced_costs(std::span<const double>(costs.data(), nv), cap_coef,
                           user_row, cap_row, y, d_struct);
    if (bland) {
      for (std::size_t v = 0; v < nv; ++v) {
        if (eligible(v, d_struct[v])) return static_cast<std::int64_t>(v);
      }
      for (std::size_t c = nv; c < nt; ++c) {
        if (eligible(c, reduced_cost(c, costs))) return static_cast<std::int64_t>(c);
      }
      return -1;
    }
    // Dantzig: most violating reduced cost, ties to the lowest index
    std::int64_t best = -1;
    double best_violation = kDualTol;
    for (std::size_t v = 0; v < nv; ++v) {
      if (state[v] == VarState::basic) continue;
      const double viol =
          state[v] == VarState::at_lower ? -d_struct[v] : d_struct[v];
      if (viol > best_violation && upper[v] > 0.0) {
        best_violation = viol;
        best = static_cast<std::int64_t>(v);
      }
    }
    for (std::size_t c = nv; c < nt; ++c) {
      if (state[c] == VarState::basic || upper[c] <= 0.0) continue;
      const double d = reduced_cost(c, costs);
      const double viol = state[c] == VarState::at_lower ? -d : d;
      if (viol > best_violation) {
        best_violation = viol;
        best = static_cast<std::int64_t>(c);
      }
    }
    return best;
  }

  void update_binv(std::size_t pivot_row) {
    const double ap = alpha[pivot_row];
    for (std::size_t c = 0; c < m; ++c) {
      auto col = binv_col(c);
      const double mu = col[pivot_row] / ap;
      if (mu != 0.0) {
        kernels::axpy(-mu, alpha, col);
      }
      col[pivot_row] = mu;
    }
  }

  void recompute_x_basic() {
    std::fill(rhs_work.begin(), rhs_work.end(), 1.0);
    // structural variables are the only columns that can sit at a finite
    // nonzero upper bound
    std::int32_t rows[2];
    double vals[2];
    for (std::size_t v = 0; v < nv; ++v) {
      if (state[v] == VarState::at_upper) {
        const int nnz = column_nnz(v, rows, vals);
        for (int k = 0; k < nnz; ++k) {
          rhs_work[static_cast<std::size_t>(rows[k])] -= vals[k] * upper[v];
        }
      }
    }
    std::fill(x_basic.begin(), x_basic.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      if (rhs_work[r] != 0.0) {
        kernels::axpy(rhs_work[r], binv_col(r), x_basic);
      }
    }
  }

  // Rebuilds the inverse from the current basis by re-pivoting each basic
  // column, largest available pivot first within each column.
  void refactor() {
    const std::vector<std::int32_t> basis(basic_var.begin(), basic_var.end());
    binv.assign(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) binv[r * m + r] = 1.0;

    std::vector<char> row_taken(m, 0);
    std::vector<std::int32_t> new_basic(m, -1);
    std::vector<double> candidate;
    std::vector<std::int32_t> candidate_row;
    for (std::size_t p = 0; p < m; ++p) {
      const auto col = static_cast<std::size_t>(basis[p]);
      ftran(col);
      candidate.clear();
      candidate_row.clear();
      for (std::size_t r = 0; r < m; ++r) {
        if (!row_taken[r]) {
          candidate.push_back(alpha[r]);
          candidate_row.push_back(static_cast<std::int32_t>(r));
        }
      }
      const std::size_t pick = kernels::argmax_abs(candidate);
      const auto prow = static_cast<std::size_t>(candidate_row[pick]);
      if (std::abs(alpha[prow]) <= kSingularTol) {
        throw SolverFailureError("singular basis during refactorization");
      }
      update_binv(prow);
      row_taken[prow] = 1;
      new_basic[prow] = static_cast<std::int32_t>(col);
    }
    basic_var = new_basic;
    for (std::size_t r = 0; r < m; ++r) {
      basic_pos[static_cast<std::size_t>(basic_var[r])] = static_cast<std::int32_t>(r);
    }
    pivots_since_refactor = 0;
    recompute_x_basic();
  }

  // One simplex iteration. Returns false at optimality.
  bool iterate(const std::vector<double>& costs) {
    const std::int64_t entering = choose_entering(costs);
    if (entering < 0) return false;
    const auto col = static_cast<std::size_t>(entering);
    const double dir = state[col] == VarState::at_lower ? 1.0 : -1.0;

    ftran(col);

    // ratio test: step t >= 0 along the entering direction until a basic
    // variable hits a bound or the entering variable flips bound
    const double flip_step = upper[col];  // upper - lower, lower == 0
    double best_t = kInf;
    double best_abs_alpha = 0.0;
    std::int64_t leave_row = -1;
    bool leave_to_upper = false;
    for (std::size_t r = 0; r < m; ++r) {
      const double delta = dir * alpha[r];
      double t;
      bool to_upper;
      if (delta > kPivotTol) {
        t = x_basic[r] / delta;  // basic value falls toward 0
        to_upper = false;
      } else if (delta < -kPivotTol) {
        const double ub = upper[static_cast<std::size_t>(basic_var[r])];
        if (ub == kInf) continue;
        t = (x_basic[r] - ub) / delta;  // basic value climbs toward its bound
        to_upper = true;
      } else {
        continue;
      }
      if (t < 0.0) t = 0.0;
      const double a = std::abs(alpha[r]);
      if (t < best_t - kRatioTieTol ||
          (t < best_t + kRatioTieTol && a > best_abs_alpha)) {
        best_t = std::min(t, best_t);
        best_abs_alpha = a;
        leave_row = static_cast<std::int64_t>(r);
        leave_to_upper = to_upper;
      }
    }

    ++iterations;
    if (iterations > iteration_cap) {
      throw SolverFailureError("simplex iteration cap exceeded (" +
                               std::to_string(iteration_cap) + ")");
    }

    if (flip_step <= best_t + kRatioTieTol) {
      // bound flip, no basis change
      if (flip_step == kInf) {
        throw SolverFailureError("unbounded direction in a bounded LP");
      }
      kernels::axpy(-dir * flip_step, alpha, x_basic);
      state[col] =
          state[col] == VarState::at_lower ? VarState::at_upper : VarState::at_lower;
      degenerate_streak = 0;
      return true;
    }
    if (leave_row < 0) {
      throw SolverFailureError("ratio test found no blocking row");
    }

    const auto prow = static_cast<std::size_t>(leave_row);
    const double t = best_t;
    kernels::axpy(-dir * t, alpha, x_basic);

    const auto leaving = static_cast<std::size_t>(basic_var[prow]);
    state[leaving] = leave_to_upper ? VarState::at_upper : VarState::at_lower;
    basic_pos[leaving] = -1;

    x_basic[prow] = state[col] == VarState::at_lower ? t : upper[col] - t;
    update_binv(prow);
    basic_var[prow] = static_cast<std::int32_t>(col);
    basic_pos[col] = static_cast<std::int32_t>(prow);
    state[col] = VarState::basic;

    if (t <= kDegenStepTol) {
      if (++degenerate_streak >= kDegenerateBlandSwitch) bland = true;
    } else {
      degenerate_streak = 0;
    }
    if (++pivots_since_refactor >= kRefactorInterval) {
      refactor();
    }
    return true;
  }

  void run_phase(const std::vector<double>& costs) {
    while (iterate(costs)) {
    }
  }

  double phase1_infeasibility() const {
    double total = 0.0;
    for (std::size_t j = 0; j < lp.num_users; ++j) {
      const std::size_t col = artificial_col(j);
      if (state[col] == VarState::basic) {
        total += std::max(0.0, x_basic[static_cast<std::size_t>(basic_pos[col])]);
      }
    }
    return total;
  }

  // Feasibility phase from the all-logical basis. Returns false when the
  // instance is infeasible.
  bool phase1() {
    reset_to_initial_basis();
    std::vector<double> costs(nt, 0.0);
    for (std::size_t j = 0; j < lp.num_users; ++j) costs[artificial_col(j)] = 1.0;
    run_phase(costs);
    if (phase1_infeasibility() > kPhase1Tol) return false;
    for (std::size_t j = 0; j < lp.num_users; ++j) {
      upper[artificial_col(j)] = 0.0;  // retire artificials
    }
    bland = false;
    degenerate_streak = 0;
    has_feasible_basis = true;
    return true;
  }

  double variable_value(std::size_t col) const {
    switch (state[col]) {
      case VarState::basic:
        return x_basic[static_cast<std::size_t>(basic_pos[col])];
      case VarState::at_upper:
        return upper[col];
      case VarState::at_lower:
        return 0.0;
    }
    return 0.0;
  }

  // max violation over user equalities, capacity rows, and bounds
  double solution_violation(const std::vector<double>& w) const {
    double worst = 0.0;
    std::vector<double> user_sum(lp.num_users, 0.0);
    std::vector<double> cap_sum(lp.num_stations, 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
      user_sum[static_cast<std::size_t>(lp.var_user[v])] += w[v];
      cap_sum[static_cast<std::size_t>(lp.var_station[v])] += cap_coef[v] * w[v];
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

  LPSolution extract() {
    LPSolution sol;
    sol.status = LPStatus::optimal;
    sol.w.resize(nv);
    for (int attempt = 0;; ++attempt) {
      for (std::size_t v = 0; v < nv; ++v) {
        sol.w[v] = std::clamp(variable_value(v), 0.0, 1.0);
      }
      if (solution_violation(sol.w) <= kSolutionTol) break;
      if (attempt >= 2) {
        throw SolverFailureError("solution fails the feasibility check after refactoring");
      }
      refactor();
    }
    sol.objective = kernels::dot(lp.cost, sol.w);
    return sol;
  }

  LPSolution infeasible_solution() const {
    LPSolution sol;
    sol.status = LPStatus::infeasible;
    sol.objective = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
};

SimplexSolver::SimplexSolver(AssignmentLP lp)
    : impl_(std::make_unique<Impl>(std::move(lp))) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

const AssignmentLP& SimplexSolver::lp() const { return impl_->lp; }

LPSolution SimplexSolver::solve() {
  if (!impl_->phase1()) return impl_->infeasible_solution();
  impl_->run_phase(impl_->obj);
  return impl_->extract();
}

LPSolution SimplexSolver::resolve(std::span<const double> variable_costs) {
  if (variable_costs.size() != impl_->nv) {
    throw InvalidInputError("resolve: cost vector has wrong length");
  }
  if (!impl_->has_feasible_basis) {
    throw InvalidInputError("resolve requires a prior successful solve");
  }
  for (std::size_t v = 0; v < impl_->nv; ++v) {
    impl_->lp.cost[v] = variable_costs[v];
    impl_->obj[v] = variable_costs[v];
  }
  impl_->bland = false;
  impl_->degenerate_streak = 0;
  impl_->iterations = 0;
  impl_->run_phase(impl_->obj);
  return impl_->extract();
}

LPSolution SimplexSolver::feasible_point() {
  if (!impl_->phase1()) return impl_->infeasible_solution();
  return impl_->extract();
}

LPSolution solve(const AssignmentLP& lp) { return SimplexSolver(lp).solve(); }

LPSolution find_feasible_point(const AssignmentLP& lp) {
  return SimplexSolver(lp).feasible_point();
}

}  // namespace greencell
