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

// Reference kernels. These define the semantics the vector variants are
// tested against; keep them obvious.

#include <cmath>
#include <cstddef>

#include "greencell/kernels.hpp"

namespace greencell::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

void scale(std::span<double> x, double alpha) {
  for (double& v : x) v *= alpha;
}

void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out) {
  for (std::size_t v = 0; v < cost.size(); ++v) {
    out[v] = cost[v] - y[static_cast<std::size_t>(user_row[v])] -
             demand[v] * y[static_cast<std::size_t>(cap_row[v])];
  }
}

std::size_t argmax_abs(std::span<const double> x) {
  std::size_t best = 0;
  double best_abs = std::abs(x[0]);
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double a = std::abs(x[k]);
    if (a > best_abs) {
      best_abs = a;
      best = k;
    }
  }
  return best;
}

}  // namespace greencell::kernels::scalar
