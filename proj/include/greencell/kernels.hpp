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

#ifndef GREENCELL_KERNELS_HPP
#define GREENCELL_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <span>

// Dense double-precision inner loops shared by the LP engine and the
// MM optimizer. Every kernel has a scalar reference implementation and,
// on x86-64 with AVX2+FMA, a vectorized variant selected at runtime.
// The two variants agree to rounding error (reductions may reassociate);
// index-returning kernels agree exactly, first occurrence wins on ties.
//
// Backend selection is process-global and deterministic: auto-detection
// picks the best supported variant, the GREENCELL_KERNELS environment
// variable ("scalar" or "avx2") or set_backend() overrides it.

namespace greencell::kernels {

enum class Backend { scalar, avx2 };

/// Backend currently wired into the dispatch table.
Backend active_backend();

/// True iff this process can execute the given backend.
bool backend_supported(Backend b);

/// Force a backend. Throws InvalidInputError if unsupported on this CPU.
void set_backend(Backend b);

/// Re-run auto-detection (honors GREENCELL_KERNELS).
void reset_backend();

const char* backend_name(Backend b);

/// sum_k a[k]*b[k]; spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

/// y[k] += alpha * x[k]; spans must have equal length.
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_k x[k].
double sum(std::span<const double> x);

/// x[k] *= alpha.
void scale(std::span<double> x, double alpha);

/// out[v] = cost[v] - y[user_row[v]] - demand[v] * y[cap_row[v]].
/// The pricing loop of the assignment LP: every column has one unit
/// entry in a user row and one demand entry in a capacity row.
void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out);

/// Index of the first element attaining max |x[k]|. x must be nonempty.
std::size_t argmax_abs(std::span<const double> x);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum(std::span<const double> x);
void scale(std::span<double> x, double alpha);
void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out);
std::size_t argmax_abs(std::span<const double> x);
}  // namespace scalar

#if defined(GREENCELL_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum(std::span<const double> x);
void scale(std::span<double> x, double alpha);
void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out);
std::size_t argmax_abs(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace greencell::kernels

#endif  // GREENCELL_KERNELS_HPP
