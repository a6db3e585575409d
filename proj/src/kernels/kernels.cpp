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

#include "greencell/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

#include "greencell/errors.hpp"

namespace greencell::kernels {

namespace {

struct DispatchTable {
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  double (*sum)(std::span<const double>);
  void (*scale)(std::span<double>, double);
  void (*reduced_costs)(std::span<const double>, std::span<const double>,
                        std::span<const std::int32_t>,
                        std::span<const std::int32_t>, std::span<const double>,
                        std::span<double>);
  std::size_t (*argmax_abs)(std::span<const double>);
};

constexpr DispatchTable kScalarTable = {
    &scalar::dot, &scalar::axpy,          &scalar::sum,
    &scalar::scale, &scalar::reduced_costs, &scalar::argmax_abs,
};

#if defined(GREENCELL_HAVE_AVX2)
constexpr DispatchTable kAvx2Table = {
    &avx2::dot, &avx2::axpy,          &avx2::sum,
    &avx2::scale, &avx2::reduced_costs, &avx2::argmax_abs,
};
#endif

bool cpu_has_avx2() {
#if defined(GREENCELL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("GREENCELL_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
    // unknown or unsupported value: fall through to auto-detection
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

const DispatchTable* table_for(Backend b) {
#if defined(GREENCELL_HAVE_AVX2)
  if (b == Backend::avx2) return &kAvx2Table;
#endif
  (void)b;
  return &kScalarTable;
}

struct State {
  Backend backend;
  const DispatchTable* table;
  State() : backend(detect_backend()), table(table_for(backend)) {}
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw InvalidInputError(std::string("kernel backend not supported here: ") +
                            backend_name(b));
  }
  state().backend = b;
  state().table = table_for(b);
}

void reset_backend() {
  state().backend = detect_backend();
  state().table = table_for(state().backend);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "?";
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return state().table->dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  state().table->axpy(alpha, x, y);
}

double sum(std::span<const double> x) { return state().table->sum(x); }

void scale(std::span<double> x, double alpha) { state().table->scale(x, alpha); }

void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out) {
  assert(cost.size() == demand.size() && cost.size() == user_row.size() &&
         cost.size() == cap_row.size() && cost.size() == out.size());
  state().table->reduced_costs(cost, demand, user_row, cap_row, y, out);
}

std::size_t argmax_abs(std::span<const double> x) {
  assert(!x.empty());
  return state().table->argmax_abs(x);
}

}  // namespace greencell::kernels
