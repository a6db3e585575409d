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

// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// it must only be entered after the runtime CPU check in kernels.cpp.

#include "greencell/kernels.hpp"

#if defined(GREENCELL_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace greencell::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::size_t k = 0;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + k),
                           _mm256_loadu_pd(b.data() + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + k + 4),
                           _mm256_loadu_pd(b.data() + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + k),
                           _mm256_loadu_pd(b.data() + k), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d vy = _mm256_loadu_pd(y.data() + k);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + k), vy);
    _mm256_storeu_pd(y.data() + k, vy);
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  std::size_t k = 0;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + k));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + k + 4));
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + k));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += x[k];
  return acc;
}

void scale(std::span<double> x, double alpha) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(x.data() + k,
                     _mm256_mul_pd(va, _mm256_loadu_pd(x.data() + k)));
  }
  for (; k < n; ++k) x[k] *= alpha;
}

void reduced_costs(std::span<const double> cost, std::span<const double> demand,
                   std::span<const std::int32_t> user_row,
                   std::span<const std::int32_t> cap_row,
                   std::span<const double> y, std::span<double> out) {
  const std::size_t n = cost.size();
  std::size_t v = 0;
  for (; v + 4 <= n; v += 4) {
    const __m128i iu = _mm_loadu_si128(
        reinterpret_cast<const __m128i*>(user_row.data() + v));
    const __m128i ic = _mm_loadu_si128(
        reinterpret_cast<const __m128i*>(cap_row.data() + v));
    const __m256d yu = _mm256_i32gather_pd(y.data(), iu, 8);
    const __m256d yc = _mm256_i32gather_pd(y.data(), ic, 8);
    const __m256d base =
        _mm256_sub_pd(_mm256_loadu_pd(cost.data() + v), yu);
    const __m256d r =
        _mm256_fnmadd_pd(_mm256_loadu_pd(demand.data() + v), yc, base);
    _mm256_storeu_pd(out.data() + v, r);
  }
  for (; v < n; ++v) {
    out[v] = cost[v] - y[static_cast<std::size_t>(user_row[v])] -
             demand[v] * y[static_cast<std::size_t>(cap_row[v])];
  }
}

std::size_t argmax_abs(std::span<const double> x) {
  const std::size_t n = x.size();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  double best_abs = -1.0;
  std::size_t best = 0;
  if (n >= 4) {
    __m256d vmax = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x.data()));
    __m256i vidx = _mm256_set_epi64x(3, 2, 1, 0);
    __m256i cur = vidx;
    const __m256i step = _mm256_set1_epi64x(4);
    for (k = 4; k + 4 <= n; k += 4) {
      cur = _mm256_add_epi64(cur, step);
      const __m256d va =
          _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x.data() + k));
      // strict greater-than keeps the earliest block per lane
      const __m256d gt = _mm256_cmp_pd(va, vmax, _CMP_GT_OQ);
      vmax = _mm256_blendv_pd(vmax, va, gt);
      vidx = _mm256_castpd_si256(_mm256_blendv_pd(
          _mm256_castsi256_pd(vidx), _mm256_castsi256_pd(cur), gt));
    }
    alignas(32) double vals[4];
    alignas(32) std::int64_t idxs[4];
    _mm256_store_pd(vals, vmax);
    _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), vidx);
    for (int lane = 0; lane < 4; ++lane) {
      const auto idx = static_cast<std::size_t>(idxs[lane]);
      if (vals[lane] > best_abs ||
          (vals[lane] == best_abs && idx < best)) {
        best_abs = vals[lane];
        best = idx;
      }
    }
  }
  for (; k < n; ++k) {
    const double a = std::abs(x[k]);
    if (a > best_abs) {
      best_abs = a;
      best = k;
    }
  }
  return best;
}

}  // namespace greencell::kernels::avx2

#endif  // GREENCELL_HAVE_AVX2
