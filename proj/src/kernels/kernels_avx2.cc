// Copyright 2026 The DDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2/FMA variants. Compiled with -mavx2 -mfma and only reached through
// the dispatcher after a CPUID check.

#include <immintrin.h>

#include <limits>

#include "dda/kernels.h"

namespace dda::kernels::avx2 {

namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

inline double HorizontalMin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_min_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_min_sd(pair, swapped));
}

}  // namespace

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void SgdFactorStep(double* p, double* q, std::size_t n, double err,
                   double lr, double reg) {
  const __m256d verr = _mm256_set1_pd(err);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d vreg = _mm256_set1_pd(reg);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pi = _mm256_loadu_pd(p + i);
    const __m256d qi = _mm256_loadu_pd(q + i);
    // err * q - reg * p
    const __m256d gp = _mm256_fmsub_pd(verr, qi, _mm256_mul_pd(vreg, pi));
    const __m256d gq = _mm256_fmsub_pd(verr, pi, _mm256_mul_pd(vreg, qi));
    _mm256_storeu_pd(p + i, _mm256_fmadd_pd(vlr, gp, pi));
    _mm256_storeu_pd(q + i, _mm256_fmadd_pd(vlr, gq, qi));
  }
  for (; i < n; ++i) {
    const double pi = p[i];
    const double qi = q[i];
    p[i] = pi + lr * (err * qi - reg * pi);
    q[i] = qi + lr * (err * pi - reg * qi);
  }
}

double MinSqDistance3(const double* x, const double* y, const double* z,
                      std::size_t n, double qx, double qy, double qz,
                      std::size_t skip) {
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);
  const __m256d vinf = _mm256_set1_pd(inf);
  const __m256i lane = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i vskip = _mm256_set1_epi64x(static_cast<long long>(skip));
  __m256d best = vinf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vqx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vqy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z + i), vqz);
    // Same association as the scalar loop: (dx*dx + dy*dy) + dz*dz.
    __m256d d = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
        _mm256_mul_pd(dz, dz));
    const __m256i idx =
        _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(i)), lane);
    const __m256d skipped =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(idx, vskip));
    d = _mm256_blendv_pd(d, vinf, skipped);
    best = _mm256_min_pd(best, d);
  }
  double result = HorizontalMin(best);
  for (; i < n; ++i) {
    if (i == skip) continue;
    const double dx = x[i] - qx;
    const double dy = y[i] - qy;
    const double dz = z[i] - qz;
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < result) result = d;
  }
  return result;
}

}  // namespace dda::kernels::avx2
