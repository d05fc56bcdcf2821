// Copyright 2026 The iontrap Authors
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

#include "iontrap/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define IONTRAP_AVX2 __attribute__((target("avx2,fma")))

namespace iontrap::simd::avx2 {

namespace {

inline const double *raw(const cplx *p) { return reinterpret_cast<const double *>(p); }
inline double *raw(cplx *p) { return reinterpret_cast<double *>(p); }

// Folds the (re*re, im*re) and (re*im, im*im) accumulators of a complex dot
// product into a single (re, im) pair.
IONTRAP_AVX2 inline __m128d fold(__m256d acc_r, __m256d acc_i) {
    const __m256d swapped = _mm256_permute_pd(acc_i, 0x5);
    const __m256d z = _mm256_addsub_pd(acc_r, swapped);
    return _mm_add_pd(_mm256_castpd256_pd128(z), _mm256_extractf128_pd(z, 1));
}

IONTRAP_AVX2 inline cplx dot_row(const double *a, const double *x, std::size_t n) {
    __m256d acc_r0 = _mm256_setzero_pd(), acc_i0 = _mm256_setzero_pd();
    __m256d acc_r1 = _mm256_setzero_pd(), acc_i1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d a0 = _mm256_loadu_pd(a + 2 * j);
        const __m256d a1 = _mm256_loadu_pd(a + 2 * j + 4);
        const __m256d x0 = _mm256_loadu_pd(x + 2 * j);
        const __m256d x1 = _mm256_loadu_pd(x + 2 * j + 4);
        acc_r0 = _mm256_fmadd_pd(a0, _mm256_movedup_pd(x0), acc_r0);
        acc_i0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(x0, 0xF), acc_i0);
        acc_r1 = _mm256_fmadd_pd(a1, _mm256_movedup_pd(x1), acc_r1);
        acc_i1 = _mm256_fmadd_pd(a1, _mm256_permute_pd(x1, 0xF), acc_i1);
    }
    for (; j + 2 <= n; j += 2) {
        const __m256d a0 = _mm256_loadu_pd(a + 2 * j);
        const __m256d x0 = _mm256_loadu_pd(x + 2 * j);
        acc_r0 = _mm256_fmadd_pd(a0, _mm256_movedup_pd(x0), acc_r0);
        acc_i0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(x0, 0xF), acc_i0);
    }
    const __m128d s = fold(_mm256_add_pd(acc_r0, acc_r1), _mm256_add_pd(acc_i0, acc_i1));
    double out[2];
    _mm_storeu_pd(out, s);
    for (; j < n; ++j) {
        const double ar = a[2 * j], ai = a[2 * j + 1];
        const double br = x[2 * j], bi = x[2 * j + 1];
        out[0] += ar * br - ai * bi;
        out[1] += ar * bi + ai * br;
    }
    return {out[0], out[1]};
}

}  // namespace

IONTRAP_AVX2 void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols) {
    const double *xr = raw(x);
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot_row(raw(a + i * cols), xr, cols);
}

IONTRAP_AVX2 cplx cdot(const cplx *a, const cplx *b, std::size_t n) { return dot_row(raw(a), raw(b), n); }

IONTRAP_AVX2 double norm2(const cplx *x, std::size_t n) {
    const double *xr = raw(x);
    const std::size_t m = 2 * n;
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= m; j += 8) {
        const __m256d v0 = _mm256_loadu_pd(xr + j);
        const __m256d v1 = _mm256_loadu_pd(xr + j + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; j + 4 <= m; j += 4) {
        const __m256d v0 = _mm256_loadu_pd(xr + j);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    double total = _mm_cvtsd_f64(s);
    for (; j < m; ++j) total += xr[j] * xr[j];
    return total;
}

IONTRAP_AVX2 void cmul_inplace(const cplx *a, cplx *x, std::size_t n) {
    const double *ar = raw(a);
    double *xr = raw(x);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const __m256d p = _mm256_loadu_pd(ar + 2 * j);
        const __m256d q = _mm256_loadu_pd(xr + 2 * j);
        const __m256d t1 = _mm256_mul_pd(_mm256_movedup_pd(p), q);
        const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(p, 0xF), _mm256_permute_pd(q, 0x5));
        _mm256_storeu_pd(xr + 2 * j, _mm256_addsub_pd(t1, t2));
    }
    for (; j < n; ++j) {
        const double pr = ar[2 * j], pi = ar[2 * j + 1];
        const double qr = xr[2 * j], qi = xr[2 * j + 1];
        xr[2 * j] = pr * qr - pi * qi;
        xr[2 * j + 1] = pr * qi + pi * qr;
    }
}

}  // namespace iontrap::simd::avx2

#endif
