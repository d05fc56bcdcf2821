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

#if defined(__aarch64__)

#include <arm_neon.h>

namespace iontrap::simd::neon {

namespace {

inline const double *raw(const cplx *p) { return reinterpret_cast<const double *>(p); }
inline double *raw(cplx *p) { return reinterpret_cast<double *>(p); }

// One complex lane per float64x2_t; acc_r holds (ar*xr, ai*xr), acc_i holds
// (ar*xi, ai*xi).
inline cplx dot_row(const double *a, const double *x, std::size_t n) {
    float64x2_t acc_r0 = vdupq_n_f64(0.0), acc_i0 = vdupq_n_f64(0.0);
    float64x2_t acc_r1 = vdupq_n_f64(0.0), acc_i1 = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t a0 = vld1q_f64(a + 2 * j);
        const float64x2_t a1 = vld1q_f64(a + 2 * j + 2);
        const float64x2_t x0 = vld1q_f64(x + 2 * j);
        const float64x2_t x1 = vld1q_f64(x + 2 * j + 2);
        acc_r0 = vfmaq_laneq_f64(acc_r0, a0, x0, 0);
        acc_i0 = vfmaq_laneq_f64(acc_i0, a0, x0, 1);
        acc_r1 = vfmaq_laneq_f64(acc_r1, a1, x1, 0);
        acc_i1 = vfmaq_laneq_f64(acc_i1, a1, x1, 1);
    }
    for (; j < n; ++j) {
        const float64x2_t a0 = vld1q_f64(a + 2 * j);
        const float64x2_t x0 = vld1q_f64(x + 2 * j);
        acc_r0 = vfmaq_laneq_f64(acc_r0, a0, x0, 0);
        acc_i0 = vfmaq_laneq_f64(acc_i0, a0, x0, 1);
    }
    const float64x2_t r = vaddq_f64(acc_r0, acc_r1);
    const float64x2_t i = vaddq_f64(acc_i0, acc_i1);
    return {vgetq_lane_f64(r, 0) - vgetq_lane_f64(i, 1), vgetq_lane_f64(r, 1) + vgetq_lane_f64(i, 0)};
}

}  // namespace

void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols) {
    const double *xr = raw(x);
    for (std::size_t i = 0; i < rows; ++i) y[i] = dot_row(raw(a + i * cols), xr, cols);
}

cplx cdot(const cplx *a, const cplx *b, std::size_t n) { return dot_row(raw(a), raw(b), n); }

double norm2(const cplx *x, std::size_t n) {
    const double *xr = raw(x);
    float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t v0 = vld1q_f64(xr + 2 * j);
        const float64x2_t v1 = vld1q_f64(xr + 2 * j + 2);
        acc0 = vfmaq_f64(acc0, v0, v0);
        acc1 = vfmaq_f64(acc1, v1, v1);
    }
    for (; j < n; ++j) {
        const float64x2_t v0 = vld1q_f64(xr + 2 * j);
        acc0 = vfmaq_f64(acc0, v0, v0);
    }
    return vaddvq_f64(vaddq_f64(acc0, acc1));
}

void cmul_inplace(const cplx *a, cplx *x, std::size_t n) {
    const double *ar = raw(a);
    double *xr = raw(x);
    for (std::size_t j = 0; j < n; ++j) {
        const float64x2_t p = vld1q_f64(ar + 2 * j);
        const float64x2_t q = vld1q_f64(xr + 2 * j);
        // (pr*qr, pr*qi) + (-pi*qi, pi*qr)
        const float64x2_t t1 = vmulq_laneq_f64(q, p, 0);
        const float64x2_t qswap = vextq_f64(q, q, 1);
        const float64x2_t sign = {-1.0, 1.0};
        const float64x2_t t2 = vmulq_f64(vmulq_laneq_f64(qswap, p, 1), sign);
        vst1q_f64(xr + 2 * j, vaddq_f64(t1, t2));
    }
}

}  // namespace iontrap::simd::neon

#endif
