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

namespace iontrap::simd::scalar {

namespace {
inline const double *raw(const cplx *p) { return reinterpret_cast<const double *>(p); }
inline double *raw(cplx *p) { return reinterpret_cast<double *>(p); }
}  // namespace

void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols) {
    const double *xr = raw(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double *row = raw(a + i * cols);
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double ar = row[2 * j], ai = row[2 * j + 1];
            const double br = xr[2 * j], bi = xr[2 * j + 1];
            re += ar * br - ai * bi;
            im += ar * bi + ai * br;
        }
        y[i] = cplx(re, im);
    }
}

cplx cdot(const cplx *a, const cplx *b, std::size_t n) {
    const double *ar = raw(a);
    const double *br = raw(b);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        re += ar[2 * j] * br[2 * j] - ar[2 * j + 1] * br[2 * j + 1];
        im += ar[2 * j] * br[2 * j + 1] + ar[2 * j + 1] * br[2 * j];
    }
    return {re, im};
}

double norm2(const cplx *x, std::size_t n) {
    const double *xr = raw(x);
    double s = 0.0;
    for (std::size_t j = 0; j < 2 * n; ++j) s += xr[j] * xr[j];
    return s;
}

void cmul_inplace(const cplx *a, cplx *x, std::size_t n) {
    const double *ar = raw(a);
    double *xr = raw(x);
    for (std::size_t j = 0; j < n; ++j) {
        const double pr = ar[2 * j], pi = ar[2 * j + 1];
        const double qr = xr[2 * j], qi = xr[2 * j + 1];
        xr[2 * j] = pr * qr - pi * qi;
        xr[2 * j + 1] = pr * qi + pi * qr;
    }
}

}  // namespace iontrap::simd::scalar
