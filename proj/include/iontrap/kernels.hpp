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

#pragma once

// Dense complex inner loops used by the propagators.
//
// Every kernel has a portable scalar reference implementation and, where the
// host supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The
// variant is chosen once at first use from the CPU feature bits; tests pin a
// specific ISA through set_active_isa() and compare against the scalar path.
//
// All arrays are interleaved (re, im) doubles, i.e. std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>

namespace iontrap::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    // y = A x, A row-major rows x cols.
    void (*cmatvec)(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols);
    // sum_i a_i * b_i (no conjugation).
    cplx (*cdot)(const cplx *a, const cplx *b, std::size_t n);
    // sum_i |x_i|^2.
    double (*norm2)(const cplx *x, std::size_t n);
    // x_i *= a_i.
    void (*cmul_inplace)(const cplx *a, cplx *x, std::size_t n);
};

bool isa_supported(Isa isa);
Isa detected_isa();
Isa active_isa();
// Throws std::invalid_argument if the ISA is not supported on this host.
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

const KernelTable &kernels();
const KernelTable &kernels(Isa isa);

namespace scalar {
void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols);
cplx cdot(const cplx *a, const cplx *b, std::size_t n);
double norm2(const cplx *x, std::size_t n);
void cmul_inplace(const cplx *a, cplx *x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols);
cplx cdot(const cplx *a, const cplx *b, std::size_t n);
double norm2(const cplx *x, std::size_t n);
void cmul_inplace(const cplx *a, cplx *x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void cmatvec(const cplx *a, const cplx *x, cplx *y, std::size_t rows, std::size_t cols);
cplx cdot(const cplx *a, const cplx *b, std::size_t n);
double norm2(const cplx *x, std::size_t n);
void cmul_inplace(const cplx *a, cplx *x, std::size_t n);
}  // namespace neon
#endif

}  // namespace iontrap::simd
