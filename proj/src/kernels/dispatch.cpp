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

#include <atomic>
#include <stdexcept>
#include <string>

#include "iontrap/kernels.hpp"

namespace iontrap::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::cmatvec, &scalar::cdot, &scalar::norm2, &scalar::cmul_inplace};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{&avx2::cmatvec, &avx2::cdot, &avx2::norm2, &avx2::cmul_inplace};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{&neon::cmatvec, &neon::cdot, &neon::norm2, &neon::cmul_inplace};
#endif

std::atomic<int> &active_slot() {
    static std::atomic<int> slot{static_cast<int>(detected_isa())};
    return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detected_isa() {
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("instruction set '" + std::string(isa_name(isa)) + "' is not supported on this host");
    }
    active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "neon") return Isa::neon;
    throw std::invalid_argument("unknown instruction set '" + std::string(name) + "' (expected scalar, avx2 or neon)");
}

const KernelTable &kernels(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("instruction set '" + std::string(isa_name(isa)) + "' is not supported on this host");
    }
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2:
            return kAvx2Table;
#endif
#if defined(__aarch64__)
        case Isa::neon:
            return kNeonTable;
#endif
        default:
            return kScalarTable;
    }
}

const KernelTable &kernels() { return kernels(active_isa()); }

}  // namespace iontrap::simd
