/*
 * Copyright 2026 memcl contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "memcl/simd.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace memcl::simd {
namespace {

#if defined(__x86_64__) || defined(_M_X64)
constexpr bool kHaveAvx2Build = true;
#else
constexpr bool kHaveAvx2Build = false;
#endif

Backend detect_default() noexcept {
    return avx2_available() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend> g_backend{detect_default()};

const Kernels* table_for(Backend backend) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (backend == Backend::kAvx2) return &detail::avx2_kernels;
#endif
    (void)backend;
    return &detail::scalar_kernels;
}

std::atomic<const Kernels*> g_kernels{table_for(detect_default())};

}  // namespace

bool avx2_available() noexcept {
    if constexpr (kHaveAvx2Build) {
        return __builtin_cpu_supports("avx2") != 0;
    }
    return false;
}

Backend active_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }

void select_backend(Backend backend) {
    if (backend == Backend::kAvx2 && !avx2_available()) {
        throw std::runtime_error("AVX2 kernel backend requested but not supported on this CPU");
    }
    g_backend.store(backend, std::memory_order_relaxed);
    g_kernels.store(table_for(backend), std::memory_order_relaxed);
}

bool select_backend(std::string_view name) {
    if (name == "auto") {
        select_backend(detect_default());
        return true;
    }
    if (name == "scalar") {
        select_backend(Backend::kScalar);
        return true;
    }
    if (name == "avx2") {
        select_backend(Backend::kAvx2);
        return true;
    }
    return false;
}

const char* backend_name(Backend backend) noexcept {
    return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

const Kernels& kernels() noexcept { return *g_kernels.load(std::memory_order_relaxed); }

}  // namespace memcl::simd
