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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace memcl::simd {

enum class Backend { kScalar, kAvx2 };

/// Hot array kernels of the simulator. Both backends evaluate the same
/// per-element expression with contraction disabled, so scalar and AVX2
/// results are bit-identical and backend choice never changes a run.
struct Kernels {
    /// acc[i] += row[i]
    void (*accumulate_row)(float* acc, const float* row, std::size_t n);
    /// x[i] += k * (gain * drive[i] - x[i])
    void (*first_order_step)(float* x, const float* drive, float k, float gain, std::size_t n);
    /// x[i] += dt * (spikes[i] - inv_tau * x[i])
    void (*trace_step)(float* x, const std::uint8_t* spikes, float dt, float inv_tau,
                       std::size_t n);
    /// acc[i] += a[i] * b[i]
    void (*multiply_add)(float* acc, const float* a, const float* b, std::size_t n);
    /// writes indices with |x[i]| >= threshold to out; returns how many
    std::size_t (*find_exceeding)(const float* x, float threshold, std::size_t n,
                                  std::uint32_t* out);
};

bool avx2_available() noexcept;
Backend active_backend() noexcept;

/// Selects a backend explicitly; throws std::runtime_error if unsupported
/// on this machine.
void select_backend(Backend backend);

/// Accepts "auto", "scalar" or "avx2"; returns false on an unknown name.
bool select_backend(std::string_view name);

const char* backend_name(Backend backend) noexcept;

/// The currently selected kernel table.
const Kernels& kernels() noexcept;

namespace detail {
extern const Kernels scalar_kernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const Kernels avx2_kernels;
#endif
}  // namespace detail

}  // namespace memcl::simd
