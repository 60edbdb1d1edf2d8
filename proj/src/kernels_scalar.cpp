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

// Reference kernels. This translation unit is compiled with
// -ffp-contract=off; the AVX2 backend mirrors each expression operation for
// operation, so the two must stay in sync (see test_kernels.cpp).

#include "memcl/simd.hpp"

#include <cmath>

namespace memcl::simd {
namespace {

void accumulate_row(float* acc, const float* row, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += row[i];
}

void first_order_step(float* x, const float* drive, float k, float gain, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] + k * ((gain * drive[i]) - x[i]);
}

void trace_step(float* x, const std::uint8_t* spikes, float dt, float inv_tau, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = x[i] + dt * (static_cast<float>(spikes[i]) - (inv_tau * x[i]));
    }
}

void multiply_add(float* acc, const float* a, const float* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + (a[i] * b[i]);
}

std::size_t find_exceeding(const float* x, float threshold, std::size_t n, std::uint32_t* out) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(x[i]) >= threshold) out[count++] = static_cast<std::uint32_t>(i);
    }
    return count;
}

}  // namespace

namespace detail {
const Kernels scalar_kernels = {
    &accumulate_row, &first_order_step, &trace_step, &multiply_add, &find_exceeding,
};
}  // namespace detail

}  // namespace memcl::simd
