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

// AVX2 backend. No FMA: each expression uses the same mul/add/sub sequence
// as the scalar reference so results match bit-for-bit; remainder elements
// reuse the scalar expressions verbatim.

#if defined(__x86_64__) || defined(_M_X64)

#include "memcl/simd.hpp"

#include <cmath>
#include <immintrin.h>

namespace memcl::simd {
namespace {

void accumulate_row(float* acc, const float* row, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 a = _mm256_loadu_ps(acc + i);
        const __m256 r = _mm256_loadu_ps(row + i);
        _mm256_storeu_ps(acc + i, _mm256_add_ps(a, r));
    }
    for (; i < n; ++i) acc[i] += row[i];
}

void first_order_step(float* x, const float* drive, float k, float gain, std::size_t n) {
    const __m256 vk = _mm256_set1_ps(k);
    const __m256 vgain = _mm256_set1_ps(gain);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vx = _mm256_loadu_ps(x + i);
        const __m256 vd = _mm256_loadu_ps(drive + i);
        const __m256 delta = _mm256_sub_ps(_mm256_mul_ps(vgain, vd), vx);
        _mm256_storeu_ps(x + i, _mm256_add_ps(vx, _mm256_mul_ps(vk, delta)));
    }
    for (; i < n; ++i) x[i] = x[i] + k * ((gain * drive[i]) - x[i]);
}

void trace_step(float* x, const std::uint8_t* spikes, float dt, float inv_tau, std::size_t n) {
    const __m256 vdt = _mm256_set1_ps(dt);
    const __m256 vinv = _mm256_set1_ps(inv_tau);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vx = _mm256_loadu_ps(x + i);
        const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(spikes + i));
        const __m256 vs = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
        const __m256 delta = _mm256_sub_ps(vs, _mm256_mul_ps(vinv, vx));
        _mm256_storeu_ps(x + i, _mm256_add_ps(vx, _mm256_mul_ps(vdt, delta)));
    }
    for (; i < n; ++i) {
        x[i] = x[i] + dt * (static_cast<float>(spikes[i]) - (inv_tau * x[i]));
    }
}

void multiply_add(float* acc, const float* a, const float* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        const __m256 vacc = _mm256_loadu_ps(acc + i);
        _mm256_storeu_ps(acc + i, _mm256_add_ps(vacc, _mm256_mul_ps(va, vb)));
    }
    for (; i < n; ++i) acc[i] = acc[i] + (a[i] * b[i]);
}

std::size_t find_exceeding(const float* x, float threshold, std::size_t n, std::uint32_t* out) {
    const __m256 sign_mask = _mm256_set1_ps(-0.0f);
    const __m256 vthresh = _mm256_set1_ps(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vabs = _mm256_andnot_ps(sign_mask, _mm256_loadu_ps(x + i));
        const __m256 cmp = _mm256_cmp_ps(vabs, vthresh, _CMP_GE_OQ);
        unsigned mask = static_cast<unsigned>(_mm256_movemask_ps(cmp));
        while (mask != 0) {
            const unsigned bit = static_cast<unsigned>(__builtin_ctz(mask));
            out[count++] = static_cast<std::uint32_t>(i + bit);
            mask &= mask - 1;
        }
    }
    for (; i < n; ++i) {
        if (std::fabs(x[i]) >= threshold) out[count++] = static_cast<std::uint32_t>(i);
    }
    return count;
}

}  // namespace

namespace detail {
const Kernels avx2_kernels = {
    &accumulate_row, &first_order_step, &trace_step, &multiply_add, &find_exceeding,
};
}  // namespace detail

}  // namespace memcl::simd

#endif  // x86_64
