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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace memcl {

/// Operation kinds tallied during the parameter-update phase. The *_small
/// kinds are the shared-coefficient array, which is priced separately from
/// the per-weight SRAM blocks.
enum class OpKind : int {
    kSramRead16 = 0,
    kSramWrite16,
    kSramRead32,
    kSramWrite32,
    kSramRead16Small,
    kSramWrite16Small,
    kMemristorProgram,
    kMemristorRead,
    kRngDraw,
    kExpEval,
    kBilinearEval,
    kMultiply,
    kAddCompare,
    kCount
};

constexpr int kOpKindCount = static_cast<int>(OpKind::kCount);

std::string_view op_kind_name(OpKind kind) noexcept;
bool op_kind_from_name(std::string_view name, OpKind& kind) noexcept;

/// Monotone tallies of parameter-update operations plus the meta-tallies
/// used by the evaluation criteria (eligibility events, programming events,
/// metaplastic coefficient updates, samples processed).
struct OpCounters {
    std::array<std::uint64_t, kOpKindCount> tally{};
    std::uint64_t eligibility_events = 0;
    std::uint64_t program_events = 0;
    std::uint64_t m_coeff_updates = 0;
    std::uint64_t samples = 0;

    void record(OpKind kind, std::uint64_t n = 1) noexcept {
        tally[static_cast<int>(kind)] += n;
    }
    std::uint64_t count(OpKind kind) const noexcept { return tally[static_cast<int>(kind)]; }
    void merge(const OpCounters& other) noexcept;

    std::string to_json() const;  // stable key order
    static OpCounters from_json_file(const std::string& path);
};

/// Per-operation energy costs in picojoules. Defaults are placeholder
/// values (the reference design's absolute numbers are not public); every
/// evaluation in this project uses count ratios, never absolute joules.
struct EnergyCostTable {
    std::array<double, kOpKindCount> cost_pj{};

    static EnergyCostTable defaults();
    /// CSV `op_kind,pJ`; unknown kinds and malformed rows are rejected.
    static EnergyCostTable from_csv(const std::string& path);
    double cost(OpKind kind) const noexcept { return cost_pj[static_cast<int>(kind)]; }
};

/// Energy summary of a run: total and per-sample energy plus the breakdown
/// into computation / SRAM / memristor groups (sums are exact by
/// construction).
struct EnergyReport {
    double total_pj = 0.0;
    double per_sample_pj = 0.0;
    double computation_pj = 0.0;
    double sram_pj = 0.0;
    double memristor_pj = 0.0;
    std::uint64_t samples = 0;
    OpCounters counters;

    static EnergyReport make(const OpCounters& counters, const EnergyCostTable& costs,
                             std::uint64_t n_samples);
    std::string to_json() const;
};

}  // namespace memcl
