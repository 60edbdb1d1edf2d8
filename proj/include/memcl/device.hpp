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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memcl/rng.hpp"

namespace memcl {

/// One programmable conductance state: mean and device-to-device standard
/// deviation of the realized conductance, both in microsiemens.
struct ConductanceLevel {
    double mean_us = 0.0;
    double std_us = 0.0;
};

/// Ordered table of programmable conductance levels for a 1T1R cell.
///
/// Means must be strictly increasing and positive, stds non-negative,
/// 2..64 levels. The built-in table has ten equispaced levels spanning
/// 40-283 uS (27 uS apart) with std = 5% of each mean; per-level data can
/// be supplied via CSV instead.
class DeviceLevelTable {
public:
    explicit DeviceLevelTable(std::vector<ConductanceLevel> levels);

    static DeviceLevelTable default_table(double std_fraction = 0.05);

    /// Strict CSV parser: header `level,mean_uS,std_uS`, level column must
    /// be 0..L-1 in order; unsorted, duplicate or malformed rows rejected.
    static DeviceLevelTable from_csv(const std::string& path);

    std::size_t size() const noexcept { return levels_.size(); }
    const ConductanceLevel& level(std::size_t i) const { return levels_.at(i); }
    std::span<const ConductanceLevel> levels() const noexcept { return levels_; }

    double min_mean_us() const noexcept { return levels_.front().mean_us; }
    double max_mean_us() const noexcept { return levels_.back().mean_us; }
    double mean_of_means_us() const noexcept;
    /// (max - min) / (L - 1), the average conductance resolution.
    double average_spacing_us() const noexcept;

    std::string to_csv() const;

private:
    std::vector<ConductanceLevel> levels_;
};

/// A single memristor: the level it was last programmed to and the
/// conductance realized by that programming event.
struct MemristorDevice {
    int level_index = 0;
    float conductance_us = 0.0f;
};

/// n_mem parallel devices forming one synaptic weight.
struct MultiMemristorWeight {
    std::vector<MemristorDevice> devices;
};

enum class StepDirection { kUp, kDown };

/// Round-robin programming arbiter, one per crossbar: the device selected
/// for the next programming event is counter % n_mem, and the counter
/// advances once per event.
struct UpdateArbiter {
    std::uint64_t counter = 0;
};

/// Bias-column mapping from effective conductance to signed weight:
/// w = (G_effective - g_bias) / g_scale.
struct WeightMapping {
    double g_bias_us = 0.0;
    double g_scale_us = 1.0;

    /// Mapping that centers the signed weights at zero (g_bias = n_mem x
    /// mean of level means) and spans [-0.5, +0.5] independently of n_mem
    /// (g_scale = n_mem x mean range).
    static WeightMapping balanced(const DeviceLevelTable& table, int n_mem);
};

/// Programs a device to `target_level`: the realized conductance is drawn
/// from Normal(mean, std) of that level, clamped positive. Throws
/// std::out_of_range for an invalid level.
MemristorDevice program_level(const MemristorDevice& device, int target_level,
                              const DeviceLevelTable& table, Rng& rng);

/// Reprograms the arbiter-selected device one level up or down; saturates
/// at the boundary levels (the device is rewritten at its current level,
/// redrawing the programming noise). The arbiter advances regardless.
void step_weight(MultiMemristorWeight& weight, StepDirection direction, UpdateArbiter& arbiter,
                 const DeviceLevelTable& table, Rng& rng);

double effective_conductance_us(std::span<const MemristorDevice> devices) noexcept;

/// Signed weight value of a multi-memristor weight under a mapping.
double read_weight(const MultiMemristorWeight& weight, const WeightMapping& mapping) noexcept;

/// Dense rows x cols crossbar of multi-memristor weights with a cached
/// signed-value matrix for the forward pass. Values are refreshed on every
/// programming event; reads are exact (programming variability only) unless
/// an additive read-noise std is configured.
class Crossbar {
public:
    Crossbar(int rows, int cols, int n_mem, DeviceLevelTable table, WeightMapping mapping);

    /// Programs every device to an independently uniform random level.
    void randomize(Rng& rng);

    /// One arbiter-selected, one-level programming event on weight (i, j).
    void program_step(int row, int col, StepDirection direction, Rng& rng);

    float value(int row, int col) const { return values_[index(row, col)]; }
    const float* row_values(int row) const { return values_.data() + index(row, 0); }
    std::span<const float> values() const noexcept { return values_; }

    std::span<const MemristorDevice> devices(int row, int col) const {
        return {devices_.data() + index(row, col) * static_cast<std::size_t>(n_mem_),
                static_cast<std::size_t>(n_mem_)};
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int n_mem() const noexcept { return n_mem_; }
    std::size_t weight_count() const noexcept { return values_.size(); }

    const DeviceLevelTable& table() const noexcept { return table_; }
    const WeightMapping& mapping() const noexcept { return mapping_; }
    UpdateArbiter& arbiter() noexcept { return arbiter_; }
    const UpdateArbiter& arbiter() const noexcept { return arbiter_; }

    /// Signed-weight change equivalent to one conductance level step.
    float level_step_weight_units() const noexcept {
        return static_cast<float>(table_.average_spacing_us() / mapping_.g_scale_us);
    }

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(col);
    }
    void refresh_value(std::size_t weight_index);

    int rows_;
    int cols_;
    int n_mem_;
    DeviceLevelTable table_;
    WeightMapping mapping_;
    UpdateArbiter arbiter_;
    std::vector<MemristorDevice> devices_;
    std::vector<float> values_;
};

/// Crossbar with every device programmed to a uniformly random level.
Crossbar init_crossbar(int rows, int cols, int n_mem, const DeviceLevelTable& table,
                       const WeightMapping& mapping, Rng& rng);

}  // namespace memcl
