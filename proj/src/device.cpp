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

#include "memcl/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memcl {
namespace {

// Programming can never yield a non-positive conductance; the clamp only
// matters for pathological tables (std comparable to the mean).
constexpr float kMinConductanceUs = 1e-3f;

}  // namespace

DeviceLevelTable::DeviceLevelTable(std::vector<ConductanceLevel> levels)
    : levels_(std::move(levels)) {
    if (levels_.size() < 2 || levels_.size() > 64) {
        throw std::invalid_argument("device level table must have between 2 and 64 levels");
    }
    double previous = 0.0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const auto& lvl = levels_[i];
        if (lvl.mean_us <= 0.0) {
            throw std::invalid_argument("device level means must be positive");
        }
        if (lvl.std_us < 0.0) {
            throw std::invalid_argument("device level stds must be non-negative");
        }
        if (i > 0 && lvl.mean_us <= previous) {
            throw std::invalid_argument("device level means must be strictly increasing");
        }
        previous = lvl.mean_us;
    }
}

DeviceLevelTable DeviceLevelTable::default_table(double std_fraction) {
    std::vector<ConductanceLevel> levels;
    levels.reserve(10);
    for (int k = 0; k < 10; ++k) {
        const double mean = 40.0 + 27.0 * k;
        levels.push_back({mean, std_fraction * mean});
    }
    return DeviceLevelTable(std::move(levels));
}

DeviceLevelTable DeviceLevelTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open device table: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("device table is empty: " + path);
    // tolerate trailing CR from CRLF files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "level,mean_uS,std_uS") {
        throw std::runtime_error("device table header must be 'level,mean_uS,std_uS', got '" +
                                 line + "'");
    }

    std::vector<ConductanceLevel> levels;
    int expected = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string level_str, mean_str, std_str;
        if (!std::getline(row, level_str, ',') || !std::getline(row, mean_str, ',') ||
            !std::getline(row, std_str)) {
            throw std::runtime_error("malformed device table row: '" + line + "'");
        }
        int level = 0;
        double mean = 0.0, stddev = 0.0;
        try {
            std::size_t used = 0;
            level = std::stoi(level_str, &used);
            if (used != level_str.size()) throw std::invalid_argument(level_str);
            mean = std::stod(mean_str, &used);
            if (used != mean_str.size()) throw std::invalid_argument(mean_str);
            stddev = std::stod(std_str, &used);
            if (used != std_str.size()) throw std::invalid_argument(std_str);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed device table row: '" + line + "'");
        }
        if (level != expected) {
            throw std::runtime_error("device table levels must be 0..L-1 in order; saw level " +
                                     std::to_string(level) + " where " +
                                     std::to_string(expected) + " was expected");
        }
        levels.push_back({mean, stddev});
        ++expected;
    }
    return DeviceLevelTable(std::move(levels));
}

double DeviceLevelTable::mean_of_means_us() const noexcept {
    double sum = 0.0;
    for (const auto& lvl : levels_) sum += lvl.mean_us;
    return sum / static_cast<double>(levels_.size());
}

double DeviceLevelTable::average_spacing_us() const noexcept {
    return (max_mean_us() - min_mean_us()) / static_cast<double>(levels_.size() - 1);
}

std::string DeviceLevelTable::to_csv() const {
    std::ostringstream out;
    out << "level,mean_uS,std_uS\n";
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        out << i << ',' << levels_[i].mean_us << ',' << levels_[i].std_us << '\n';
    }
    return out.str();
}

WeightMapping WeightMapping::balanced(const DeviceLevelTable& table, int n_mem) {
    if (n_mem < 1) throw std::invalid_argument("n_mem must be >= 1");
    const double range = table.max_mean_us() - table.min_mean_us();
    return {static_cast<double>(n_mem) * table.mean_of_means_us(),
            static_cast<double>(n_mem) * range};
}

MemristorDevice program_level(const MemristorDevice& device, int target_level,
                              const DeviceLevelTable& table, Rng& rng) {
    if (target_level < 0 || static_cast<std::size_t>(target_level) >= table.size()) {
        throw std::out_of_range("target level " + std::to_string(target_level) +
                                " outside table of " + std::to_string(table.size()) + " levels");
    }
    (void)device;
    const auto& lvl = table.level(static_cast<std::size_t>(target_level));
    const double drawn = lvl.std_us > 0.0 ? rng.normal(lvl.mean_us, lvl.std_us) : lvl.mean_us;
    return {target_level, std::max(static_cast<float>(drawn), kMinConductanceUs)};
}

void step_weight(MultiMemristorWeight& weight, StepDirection direction, UpdateArbiter& arbiter,
                 const DeviceLevelTable& table, Rng& rng) {
    if (weight.devices.empty()) throw std::invalid_argument("weight has no devices");
    const auto n = weight.devices.size();
    auto& device = weight.devices[arbiter.counter % n];
    const int last = static_cast<int>(table.size()) - 1;
    const int target = direction == StepDirection::kUp
                           ? std::min(device.level_index + 1, last)
                           : std::max(device.level_index - 1, 0);
    device = program_level(device, target, table, rng);
    ++arbiter.counter;
}

double effective_conductance_us(std::span<const MemristorDevice> devices) noexcept {
    double sum = 0.0;
    for (const auto& d : devices) sum += d.conductance_us;
    return sum;
}

double read_weight(const MultiMemristorWeight& weight, const WeightMapping& mapping) noexcept {
    return (effective_conductance_us(weight.devices) - mapping.g_bias_us) / mapping.g_scale_us;
}

Crossbar::Crossbar(int rows, int cols, int n_mem, DeviceLevelTable table, WeightMapping mapping)
    : rows_(rows),
      cols_(cols),
      n_mem_(n_mem),
      table_(std::move(table)),
      mapping_(mapping) {
    if (rows < 1 || cols < 1 || n_mem < 1) {
        throw std::invalid_argument("crossbar dimensions and n_mem must be >= 1");
    }
    if (mapping_.g_scale_us <= 0.0) throw std::invalid_argument("g_scale must be positive");
    const auto weights = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    devices_.resize(weights * static_cast<std::size_t>(n_mem));
    values_.resize(weights, 0.0f);
}

void Crossbar::refresh_value(std::size_t weight_index) {
    const std::span<const MemristorDevice> span{
        devices_.data() + weight_index * static_cast<std::size_t>(n_mem_),
        static_cast<std::size_t>(n_mem_)};
    values_[weight_index] = static_cast<float>(
        (effective_conductance_us(span) - mapping_.g_bias_us) / mapping_.g_scale_us);
}

void Crossbar::randomize(Rng& rng) {
    const auto level_count = static_cast<std::uint32_t>(table_.size());
    for (auto& device : devices_) {
        const int level = static_cast<int>(rng.below(level_count));
        device = program_level(device, level, table_, rng);
    }
    for (std::size_t w = 0; w < values_.size(); ++w) refresh_value(w);
}

void Crossbar::program_step(int row, int col, StepDirection direction, Rng& rng) {
    const std::size_t w = index(row, col);
    auto* base = devices_.data() + w * static_cast<std::size_t>(n_mem_);
    auto& device = base[arbiter_.counter % static_cast<std::uint64_t>(n_mem_)];
    const int last = static_cast<int>(table_.size()) - 1;
    const int target = direction == StepDirection::kUp
                           ? std::min(device.level_index + 1, last)
                           : std::max(device.level_index - 1, 0);
    device = program_level(device, target, table_, rng);
    ++arbiter_.counter;
    refresh_value(w);
}

Crossbar init_crossbar(int rows, int cols, int n_mem, const DeviceLevelTable& table,
                       const WeightMapping& mapping, Rng& rng) {
    Crossbar xbar(rows, cols, n_mem, table, mapping);
    xbar.randomize(rng);
    return xbar;
}

}  // namespace memcl
