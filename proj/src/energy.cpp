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

#include "memcl/energy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace memcl {
namespace {

constexpr std::array<std::string_view, kOpKindCount> kOpNames = {
    "sram_read_16",     "sram_write_16",      "sram_read_32",      "sram_write_32",
    "sram_read_16_small", "sram_write_16_small", "memristor_program", "memristor_read",
    "rng_draw",         "exp_eval",           "bilinear_eval",     "multiply",
    "add_compare",
};

bool is_sram(OpKind kind) noexcept {
    switch (kind) {
        case OpKind::kSramRead16:
        case OpKind::kSramWrite16:
        case OpKind::kSramRead32:
        case OpKind::kSramWrite32:
        case OpKind::kSramRead16Small:
        case OpKind::kSramWrite16Small:
            return true;
        default:
            return false;
    }
}

bool is_memristor(OpKind kind) noexcept {
    return kind == OpKind::kMemristorProgram || kind == OpKind::kMemristorRead;
}

}  // namespace

std::string_view op_kind_name(OpKind kind) noexcept {
    return kOpNames[static_cast<std::size_t>(kind)];
}

bool op_kind_from_name(std::string_view name, OpKind& kind) noexcept {
    for (int i = 0; i < kOpKindCount; ++i) {
        if (kOpNames[static_cast<std::size_t>(i)] == name) {
            kind = static_cast<OpKind>(i);
            return true;
        }
    }
    return false;
}

void OpCounters::merge(const OpCounters& other) noexcept {
    for (int i = 0; i < kOpKindCount; ++i) tally[static_cast<std::size_t>(i)] += other.tally[static_cast<std::size_t>(i)];
    eligibility_events += other.eligibility_events;
    program_events += other.program_events;
    m_coeff_updates += other.m_coeff_updates;
    samples += other.samples;
}

std::string OpCounters::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json ops;
    for (int i = 0; i < kOpKindCount; ++i) {
        ops[std::string(kOpNames[static_cast<std::size_t>(i)])] = tally[static_cast<std::size_t>(i)];
    }
    j["ops"] = ops;
    j["eligibility_events"] = eligibility_events;
    j["program_events"] = program_events;
    j["m_coeff_updates"] = m_coeff_updates;
    j["samples"] = samples;
    return j.dump(2) + "\n";
}

OpCounters OpCounters::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open counters file: " + path);
    nlohmann::json j;
    in >> j;
    OpCounters c;
    const auto& ops = j.at("ops");
    for (int i = 0; i < kOpKindCount; ++i) {
        c.tally[static_cast<std::size_t>(i)] =
            ops.at(std::string(kOpNames[static_cast<std::size_t>(i)])).get<std::uint64_t>();
    }
    c.eligibility_events = j.at("eligibility_events").get<std::uint64_t>();
    c.program_events = j.at("program_events").get<std::uint64_t>();
    c.m_coeff_updates = j.at("m_coeff_updates").get<std::uint64_t>();
    c.samples = j.at("samples").get<std::uint64_t>();
    return c;
}

EnergyCostTable EnergyCostTable::defaults() {
    EnergyCostTable t;
    t.cost_pj[static_cast<int>(OpKind::kSramRead16)] = 1.0;
    t.cost_pj[static_cast<int>(OpKind::kSramWrite16)] = 1.0;
    t.cost_pj[static_cast<int>(OpKind::kSramRead32)] = 2.0;
    t.cost_pj[static_cast<int>(OpKind::kSramWrite32)] = 2.0;
    t.cost_pj[static_cast<int>(OpKind::kSramRead16Small)] = 0.05;
    t.cost_pj[static_cast<int>(OpKind::kSramWrite16Small)] = 0.05;
    t.cost_pj[static_cast<int>(OpKind::kMemristorProgram)] = 10.0;
    t.cost_pj[static_cast<int>(OpKind::kMemristorRead)] = 1.0;
    t.cost_pj[static_cast<int>(OpKind::kRngDraw)] = 0.5;
    t.cost_pj[static_cast<int>(OpKind::kExpEval)] = 4.0;
    t.cost_pj[static_cast<int>(OpKind::kBilinearEval)] = 1.0;
    t.cost_pj[static_cast<int>(OpKind::kMultiply)] = 1.0;
    t.cost_pj[static_cast<int>(OpKind::kAddCompare)] = 0.2;
    return t;
}

EnergyCostTable EnergyCostTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cost table: " + path);
    EnergyCostTable t = defaults();
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == "op_kind,pJ") {
            first = false;
            continue;
        }
        first = false;
        std::istringstream row(line);
        std::string name, cost_str;
        if (!std::getline(row, name, ',') || !std::getline(row, cost_str)) {
            throw std::runtime_error("malformed cost table row: '" + line + "'");
        }
        OpKind kind;
        if (!op_kind_from_name(name, kind)) {
            throw std::runtime_error("unknown op kind in cost table: '" + name + "'");
        }
        double cost = 0.0;
        try {
            std::size_t used = 0;
            cost = std::stod(cost_str, &used);
            if (used != cost_str.size()) throw std::invalid_argument(cost_str);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed cost table row: '" + line + "'");
        }
        if (cost < 0.0) throw std::runtime_error("op costs must be non-negative: '" + line + "'");
        t.cost_pj[static_cast<int>(kind)] = cost;
    }
    return t;
}

EnergyReport EnergyReport::make(const OpCounters& counters, const EnergyCostTable& costs,
                                std::uint64_t n_samples) {
    if (n_samples == 0) throw std::invalid_argument("energy report requires n_samples > 0");
    EnergyReport r;
    r.counters = counters;
    r.samples = n_samples;
    for (int i = 0; i < kOpKindCount; ++i) {
        const auto kind = static_cast<OpKind>(i);
        const double e =
            static_cast<double>(counters.tally[static_cast<std::size_t>(i)]) * costs.cost(kind);
        if (is_sram(kind)) r.sram_pj += e;
        else if (is_memristor(kind)) r.memristor_pj += e;
        else r.computation_pj += e;
    }
    r.total_pj = r.computation_pj + r.sram_pj + r.memristor_pj;
    r.per_sample_pj = r.total_pj / static_cast<double>(n_samples);
    return r;
}

std::string EnergyReport::to_json() const {
    nlohmann::ordered_json j;
    j["samples"] = samples;
    j["total_pj"] = total_pj;
    j["per_sample_pj"] = per_sample_pj;
    nlohmann::ordered_json breakdown;
    breakdown["computation_pj"] = computation_pj;
    breakdown["sram_pj"] = sram_pj;
    breakdown["memristor_pj"] = memristor_pj;
    breakdown["computation_fraction"] = total_pj > 0.0 ? computation_pj / total_pj : 0.0;
    breakdown["sram_fraction"] = total_pj > 0.0 ? sram_pj / total_pj : 0.0;
    breakdown["memristor_fraction"] = total_pj > 0.0 ? memristor_pj / total_pj : 0.0;
    j["breakdown"] = breakdown;
    nlohmann::ordered_json ops;
    for (int i = 0; i < kOpKindCount; ++i) {
        ops[std::string(op_kind_name(static_cast<OpKind>(i)))] =
            counters.tally[static_cast<std::size_t>(i)];
    }
    j["ops"] = ops;
    j["eligibility_events"] = counters.eligibility_events;
    j["program_events"] = counters.program_events;
    j["m_coeff_updates"] = counters.m_coeff_updates;
    return j.dump(2) + "\n";
}

}  // namespace memcl
