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

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "memcl/device.hpp"

using namespace memcl;

namespace {

DeviceLevelTable noiseless_table() { return DeviceLevelTable::default_table(0.0); }

MultiMemristorWeight make_weight(int n_mem, int level, const DeviceLevelTable& table, Rng& rng) {
    MultiMemristorWeight w;
    for (int d = 0; d < n_mem; ++d) {
        w.devices.push_back(program_level(MemristorDevice{}, level, table, rng));
    }
    return w;
}

}  // namespace

TEST_CASE("default table spans 40-283 uS in 27 uS steps") {
    const auto table = DeviceLevelTable::default_table();
    REQUIRE(table.size() == 10);
    CHECK(table.min_mean_us() == doctest::Approx(40.0));
    CHECK(table.max_mean_us() == doctest::Approx(283.0));
    CHECK(table.average_spacing_us() == doctest::Approx(27.0));
    CHECK(table.mean_of_means_us() == doctest::Approx(161.5));
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(table.level(k).mean_us == doctest::Approx(40.0 + 27.0 * static_cast<double>(k)));
        CHECK(table.level(k).std_us ==
              doctest::Approx(0.05 * (40.0 + 27.0 * static_cast<double>(k))));
    }
}

TEST_CASE("table validation rejects malformed level sets") {
    CHECK_THROWS(DeviceLevelTable({{40.0, 1.0}}));                        // too few
    CHECK_THROWS(DeviceLevelTable({{40.0, 1.0}, {30.0, 1.0}}));           // decreasing
    CHECK_THROWS(DeviceLevelTable({{40.0, 1.0}, {40.0, 1.0}}));           // duplicate
    CHECK_THROWS(DeviceLevelTable({{-1.0, 1.0}, {40.0, 1.0}}));           // non-positive mean
    CHECK_THROWS(DeviceLevelTable({{40.0, -0.1}, {67.0, 1.0}}));          // negative std
    CHECK_NOTHROW(DeviceLevelTable({{40.0, 0.0}, {67.0, 1.0}}));
}

TEST_CASE("program_level lands on the level mean when std is zero") {
    const auto table = noiseless_table();
    Rng rng(1);
    CHECK(program_level(MemristorDevice{}, 0, table, rng).conductance_us ==
          doctest::Approx(40.0));
    CHECK(program_level(MemristorDevice{}, 9, table, rng).conductance_us ==
          doctest::Approx(283.0));
    CHECK(program_level(MemristorDevice{}, 3, table, rng).conductance_us ==
          doctest::Approx(121.0));
    CHECK_THROWS_AS(program_level(MemristorDevice{}, 10, table, rng), std::out_of_range);
    CHECK_THROWS_AS(program_level(MemristorDevice{}, -1, table, rng), std::out_of_range);
}

TEST_CASE("programming noise statistics match the table") {
    const auto table = DeviceLevelTable::default_table(0.05);
    Rng rng(7);
    const int n = 10000;
    for (const std::size_t level : {std::size_t{0}, std::size_t{5}, std::size_t{9}}) {
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto d = program_level(MemristorDevice{}, static_cast<int>(level), table, rng);
            sum += d.conductance_us;
            sq += static_cast<double>(d.conductance_us) * d.conductance_us;
        }
        const double mean = sum / n;
        const double std = std::sqrt(sq / n - mean * mean);
        const double want_mean = table.level(level).mean_us;
        const double want_std = table.level(level).std_us;
        CHECK(std::fabs(mean - want_mean) < 3.0 * want_std / std::sqrt(static_cast<double>(n)));
        CHECK(std::fabs(std - want_std) < 0.1 * want_std);
    }
}

TEST_CASE("step_weight moves one level and saturates at the boundaries") {
    const auto table = noiseless_table();
    Rng rng(2);
    UpdateArbiter arbiter;

    auto w = make_weight(1, 4, table, rng);
    step_weight(w, StepDirection::kUp, arbiter, table, rng);
    CHECK(w.devices[0].level_index == 5);
    CHECK(w.devices[0].conductance_us == doctest::Approx(175.0));

    auto top = make_weight(1, 9, table, rng);
    step_weight(top, StepDirection::kUp, arbiter, table, rng);
    CHECK(top.devices[0].level_index == 9);
    CHECK(top.devices[0].conductance_us == doctest::Approx(283.0));

    auto bottom = make_weight(1, 0, table, rng);
    step_weight(bottom, StepDirection::kDown, arbiter, table, rng);
    CHECK(bottom.devices[0].level_index == 0);
}

TEST_CASE("arbiter picks counter mod n_mem and always advances") {
    const auto table = noiseless_table();
    Rng rng(3);
    UpdateArbiter arbiter{4};
    auto w = make_weight(3, 5, table, rng);
    step_weight(w, StepDirection::kDown, arbiter, table, rng);
    CHECK(arbiter.counter == 5);
    CHECK(w.devices[0].level_index == 5);
    CHECK(w.devices[1].level_index == 4);  // 4 mod 3 == 1
    CHECK(w.devices[2].level_index == 5);
}

TEST_CASE("arbitration fairness: n_mem consecutive steps touch each device once") {
    const auto table = DeviceLevelTable::default_table(0.05);
    Rng rng(4);
    for (const int n_mem : {1, 2, 7}) {
        UpdateArbiter arbiter;
        auto w = make_weight(n_mem, 5, table, rng);
        std::vector<int> touched(static_cast<std::size_t>(n_mem), 0);
        for (int s = 0; s < n_mem; ++s) {
            const auto before = w;
            step_weight(w, StepDirection::kUp, arbiter, table, rng);
            for (int d = 0; d < n_mem; ++d) {
                if (w.devices[static_cast<std::size_t>(d)].level_index !=
                    before.devices[static_cast<std::size_t>(d)].level_index) {
                    ++touched[static_cast<std::size_t>(d)];
                }
            }
        }
        for (const int count : touched) CHECK(count == 1);
    }
}

TEST_CASE("step_weight redraws noise even on saturated writes") {
    const auto table = DeviceLevelTable::default_table(0.05);
    Rng rng(5);
    UpdateArbiter arbiter;
    auto w = make_weight(1, 9, table, rng);
    const float before = w.devices[0].conductance_us;
    step_weight(w, StepDirection::kUp, arbiter, table, rng);
    CHECK(w.devices[0].level_index == 9);
    CHECK(w.devices[0].conductance_us != before);  // fresh SET event
}

TEST_CASE("read_weight maps conductance linearly with bias cancellation") {
    const auto table = noiseless_table();
    const auto mapping = WeightMapping::balanced(table, 1);
    CHECK(mapping.g_bias_us == doctest::Approx(161.5));
    CHECK(mapping.g_scale_us == doctest::Approx(243.0));

    Rng rng(6);
    auto top = make_weight(1, 9, table, rng);
    CHECK(read_weight(top, mapping) == doctest::Approx(0.5));
    auto bottom = make_weight(1, 0, table, rng);
    CHECK(read_weight(bottom, mapping) == doctest::Approx(-0.5));

    // G_eff == g_bias -> exactly zero
    MultiMemristorWeight w;
    w.devices.push_back({4, 161.5f});
    CHECK(read_weight(w, mapping) == doctest::Approx(0.0));

    // affine in G with slope 1/g_scale
    MultiMemristorWeight probe;
    probe.devices.push_back({0, 100.0f});
    const double v1 = read_weight(probe, mapping);
    probe.devices[0].conductance_us = 150.0f;
    const double v2 = read_weight(probe, mapping);
    CHECK((v2 - v1) == doctest::Approx(50.0 / 243.0));
}

TEST_CASE("multi-memristor mapping keeps the signed range n_mem-independent") {
    const auto table = noiseless_table();
    Rng rng(8);
    for (const int n_mem : {1, 2, 7}) {
        const auto mapping = WeightMapping::balanced(table, n_mem);
        auto all_top = make_weight(n_mem, 9, table, rng);
        auto all_bottom = make_weight(n_mem, 0, table, rng);
        CHECK(read_weight(all_top, mapping) == doctest::Approx(0.5));
        CHECK(read_weight(all_bottom, mapping) == doctest::Approx(-0.5));
    }
}

TEST_CASE("init_crossbar counts devices and weights") {
    const auto table = DeviceLevelTable::default_table();
    const auto mapping = WeightMapping::balanced(table, 7);
    Rng rng(9);
    const auto xbar = init_crossbar(784, 200, 7, table, mapping, rng);
    CHECK(xbar.weight_count() == 156800);
    CHECK(xbar.weight_count() * static_cast<std::size_t>(xbar.n_mem()) == 1097600);
}

TEST_CASE("noiseless weights live exactly on the quantization lattice") {
    const auto table = noiseless_table();
    for (const int n_mem : {1, 3}) {
        const auto mapping = WeightMapping::balanced(table, n_mem);
        Rng rng(10);
        const auto xbar = init_crossbar(20, 20, n_mem, table, mapping, rng);
        // lattice: (sum of level means - g_bias) / g_scale
        std::set<long> lattice;  // total level index sum is a lattice coordinate
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const double g = effective_conductance_us(xbar.devices(i, j));
                const double w = (g - mapping.g_bias_us) / mapping.g_scale_us;
                CHECK(xbar.value(i, j) == doctest::Approx(w).epsilon(1e-6));
                // every conductance must be a sum of exact level means
                long steps = std::lround((g - n_mem * 40.0) / 27.0);
                CHECK(std::fabs(g - (n_mem * 40.0 + 27.0 * static_cast<double>(steps))) < 1e-6);
                lattice.insert(steps);
            }
        }
        CHECK(lattice.size() > 1);
    }
}

TEST_CASE("monotone step property under zero noise") {
    const auto table = noiseless_table();
    const auto mapping = WeightMapping::balanced(table, 2);
    Rng rng(11);
    auto xbar = init_crossbar(4, 4, 2, table, mapping, rng);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int s = 0; s < 30; ++s) {
                const float before = xbar.value(i, j);
                const bool saturated = [&] {
                    const auto devices = xbar.devices(i, j);
                    const auto next = xbar.arbiter().counter % 2;
                    return devices[next].level_index == 9;
                }();
                xbar.program_step(i, j, StepDirection::kUp, rng);
                if (saturated) CHECK(xbar.value(i, j) == doctest::Approx(before));
                else CHECK(xbar.value(i, j) > before);
            }
        }
    }
}

TEST_CASE("random init is symmetric around zero") {
    const auto table = DeviceLevelTable::default_table(0.05);
    const auto mapping = WeightMapping::balanced(table, 1);
    Rng rng(12);
    const auto xbar = init_crossbar(1000, 100, 1, table, mapping, rng);
    double sum = 0.0, sq = 0.0;
    const auto n = static_cast<double>(xbar.weight_count());
    for (const float v : xbar.values()) {
        sum += v;
        sq += static_cast<double>(v) * v;
    }
    const double mean = sum / n;
    const double std = std::sqrt(sq / n - mean * mean);
    CHECK(std::fabs(mean) < 3.0 * std / std::sqrt(n));
}

TEST_CASE("device table CSV round-trips and rejects malformed input") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "memcl_device_csv";
    fs::create_directories(dir);

    const auto table = DeviceLevelTable::default_table(0.05);
    const auto path = (dir / "table.csv").string();
    {
        std::ofstream out(path);
        out << table.to_csv();
    }
    const auto loaded = DeviceLevelTable::from_csv(path);
    REQUIRE(loaded.size() == table.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded.level(i).mean_us == doctest::Approx(table.level(i).mean_us));
        CHECK(loaded.level(i).std_us == doctest::Approx(table.level(i).std_us));
    }

    const auto bad_header = (dir / "bad_header.csv").string();
    {
        std::ofstream out(bad_header);
        out << "level,mean,std\n0,40,2\n1,67,2\n";
    }
    CHECK_THROWS(DeviceLevelTable::from_csv(bad_header));

    const auto unsorted = (dir / "unsorted.csv").string();
    {
        std::ofstream out(unsorted);
        out << "level,mean_uS,std_uS\n1,67,2\n0,40,2\n";
    }
    CHECK_THROWS(DeviceLevelTable::from_csv(unsorted));

    const auto duplicate = (dir / "duplicate.csv").string();
    {
        std::ofstream out(duplicate);
        out << "level,mean_uS,std_uS\n0,40,2\n0,67,2\n";
    }
    CHECK_THROWS(DeviceLevelTable::from_csv(duplicate));

    const auto decreasing = (dir / "decreasing.csv").string();
    {
        std::ofstream out(decreasing);
        out << "level,mean_uS,std_uS\n0,67,2\n1,40,2\n";
    }
    CHECK_THROWS(DeviceLevelTable::from_csv(decreasing));
}
