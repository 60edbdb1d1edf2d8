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

#include <filesystem>
#include <fstream>

#include "memcl/energy.hpp"
#include "memcl/report.hpp"

using namespace memcl;

TEST_CASE("record accumulates tallies additively") {
    OpCounters c;
    CHECK(c.count(OpKind::kMemristorProgram) == 0);
    c.record(OpKind::kMemristorProgram, 1);
    CHECK(c.count(OpKind::kMemristorProgram) == 1);
    c.record(OpKind::kMemristorProgram, 0);
    CHECK(c.count(OpKind::kMemristorProgram) == 1);
    c.record(OpKind::kExpEval, 3);
    c.record(OpKind::kExpEval, 4);
    CHECK(c.count(OpKind::kExpEval) == 7);
}

TEST_CASE("merge sums every tally and meta counter") {
    OpCounters a, b;
    a.record(OpKind::kSramRead16, 5);
    a.eligibility_events = 10;
    a.samples = 2;
    b.record(OpKind::kSramRead16, 7);
    b.eligibility_events = 1;
    b.program_events = 4;
    b.m_coeff_updates = 3;
    b.samples = 1;
    a.merge(b);
    CHECK(a.count(OpKind::kSramRead16) == 12);
    CHECK(a.eligibility_events == 11);
    CHECK(a.program_events == 4);
    CHECK(a.m_coeff_updates == 3);
    CHECK(a.samples == 3);
}

TEST_CASE("zero costs yield zero energy but counts survive in the report") {
    OpCounters c;
    c.record(OpKind::kExpEval, 1234);
    EnergyCostTable costs;  // all zero
    const auto report = EnergyReport::make(c, costs, 10);
    CHECK(report.total_pj == 0.0);
    CHECK(report.per_sample_pj == 0.0);
    CHECK(report.counters.count(OpKind::kExpEval) == 1234);
}

TEST_CASE("a single kind is priced linearly") {
    OpCounters c;
    c.record(OpKind::kMultiply, 10);
    EnergyCostTable costs;
    costs.cost_pj[static_cast<int>(OpKind::kMultiply)] = 2.0;
    const auto report = EnergyReport::make(c, costs, 5);
    CHECK(report.total_pj == doctest::Approx(20.0));
    CHECK(report.per_sample_pj == doctest::Approx(4.0));
    CHECK(report.computation_pj == doctest::Approx(20.0));
    CHECK(report.sram_pj == 0.0);
    CHECK(report.memristor_pj == 0.0);
}

TEST_CASE("breakdown groups conserve the total exactly") {
    OpCounters c;
    c.record(OpKind::kSramRead16, 11);
    c.record(OpKind::kSramWrite32, 7);
    c.record(OpKind::kSramRead16Small, 1000);
    c.record(OpKind::kMemristorProgram, 13);
    c.record(OpKind::kMemristorRead, 5);
    c.record(OpKind::kRngDraw, 17);
    c.record(OpKind::kExpEval, 19);
    c.record(OpKind::kBilinearEval, 23);
    c.record(OpKind::kMultiply, 29);
    c.record(OpKind::kAddCompare, 31);
    const auto costs = EnergyCostTable::defaults();
    const auto report = EnergyReport::make(c, costs, 3);
    CHECK(report.computation_pj + report.sram_pj + report.memristor_pj == report.total_pj);
    CHECK(report.sram_pj ==
          doctest::Approx(11 * 1.0 + 7 * 2.0 + 1000 * 0.05));
    CHECK(report.memristor_pj == doctest::Approx(13 * 10.0 + 5 * 1.0));
    CHECK(report.computation_pj ==
          doctest::Approx(17 * 0.5 + 19 * 4.0 + 23 * 1.0 + 29 * 1.0 + 31 * 0.2));
}

TEST_CASE("n_samples must be positive") {
    OpCounters c;
    CHECK_THROWS(EnergyReport::make(c, EnergyCostTable::defaults(), 0));
}

TEST_CASE("cost table CSV: overrides, unknown kinds, malformed rows") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "memcl_energy_csv";
    fs::create_directories(dir);

    const auto good = (dir / "costs.csv").string();
    {
        std::ofstream out(good);
        out << "op_kind,pJ\nmemristor_program,42.5\nexp_eval,0.25\n";
    }
    const auto costs = EnergyCostTable::from_csv(good);
    CHECK(costs.cost(OpKind::kMemristorProgram) == doctest::Approx(42.5));
    CHECK(costs.cost(OpKind::kExpEval) == doctest::Approx(0.25));
    CHECK(costs.cost(OpKind::kMultiply) == doctest::Approx(1.0));  // default preserved

    const auto unknown = (dir / "unknown.csv").string();
    {
        std::ofstream out(unknown);
        out << "op_kind,pJ\nflux_capacitor,1.21\n";
    }
    CHECK_THROWS(EnergyCostTable::from_csv(unknown));

    const auto malformed = (dir / "malformed.csv").string();
    {
        std::ofstream out(malformed);
        out << "op_kind,pJ\nexp_eval\n";
    }
    CHECK_THROWS(EnergyCostTable::from_csv(malformed));

    const auto negative = (dir / "negative.csv").string();
    {
        std::ofstream out(negative);
        out << "op_kind,pJ\nexp_eval,-1\n";
    }
    CHECK_THROWS(EnergyCostTable::from_csv(negative));
}

TEST_CASE("the energy report json carries counts and breakdown fractions") {
    OpCounters c;
    c.record(OpKind::kSramRead16, 10);     // 10 pJ at default costs
    c.record(OpKind::kMemristorProgram, 3);  // 30 pJ
    const auto report = EnergyReport::make(c, EnergyCostTable::defaults(), 2);
    const auto text = report.to_json();
    CHECK(text.find("\"sram_fraction\": 0.25") != std::string::npos);
    CHECK(text.find("\"memristor_fraction\": 0.75") != std::string::npos);
    CHECK(text.find("\"computation_fraction\": 0.0") != std::string::npos);
    CHECK(text.find("\"per_sample_pj\": 20.0") != std::string::npos);
    CHECK(text.find("\"sram_read_16\": 10") != std::string::npos);
}

TEST_CASE("counters serialize to json and back") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "memcl_counters_json";
    fs::create_directories(dir);

    OpCounters c;
    c.record(OpKind::kSramRead16, 101);
    c.record(OpKind::kBilinearEval, 7);
    c.eligibility_events = 55;
    c.program_events = 9;
    c.m_coeff_updates = 3;
    c.samples = 4;

    const auto path = (dir / "counters.json").string();
    write_file_atomic(path, c.to_json());
    const auto loaded = OpCounters::from_json_file(path);
    CHECK(loaded.count(OpKind::kSramRead16) == 101);
    CHECK(loaded.count(OpKind::kBilinearEval) == 7);
    CHECK(loaded.eligibility_events == 55);
    CHECK(loaded.program_events == 9);
    CHECK(loaded.m_coeff_updates == 3);
    CHECK(loaded.samples == 4);
}
