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

#include "memcl/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace memcl {

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("failed writing file: " + tmp.string());
    }
    fs::rename(tmp, target);
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd r;
    if (values.empty()) return r;
    double sum = 0.0;
    for (const double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (const double v : values) sq += (v - r.mean) * (v - r.mean);
        r.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return r;
}

std::string summary_json(const ExperimentConfig& cfg, const std::vector<RunResult>& results) {
    nlohmann::ordered_json j;
    j["engine"] = results.empty() ? cfg.plasticity.mode : results.front().engine_name;

    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    std::vector<double> means;
    std::vector<std::vector<double>> finals_by_task;
    for (const auto& r : results) {
        seeds.push_back(r.seed);
        means.push_back(r.metrics.mean_final);
        if (finals_by_task.size() < r.metrics.final_per_task.size()) {
            finals_by_task.resize(r.metrics.final_per_task.size());
        }
        for (std::size_t t = 0; t < r.metrics.final_per_task.size(); ++t) {
            finals_by_task[t].push_back(r.metrics.final_per_task[t]);
        }
    }
    j["seeds"] = seeds;

    const auto agg = mean_std(means);
    j["mean_accuracy"] = {{"mean", agg.mean}, {"std", agg.std}};

    nlohmann::ordered_json per_task_mean = nlohmann::ordered_json::array();
    nlohmann::ordered_json per_task_std = nlohmann::ordered_json::array();
    for (const auto& values : finals_by_task) {
        const auto ms = mean_std(values);
        per_task_mean.push_back(ms.mean);
        per_task_std.push_back(ms.std);
    }
    j["final_per_task"] = {{"mean", per_task_mean}, {"std", per_task_std}};

    nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["seed"] = r.seed;
        e["mean_final"] = r.metrics.mean_final;
        e["final_per_task"] = r.metrics.final_per_task;
        e["forgetting"] = r.metrics.forgetting;
        e["train_samples"] = r.train_samples;
        per_seed.push_back(e);
    }
    j["per_seed"] = per_seed;

    std::size_t consolidation = 0, accumulator = 0;
    if (!results.empty()) {
        consolidation = results.front().consolidation_bytes;
        accumulator = results.front().accumulator_bytes;
    }
    j["memory_overhead_bytes"] = {{"consolidation", consolidation},
                                  {"accumulator", accumulator},
                                  {"total", consolidation + accumulator}};

    j["config"] = nlohmann::ordered_json::parse(cfg.echo_json());
    return j.dump(2) + "\n";
}

namespace {

nlohmann::json load_json_artifact(const std::string& run_dir, const std::string& name) {
    const std::string path = run_dir + "/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing run artifact: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

std::string format_bytes(double bytes) {
    char buf[64];
    if (bytes >= 1024.0 * 1024.0) {
        std::snprintf(buf, sizeof buf, "%.1f MB", bytes / (1000.0 * 1000.0));
    } else if (bytes >= 10000.0) {
        std::snprintf(buf, sizeof buf, "%.1f kB", bytes / 1000.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.0f B", bytes);
    }
    return buf;
}

}  // namespace

std::string format_run_report(const std::string& run_dir) {
    const auto summary = load_json_artifact(run_dir, "summary.json");
    const auto energy = load_json_artifact(run_dir, "energy_report.json");

    std::ostringstream out;
    char buf[256];

    out << "run: " << run_dir << "\n";
    out << "engine: " << summary.at("engine").get<std::string>() << "\n";

    const double mean = summary.at("mean_accuracy").at("mean").get<double>();
    const double std = summary.at("mean_accuracy").at("std").get<double>();
    std::snprintf(buf, sizeof buf, "mean accuracy across tasks: %.2f%% +- %.2f\n", mean, std);
    out << buf;

    const auto& task_mean = summary.at("final_per_task").at("mean");
    const auto& task_std = summary.at("final_per_task").at("std");
    for (std::size_t t = 0; t < task_mean.size(); ++t) {
        std::snprintf(buf, sizeof buf, "  task %zu: %.2f%% +- %.2f\n", t + 1,
                      task_mean[t].get<double>(), task_std[t].get<double>());
        out << buf;
    }

    const auto& mem = summary.at("memory_overhead_bytes");
    const double consolidation = mem.at("consolidation").get<double>();
    const double accumulator = mem.at("accumulator").get<double>();
    const double total = mem.at("total").get<double>();
    out << "memory overhead: " << format_bytes(total);
    {
        std::snprintf(buf, sizeof buf, " (%.0f B consolidation + %.0f B accumulators)\n",
                      consolidation, accumulator);
        out << buf;
    }

    const double total_pj = energy.at("total_pj").get<double>();
    const double per_sample = energy.at("per_sample_pj").get<double>();
    const auto& breakdown = energy.at("breakdown");
    const double comp = breakdown.at("computation_pj").get<double>();
    const double sram = breakdown.at("sram_pj").get<double>();
    const double memr = breakdown.at("memristor_pj").get<double>();
    std::snprintf(buf, sizeof buf, "parameter-update energy: %.3g pJ/sample (total %.3g pJ)\n",
                  per_sample, total_pj);
    out << buf;
    if (total_pj > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "  breakdown: computation %.1f%%, sram %.1f%%, memristor %.1f%%\n",
                      100.0 * comp / total_pj, 100.0 * sram / total_pj,
                      100.0 * memr / total_pj);
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "  events: %llu eligibility, %llu programming, %llu m-updates\n",
                  static_cast<unsigned long long>(
                      energy.at("eligibility_events").get<std::uint64_t>()),
                  static_cast<unsigned long long>(
                      energy.at("program_events").get<std::uint64_t>()),
                  static_cast<unsigned long long>(
                      energy.at("m_coeff_updates").get<std::uint64_t>()));
    out << buf;
    return out.str();
}

}  // namespace memcl
