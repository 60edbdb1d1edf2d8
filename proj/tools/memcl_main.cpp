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

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "memcl/benchmark.hpp"
#include "memcl/report.hpp"
#include "memcl/simd.hpp"

namespace {

struct TrainFlags {
    std::string config_path;
    std::int64_t seed = -1;
    int seeds = -1;
    double train_fraction = -1.0;
    std::string out_dir;
    std::string data_dir;
};

memcl::ExperimentConfig load_config(const TrainFlags& flags) {
    auto cfg = memcl::ExperimentConfig::load(flags.config_path);
    if (flags.seed >= 0) cfg.run.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.seeds > 0) cfg.run.seeds = flags.seeds;
    if (flags.train_fraction > 0.0) cfg.run.train_fraction = flags.train_fraction;
    if (!flags.out_dir.empty()) cfg.run.output_dir = flags.out_dir;
    if (!flags.data_dir.empty()) {
        setenv("MEMCL_DATA_DIR", flags.data_dir.c_str(), 1);
    }
    cfg.validate();
    return cfg;
}

std::vector<memcl::RunResult> run_all_seeds(const memcl::ExperimentConfig& cfg,
                                            const memcl::IdxDataset& train,
                                            const memcl::IdxDataset& test) {
    const int n = cfg.run.seeds;
    std::vector<memcl::RunResult> results(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));

    const unsigned workers =
        std::min<unsigned>(static_cast<unsigned>(n),
                           std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int k = next.fetch_add(1);
                if (k >= n) return;
                try {
                    results[static_cast<std::size_t>(k)] = memcl::run_continual(
                        train, test, cfg, cfg.run.seed + static_cast<std::uint64_t>(k));
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(k)] = e.what();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (!err.empty()) throw std::runtime_error(err);
    }
    return results;
}

void write_run_artifacts(const memcl::ExperimentConfig& cfg,
                         const std::vector<memcl::RunResult>& results) {
    const std::string dir = cfg.run.output_dir;
    memcl::OpCounters merged;
    std::uint64_t total_samples = 0;
    for (const auto& r : results) {
        memcl::write_file_atomic(dir + "/accuracy_seed" + std::to_string(r.seed) + ".csv",
                                 r.matrix.to_csv());
        memcl::write_file_atomic(dir + "/counters_seed" + std::to_string(r.seed) + ".json",
                                 r.counters.to_json());
        merged.merge(r.counters);
        total_samples += r.counters.samples;
    }
    memcl::write_file_atomic(dir + "/summary.json", memcl::summary_json(cfg, results));

    const auto costs = cfg.energy.cost_table.empty()
                           ? memcl::EnergyCostTable::defaults()
                           : memcl::EnergyCostTable::from_csv(cfg.energy.cost_table);
    const auto report =
        memcl::EnergyReport::make(merged, costs, total_samples == 0 ? 1 : total_samples);
    memcl::write_file_atomic(dir + "/energy_report.json", report.to_json());
}

int cmd_train(const TrainFlags& flags) {
    const auto cfg = load_config(flags);
    memcl::simd::select_backend(cfg.run.kernel_backend);

    const auto train = memcl::load_idx(cfg.resolve_dataset_path(cfg.dataset.train_images),
                                       cfg.resolve_dataset_path(cfg.dataset.train_labels));
    const auto test = memcl::load_idx(cfg.resolve_dataset_path(cfg.dataset.test_images),
                                      cfg.resolve_dataset_path(cfg.dataset.test_labels));

    const auto results = run_all_seeds(cfg, train, test);
    write_run_artifacts(cfg, results);

    const auto& front = results.front();
    std::vector<double> means;
    for (const auto& r : results) means.push_back(r.metrics.mean_final);
    const auto agg = memcl::mean_std(means);
    char line[256];
    std::snprintf(line, sizeof line,
                  "engine %s: mean accuracy %.2f%% +- %.2f over %zu seed(s); artifacts in %s\n",
                  front.engine_name.c_str(), agg.mean, agg.std, results.size(),
                  cfg.run.output_dir.c_str());
    std::cout << line;
    return 0;
}

int cmd_sweep(const TrainFlags& flags, const std::string& key,
              const std::string& values_csv) {
    if (values_csv.empty()) throw std::runtime_error("sweep requires a non-empty value list");
    auto base = load_config(flags);
    if (!base.has_numeric_key(key)) {
        throw std::runtime_error("unknown or non-numeric sweep key '" + key + "'");
    }

    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    if (values.empty()) throw std::runtime_error("sweep requires a non-empty value list");

    memcl::simd::select_backend(base.run.kernel_backend);
    const auto train = memcl::load_idx(base.resolve_dataset_path(base.dataset.train_images),
                                       base.resolve_dataset_path(base.dataset.train_labels));
    const auto test = memcl::load_idx(base.resolve_dataset_path(base.dataset.test_images),
                                      base.resolve_dataset_path(base.dataset.test_labels));

    std::string csv = "key,value,mean_accuracy,std_accuracy,seeds\n";
    for (const double value : values) {
        auto cfg = base;
        cfg.set_numeric(key, value);
        cfg.validate();
        std::ostringstream sub;
        sub << base.run.output_dir << "/" << key << "=" << value;
        cfg.run.output_dir = sub.str();

        const auto results = run_all_seeds(cfg, train, test);
        write_run_artifacts(cfg, results);

        std::vector<double> means;
        for (const auto& r : results) means.push_back(r.metrics.mean_final);
        const auto agg = memcl::mean_std(means);
        char line[256];
        std::snprintf(line, sizeof line, "%s,%g,%.4f,%.4f,%d\n", key.c_str(), value, agg.mean,
                      agg.std, base.run.seeds);
        csv += line;
        std::cout << key << " = " << value << ": mean " << agg.mean << "% +- " << agg.std
                  << "\n";
    }
    memcl::write_file_atomic(base.run.output_dir + "/sweep.csv", csv);
    return 0;
}

int cmd_report(const std::string& run_dir) {
    std::cout << memcl::format_run_report(run_dir);
    return 0;
}

int cmd_gen_device_table(const std::string& out_path, int levels, double g_min, double g_max,
                         double std_fraction) {
    if (levels < 2) throw std::runtime_error("need at least 2 levels");
    if (g_min <= 0.0 || g_max <= g_min) {
        throw std::runtime_error("need 0 < g-min < g-max");
    }
    std::vector<memcl::ConductanceLevel> table_levels;
    for (int k = 0; k < levels; ++k) {
        const double mean =
            g_min + (g_max - g_min) * static_cast<double>(k) / static_cast<double>(levels - 1);
        table_levels.push_back({mean, std_fraction * mean});
    }
    const memcl::DeviceLevelTable table(std::move(table_levels));
    memcl::write_file_atomic(out_path, table.to_csv());
    std::cout << "wrote " << levels << "-level device table to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memcl: continual-learning simulator for spiking networks with "
                 "noisy quantized memristor weights"};
    app.require_subcommand(1);

    TrainFlags flags;

    auto* train = app.add_subcommand("train", "train on the configured benchmark and write "
                                              "accuracy/energy artifacts");
    train->add_option("--config", flags.config_path, "experiment config file")->required();
    train->add_option("--seed", flags.seed, "override run.seed");
    train->add_option("--seeds", flags.seeds, "override run.seeds");
    train->add_option("--train-fraction", flags.train_fraction,
                      "override run.train_fraction (0,1]");
    train->add_option("--out", flags.out_dir, "override run.output_dir");
    train->add_option("--data-dir", flags.data_dir, "dataset directory (sets MEMCL_DATA_DIR)");

    std::string sweep_key, sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run the config once per value of a numeric key");
    sweep->add_option("--config", flags.config_path, "experiment config file")->required();
    sweep->add_option("--key", sweep_key, "dotted numeric config key")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--seed", flags.seed, "override run.seed");
    sweep->add_option("--seeds", flags.seeds, "override run.seeds");
    sweep->add_option("--train-fraction", flags.train_fraction,
                      "override run.train_fraction (0,1]");
    sweep->add_option("--out", flags.out_dir, "override run.output_dir");
    sweep->add_option("--data-dir", flags.data_dir, "dataset directory (sets MEMCL_DATA_DIR)");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "print the summary tables of a finished run");
    report->add_option("--run", report_dir, "run directory")->required();

    std::string table_out = "device_table.csv";
    int table_levels = 10;
    double table_gmin = 40.0, table_gmax = 283.0, table_std_fraction = 0.05;
    auto* gen = app.add_subcommand("gen-device-table",
                                   "write an equispaced conductance-level table CSV");
    gen->add_option("--out", table_out, "output CSV path");
    gen->add_option("--levels", table_levels, "number of levels");
    gen->add_option("--g-min", table_gmin, "lowest mean conductance (uS)");
    gen->add_option("--g-max", table_gmax, "highest mean conductance (uS)");
    gen->add_option("--std-fraction", table_std_fraction, "std as fraction of each mean");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(flags);
        if (sweep->parsed()) return cmd_sweep(flags, sweep_key, sweep_values);
        if (report->parsed()) return cmd_report(report_dir);
        if (gen->parsed()) {
            return cmd_gen_device_table(table_out, table_levels, table_gmin, table_gmax,
                                        table_std_fraction);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
