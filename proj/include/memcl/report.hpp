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

#include <string>
#include <vector>

#include "memcl/benchmark.hpp"

namespace memcl {

/// Writes via a temp file + rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values);

/// Aggregated summary of all seeds of one configuration (JSON text). Embeds
/// the fully resolved config and the seed list so a run is reproducible
/// from its artifacts alone.
std::string summary_json(const ExperimentConfig& cfg, const std::vector<RunResult>& results);

/// Renders the Table-style report (accuracy mean +- std, per-task finals,
/// forgetting, memory overhead, energy breakdown) from a run directory
/// containing summary.json and energy_report.json. Throws with the missing
/// file name if an artifact is absent.
std::string format_run_report(const std::string& run_dir);

}  // namespace memcl
