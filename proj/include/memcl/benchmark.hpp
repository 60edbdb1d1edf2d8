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

#include "memcl/config.hpp"
#include "memcl/dataset.hpp"
#include "memcl/energy.hpp"
#include "memcl/plasticity.hpp"
#include "memcl/snn.hpp"

namespace memcl {

/// One task of the domain-IL protocol: class_a maps to output neuron 0,
/// class_b to output neuron 1.
struct TaskPair {
    int class_a = 0;
    int class_b = 1;
};

/// The five-task split benchmark: (0,1), (2,3), (4,5), (6,7), (8,9).
std::vector<TaskPair> default_task_sequence();

/// acc[t_trained][t_evaluated] in percent; cells with t_evaluated >
/// t_trained are absent and reported as 0.
struct AccuracyMatrix {
    int tasks = 0;
    std::vector<double> cells;

    explicit AccuracyMatrix(int task_count = 0)
        : tasks(task_count),
          cells(static_cast<std::size_t>(task_count) * static_cast<std::size_t>(task_count),
                0.0) {}

    double at(int trained, int evaluated) const {
        return cells[static_cast<std::size_t>(trained) * static_cast<std::size_t>(tasks) +
                     static_cast<std::size_t>(evaluated)];
    }
    void set(int trained, int evaluated, double accuracy) {
        cells[static_cast<std::size_t>(trained) * static_cast<std::size_t>(tasks) +
              static_cast<std::size_t>(evaluated)] = accuracy;
    }

    /// `task_trained,task_eval,accuracy` rows (1-based task ids, all cells).
    std::string to_csv() const;
};

/// Mean of the final row, the final per-task accuracies, and per-task
/// forgetting (best checkpoint accuracy minus final accuracy).
struct RunMetrics {
    double mean_final = 0.0;
    std::vector<double> final_per_task;
    std::vector<double> forgetting;

    static RunMetrics from(const AccuracyMatrix& matrix);
};

struct RunResult {
    std::uint64_t seed = 0;
    AccuracyMatrix matrix;
    RunMetrics metrics;
    OpCounters counters;
    std::string engine_name;
    std::size_t consolidation_bytes = 0;
    std::size_t accumulator_bytes = 0;
    std::uint64_t train_samples = 0;
};

/// Presents one sample for `train_steps` timesteps: encode, forward, error
/// pathway, traces, plasticity, then the engine's end-of-sample hook.
void train_sample(Network& net, PlasticityEngine& engine, std::span<const float> image,
                  int target_unit, int train_steps, Rng& rng, OpCounters& counters);

/// Accuracy (percent) of the network on the given samples: prediction is
/// the output neuron with the larger spike count over eval_steps (ties go
/// to neuron 0); plasticity is off.
double evaluate(Network& net, const IdxDataset& data, const std::vector<int>& sample_indices,
                const TaskPair& task, int eval_steps, Rng rng);

/// The online domain-IL protocol: one epoch per task in order, no task
/// identity to the engine (the task-aware decaying control is the single
/// exception), evaluation of all tasks seen so far after each task.
RunResult run_continual(const IdxDataset& train, const IdxDataset& test,
                        const ExperimentConfig& cfg, std::uint64_t seed,
                        const std::vector<TaskPair>& tasks = default_task_sequence());

/// Device table per config (CSV when configured, built-in otherwise).
DeviceLevelTable device_table_from_config(const ExperimentConfig& cfg);

}  // namespace memcl
