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

#include "memcl/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace memcl {
namespace {

// Non-overlapping rng substream tags for one run.
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamTrain = 2;
constexpr std::uint64_t kStreamShuffle = 3;
constexpr std::uint64_t kStreamEval = 4;

LayerSignals hidden_signals(Network& net) {
    return {net.hidden_weights(),     net.input_spike_indices(), net.hidden_state().current,
            net.hidden_state().error_acc, net.input_trace(),     net.hidden_state().trace};
}

LayerSignals output_signals(Network& net) {
    return {net.output_weights(),     net.hidden_spike_indices(), net.output_state().current,
            net.output_state().error_acc, net.hidden_state().trace, net.output_state().trace};
}

}  // namespace

std::vector<TaskPair> default_task_sequence() {
    return {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}};
}

std::string AccuracyMatrix::to_csv() const {
    std::string out = "task_trained,task_eval,accuracy\n";
    char buf[64];
    for (int trained = 0; trained < tasks; ++trained) {
        for (int evaluated = 0; evaluated < tasks; ++evaluated) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.4f\n", trained + 1, evaluated + 1,
                          at(trained, evaluated));
            out += buf;
        }
    }
    return out;
}

RunMetrics RunMetrics::from(const AccuracyMatrix& matrix) {
    RunMetrics m;
    const int tasks = matrix.tasks;
    if (tasks == 0) return m;
    m.final_per_task.resize(static_cast<std::size_t>(tasks));
    m.forgetting.resize(static_cast<std::size_t>(tasks));
    double sum = 0.0;
    for (int t = 0; t < tasks; ++t) {
        const double final_acc = matrix.at(tasks - 1, t);
        m.final_per_task[static_cast<std::size_t>(t)] = final_acc;
        sum += final_acc;
        double best = final_acc;
        for (int checkpoint = t; checkpoint < tasks; ++checkpoint) {
            best = std::max(best, matrix.at(checkpoint, t));
        }
        m.forgetting[static_cast<std::size_t>(t)] = best - final_acc;
    }
    m.mean_final = sum / static_cast<double>(tasks);
    return m;
}

DeviceLevelTable device_table_from_config(const ExperimentConfig& cfg) {
    if (!cfg.device.level_table.empty()) {
        return DeviceLevelTable::from_csv(cfg.device.level_table);
    }
    return DeviceLevelTable::default_table(cfg.device.default_std_fraction);
}

void train_sample(Network& net, PlasticityEngine& engine, std::span<const float> image,
                  int target_unit, int train_steps, Rng& rng, OpCounters& counters) {
    net.reset_dynamic_state();
    SpikeVector target(static_cast<std::size_t>(net.topology().outputs), 0);
    // the label neuron's target fires every timestep; the other stays silent
    target[static_cast<std::size_t>(target_unit)] = 1;

    for (int t = 0; t < train_steps; ++t) {
        net.encode_input(image, rng);
        net.forward_step(net.input_spikes());
        net.error_step(target);
        net.update_traces();
        LayerSignals hidden = hidden_signals(net);
        LayerSignals output = output_signals(net);
        engine.timestep(hidden, output, rng, counters);
    }

    ++counters.samples;
    LayerSignals hidden = hidden_signals(net);
    LayerSignals output = output_signals(net);
    engine.sample_end(hidden, output, rng, counters);
}

double evaluate(Network& net, const IdxDataset& data, const std::vector<int>& sample_indices,
                const TaskPair& task, int eval_steps, Rng rng) {
    if (sample_indices.empty()) return 0.0;
    int correct = 0;
    for (const int idx : sample_indices) {
        net.reset_dynamic_state();
        int counts[2] = {0, 0};
        for (int t = 0; t < eval_steps; ++t) {
            net.encode_input(data.image(idx), rng);
            net.forward_step(net.input_spikes());
            counts[0] += net.output_spikes()[0];
            counts[1] += net.output_spikes()[1];
        }
        const int predicted = counts[1] > counts[0] ? 1 : 0;  // tie -> neuron 0
        const int expected = data.labels[static_cast<std::size_t>(idx)] == task.class_b ? 1 : 0;
        if (predicted == expected) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(sample_indices.size());
}

RunResult run_continual(const IdxDataset& train, const IdxDataset& test,
                        const ExperimentConfig& cfg, std::uint64_t seed,
                        const std::vector<TaskPair>& tasks) {
    if (train.pixels() != cfg.network.inputs) {
        throw std::invalid_argument("dataset pixel count " + std::to_string(train.pixels()) +
                                    " does not match network.inputs " +
                                    std::to_string(cfg.network.inputs));
    }
    if (cfg.network.outputs != 2) {
        throw std::invalid_argument("the split protocol requires exactly 2 output neurons");
    }

    const Rng master(seed);
    Rng init_rng = master.derive(kStreamInit);
    Rng train_rng = master.derive(kStreamTrain);
    Rng shuffle_rng = master.derive(kStreamShuffle);
    const Rng eval_base = master.derive(kStreamEval);

    const auto table = device_table_from_config(cfg);

    NetworkTopology topology{cfg.network.inputs, cfg.network.hidden, cfg.network.outputs};
    SnnParams params;
    params.neurons.tau_syn_ms = static_cast<float>(cfg.snn.tau_syn_ms);
    params.neurons.tau_mem_ms = static_cast<float>(cfg.snn.tau_mem_ms);
    params.neurons.gain = static_cast<float>(cfg.snn.membrane_gain);
    params.neurons.v_rest = static_cast<float>(cfg.snn.v_rest);
    params.neurons.v_threshold = static_cast<float>(cfg.snn.v_threshold);
    params.neurons.refractory_steps = cfg.snn.refractory_steps;
    params.neurons.dt_ms = static_cast<float>(cfg.snn.dt_ms);
    params.tau_trace_ms = static_cast<float>(cfg.snn.tau_trace_ms);
    params.rate_max_hz = static_cast<float>(cfg.snn.rate_max_hz);
    params.feedback_amplitude = static_cast<float>(cfg.snn.feedback_amplitude);
    params.read_noise_std_us = static_cast<float>(cfg.device.read_noise_std_us);

    Network net(topology, params, table, cfg.device.n_mem, init_rng);
    if (params.read_noise_std_us > 0.0f) net.set_read_noise_rng(&train_rng);

    const float level_step = net.hidden_weights().level_step_weight_units();
    PlasticityConfig pcfg;
    pcfg.error_threshold = static_cast<float>(cfg.resolved_error_threshold(level_step));
    pcfg.learning_rate = static_cast<float>(cfg.plasticity.learning_rate);
    pcfg.current_min = static_cast<float>(cfg.plasticity.current_min);
    pcfg.current_max = static_cast<float>(cfg.plasticity.current_max);
    pcfg.function = cfg.meta_function();
    pcfg.bilinear_knee = static_cast<float>(cfg.plasticity.bilinear_knee);
    pcfg.bilinear_slope1 = static_cast<float>(cfg.plasticity.bilinear_slope1);
    pcfg.bilinear_level2 = static_cast<float>(cfg.plasticity.bilinear_level2);
    pcfg.bilinear_slope2 = static_cast<float>(cfg.plasticity.bilinear_slope2);

    MetaParams meta_params;
    meta_params.delta_m = static_cast<float>(cfg.plasticity.delta_m);
    meta_params.m_max = static_cast<float>(cfg.plasticity.m_max);
    meta_params.pre_threshold = static_cast<float>(cfg.plasticity.pre_threshold);
    meta_params.post_threshold = static_cast<float>(cfg.plasticity.post_threshold);
    meta_params.pre_threshold_output = cfg.resolved_pre_threshold_output();
    meta_params.post_threshold_output = cfg.resolved_post_threshold_output();

    AblationParams ablation_params;
    ablation_params.initial_probability =
        static_cast<float>(cfg.plasticity.initial_update_probability);
    ablation_params.decay_factor = static_cast<float>(cfg.plasticity.decay_factor);

    PlasticityEngine::LayerDims dims;
    dims.inputs = topology.inputs;
    dims.hidden = topology.hidden;
    dims.outputs = topology.outputs;
    dims.hidden_step_threshold = net.hidden_weights().level_step_weight_units();
    dims.output_step_threshold = net.output_weights().level_step_weight_units();

    auto engine = PlasticityEngine::create(cfg.mode(), pcfg, meta_params, ablation_params, dims);

    // bucket samples by task
    const int task_count = static_cast<int>(tasks.size());
    std::vector<std::vector<int>> train_by_task(tasks.size());
    std::vector<std::vector<int>> test_by_task(tasks.size());
    for (int t = 0; t < task_count; ++t) {
        for (int i = 0; i < train.count; ++i) {
            const int label = train.labels[static_cast<std::size_t>(i)];
            if (label == tasks[static_cast<std::size_t>(t)].class_a ||
                label == tasks[static_cast<std::size_t>(t)].class_b) {
                train_by_task[static_cast<std::size_t>(t)].push_back(i);
            }
        }
        for (int i = 0; i < test.count; ++i) {
            const int label = test.labels[static_cast<std::size_t>(i)];
            if (label == tasks[static_cast<std::size_t>(t)].class_a ||
                label == tasks[static_cast<std::size_t>(t)].class_b) {
                test_by_task[static_cast<std::size_t>(t)].push_back(i);
            }
        }
    }

    RunResult result;
    result.seed = seed;
    result.matrix = AccuracyMatrix(task_count);
    result.engine_name = std::string(engine->name());

    for (int t = 0; t < task_count; ++t) {
        // only the task-aware control experiment may hear about boundaries
        if (t > 0 && engine->task_aware()) engine->task_boundary();

        auto order = train_by_task[static_cast<std::size_t>(t)];
        shuffle(order, shuffle_rng);
        const auto take = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(static_cast<double>(order.size()) * cfg.run.train_fraction)));
        order.resize(std::min(order.size(), take));

        const auto& pair = tasks[static_cast<std::size_t>(t)];
        for (const int idx : order) {
            const int unit = train.labels[static_cast<std::size_t>(idx)] == pair.class_b ? 1 : 0;
            train_sample(net, *engine, train.image(idx), unit, cfg.snn.train_steps, train_rng,
                         result.counters);
            ++result.train_samples;
        }

        for (int e = 0; e <= t; ++e) {
            const auto stream =
                static_cast<std::uint64_t>(t) * 64ULL + static_cast<std::uint64_t>(e);
            const double acc =
                evaluate(net, test, test_by_task[static_cast<std::size_t>(e)],
                         tasks[static_cast<std::size_t>(e)], cfg.snn.eval_steps,
                         eval_base.derive(stream));
            result.matrix.set(t, e, acc);
        }
    }

    result.metrics = RunMetrics::from(result.matrix);
    result.consolidation_bytes = engine->consolidation_bytes();
    result.accumulator_bytes = engine->accumulator_bytes();
    return result;
}

}  // namespace memcl
