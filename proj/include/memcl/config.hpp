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
#include <string>

#include "memcl/plasticity.hpp"

namespace memcl {

/// Raised for unknown keys, malformed values, or failed validation. Parsing
/// is strict on purpose: a misspelled hyperparameter must abort the run,
/// not silently fall back to a default.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully typed experiment configuration. File format: `[section]` headers
/// with `key = value` entries, `#` comments; every key is optional and has
/// a documented default; unknown sections or keys are fatal.
struct ExperimentConfig {
    struct Dataset {
        std::string train_images;
        std::string train_labels;
        std::string test_images;
        std::string test_labels;
    } dataset;

    struct Net {
        int inputs = 784;
        int hidden = 200;
        int outputs = 2;
    } network;

    struct Device {
        int n_mem = 7;
        std::string level_table;            // CSV path; empty = built-in table
        double default_std_fraction = 0.05; // std as a fraction of each level mean
        double read_noise_std_us = 0.0;     // optional additive read noise
    } device;

    struct Snn {
        double dt_ms = 1.0;
        double tau_syn_ms = 4.0;
        double tau_mem_ms = 20.0;
        double membrane_gain = 1.0;
        double v_rest = 0.0;
        double v_threshold = 1.0;
        int refractory_steps = 4;
        double tau_trace_ms = 20.0;
        double rate_max_hz = 250.0;
        int train_steps = 100;
        int eval_steps = 100;
        double feedback_amplitude = 1.0;
    } snn;

    struct Plasticity {
        std::string mode = "prob_meta_individual";
        std::string function = "exponential";
        double error_threshold = -1.0;  // -1 / "auto": one level-step worth of error
        double learning_rate = 0.05;
        double current_min = -2.0;
        double current_max = 2.0;
        double delta_m = 0.05;
        double m_max = 12.0;
        double pre_threshold = 0.8;
        double post_threshold = 0.8;
        double pre_threshold_output = -1.0;   // -1: inherit pre_threshold
        double post_threshold_output = -1.0;  // -1: inherit post_threshold
        double decay_factor = 5.0;
        double initial_update_probability = 1.0;
        double bilinear_knee = 1.25;
        double bilinear_slope1 = 0.6;
        double bilinear_level2 = 0.25;
        double bilinear_slope2 = 0.08;
    } plasticity;

    struct Energy {
        std::string cost_table;  // CSV path; empty = built-in defaults
    } energy;

    struct Run {
        std::uint64_t seed = 1;
        int seeds = 1;
        double train_fraction = 1.0;
        std::string output_dir = "runs/out";
        std::string kernel_backend = "auto";  // auto | scalar | avx2
    } run;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& text, const std::string& origin = "<string>");

    void validate() const;

    PlasticityMode mode() const;
    MetaFunction meta_function() const;

    /// error_threshold, resolving "auto" to level_step_weight_units /
    /// learning_rate (one conductance-level step of accumulated error).
    double resolved_error_threshold(double level_step_weight_units) const;

    float resolved_pre_threshold_output() const {
        return static_cast<float>(plasticity.pre_threshold_output >= 0.0
                                      ? plasticity.pre_threshold_output
                                      : plasticity.pre_threshold);
    }
    float resolved_post_threshold_output() const {
        return static_cast<float>(plasticity.post_threshold_output >= 0.0
                                      ? plasticity.post_threshold_output
                                      : plasticity.post_threshold);
    }

    /// Applies MEMCL_DATA_DIR to a relative dataset path.
    std::string resolve_dataset_path(const std::string& path) const;

    /// Numeric access by dotted key ("plasticity.post_threshold") for sweeps.
    bool has_numeric_key(const std::string& dotted_key) const;
    void set_numeric(const std::string& dotted_key, double value);

    /// Resolved-config echo embedded in every summary (JSON text).
    std::string echo_json() const;
};

}  // namespace memcl
