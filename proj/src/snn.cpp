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

#include "memcl/snn.hpp"

#include <algorithm>
#include <stdexcept>

#include "memcl/simd.hpp"

namespace memcl {

void NeuronParams::validate() const {
    if (tau_syn_ms <= 0.0f || tau_mem_ms <= 0.0f || dt_ms <= 0.0f) {
        throw std::invalid_argument("tau_syn, tau_mem and dt must be positive");
    }
    if (v_threshold <= v_rest) {
        throw std::invalid_argument("v_threshold must exceed v_rest");
    }
    if (refractory_steps < 0) {
        throw std::invalid_argument("refractory_steps must be non-negative");
    }
}

void LayerState::reset(float v_rest) {
    std::fill(current.begin(), current.end(), 0.0f);
    std::fill(potential.begin(), potential.end(), v_rest);
    std::fill(refractory.begin(), refractory.end(), 0);
    std::fill(trace.begin(), trace.end(), 0.0f);
    std::fill(error_acc.begin(), error_acc.end(), 0.0f);
}

FeedbackWeights FeedbackWeights::random(int hidden, int outputs, float amplitude, Rng& rng) {
    FeedbackWeights fb;
    fb.hidden = hidden;
    fb.outputs = outputs;
    const auto n = static_cast<std::size_t>(hidden) * static_cast<std::size_t>(outputs);
    fb.positive.resize(n);
    fb.negative.resize(n);
    for (auto& w : fb.positive) w = static_cast<float>(rng.uniform_in(-amplitude, amplitude));
    for (auto& w : fb.negative) w = static_cast<float>(rng.uniform_in(-amplitude, amplitude));
    return fb;
}

void encode_poisson(std::span<const float> image, float rate_max_hz, float dt_ms, Rng& rng,
                    SpikeVector& out) {
    out.assign(image.size(), 0);
    const float rate_dt = rate_max_hz * dt_ms * 1e-3f;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const float pixel = image[i];
        if (pixel < 0.0f) throw std::invalid_argument("pixel values must be non-negative");
        if (pixel == 0.0f) continue;
        const float p = std::min(pixel * rate_dt, 1.0f);
        if (rng.uniform_float() < p) out[i] = 1;
    }
}

void lif_step(LayerState& state, std::span<const float> weighted_input,
              const NeuronParams& params, SpikeVector& spikes) {
    const std::size_t n = state.size();
    spikes.assign(n, 0);

    const float k_syn = params.dt_ms / params.tau_syn_ms;
    simd::kernels().first_order_step(state.current.data(), weighted_input.data(), k_syn, 1.0f,
                                     n);

    const float k_mem = params.dt_ms / params.tau_mem_ms;
    for (std::size_t j = 0; j < n; ++j) {
        if (state.refractory[j] > 0) {
            --state.refractory[j];
            state.potential[j] = params.v_rest;
            continue;
        }
        float v = state.potential[j];
        v = v + k_mem * ((params.v_rest - v) + state.current[j] * params.gain);
        if (v >= params.v_threshold) {
            spikes[j] = 1;
            v = params.v_rest;
            state.refractory[j] = params.refractory_steps;
        }
        state.potential[j] = v;
    }
}

void error_spikes(const SpikeVector& output, const SpikeVector& target, SpikeVector& fp,
                  SpikeVector& fn) {
    if (output.size() != target.size()) {
        throw std::invalid_argument("output and target spike vectors differ in length");
    }
    const std::size_t n = output.size();
    fp.assign(n, 0);
    fn.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const int err = static_cast<int>(output[j]) - static_cast<int>(target[j]);
        if (err > 0) fp[j] = 1;
        else if (err < 0) fn[j] = 1;
    }
}

void error_at_output(const SpikeVector& fp, const SpikeVector& fn, std::span<float> error) {
    for (std::size_t j = 0; j < error.size(); ++j) {
        error[j] = static_cast<float>(fp[j]) - static_cast<float>(fn[j]);
    }
}

void error_at_hidden(const SpikeVector& fp, const SpikeVector& fn, const FeedbackWeights& fb,
                     std::span<float> error) {
    const auto outputs = static_cast<std::size_t>(fb.outputs);
    if (fp.size() != outputs || fn.size() != outputs) {
        throw std::invalid_argument("error spike vectors do not match feedback outputs");
    }
    for (std::size_t i = 0; i < error.size(); ++i) {
        const std::size_t base = i * outputs;
        float sum = 0.0f;
        for (std::size_t j = 0; j < outputs; ++j) {
            if (fp[j]) sum += fb.positive[base + j];
            if (fn[j]) sum -= fb.negative[base + j];
        }
        error[i] = sum;
    }
}

void dendrite_step(std::span<float> error_acc, std::span<const float> error,
                   const NeuronParams& params) {
    const float k = params.dt_ms / params.tau_mem_ms;
    simd::kernels().first_order_step(error_acc.data(), error.data(), k, params.gain,
                                     error_acc.size());
}

void trace_step(std::span<float> trace, const SpikeVector& spikes, float tau_tr_ms,
                float dt_ms) {
    simd::kernels().trace_step(trace.data(), spikes.data(), dt_ms, 1.0f / tau_tr_ms,
                               trace.size());
}

Network::Network(const NetworkTopology& topology, const SnnParams& params,
                 const DeviceLevelTable& table, int n_mem, Rng& init_rng)
    : topology_(topology),
      params_(params),
      hidden_weights_(topology.inputs, topology.hidden, n_mem, table,
                      WeightMapping::balanced(table, n_mem)),
      output_weights_(topology.hidden, topology.outputs, n_mem, table,
                      WeightMapping::balanced(table, n_mem)),
      feedback_(FeedbackWeights::random(topology.hidden, topology.outputs,
                                        params.feedback_amplitude, init_rng)),
      hidden_(static_cast<std::size_t>(topology.hidden)),
      output_(static_cast<std::size_t>(topology.outputs)),
      input_trace_(static_cast<std::size_t>(topology.inputs), 0.0f),
      input_spikes_(static_cast<std::size_t>(topology.inputs), 0),
      hidden_spikes_(static_cast<std::size_t>(topology.hidden), 0),
      output_spikes_(static_cast<std::size_t>(topology.outputs), 0),
      hidden_drive_(static_cast<std::size_t>(topology.hidden), 0.0f),
      output_drive_(static_cast<std::size_t>(topology.outputs), 0.0f),
      hidden_error_(static_cast<std::size_t>(topology.hidden), 0.0f),
      output_error_(static_cast<std::size_t>(topology.outputs), 0.0f) {
    params_.neurons.validate();
    hidden_weights_.randomize(init_rng);
    output_weights_.randomize(init_rng);
}

void Network::reset_dynamic_state() {
    hidden_.reset(params_.neurons.v_rest);
    output_.reset(params_.neurons.v_rest);
    std::fill(input_trace_.begin(), input_trace_.end(), 0.0f);
}

void Network::encode_input(std::span<const float> image, Rng& rng) {
    encode_poisson(image, params_.rate_max_hz, params_.neurons.dt_ms, rng, input_spikes_);
    input_active_.clear();
    for (std::size_t i = 0; i < input_spikes_.size(); ++i) {
        if (input_spikes_[i]) input_active_.push_back(static_cast<std::int32_t>(i));
    }
}

void Network::accumulate_weighted(const Crossbar& weights,
                                  const std::vector<std::int32_t>& active_rows,
                                  std::vector<float>& acc) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    const auto& k = simd::kernels();
    for (const auto row : active_rows) {
        k.accumulate_row(acc.data(), weights.row_values(row), acc.size());
    }
    if (params_.read_noise_std_us > 0.0f && read_noise_rng_ != nullptr &&
        !active_rows.empty()) {
        // Optional read noise: each weight read is G_eff + N(0, std), so the
        // accumulated drive picks up one deviate per (active row, column).
        const double scale = 1.0 / weights.mapping().g_scale_us;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            for (std::size_t r = 0; r < active_rows.size(); ++r) {
                acc[j] += static_cast<float>(
                    read_noise_rng_->normal(0.0, params_.read_noise_std_us) * scale);
            }
        }
    }
}

void Network::forward_step(const SpikeVector& input_spikes) {
    if (&input_spikes != &input_spikes_) {
        input_spikes_ = input_spikes;
        input_active_.clear();
        for (std::size_t i = 0; i < input_spikes_.size(); ++i) {
            if (input_spikes_[i]) input_active_.push_back(static_cast<std::int32_t>(i));
        }
    }

    accumulate_weighted(hidden_weights_, input_active_, hidden_drive_);
    lif_step(hidden_, hidden_drive_, params_.neurons, hidden_spikes_);
    hidden_active_.clear();
    for (std::size_t j = 0; j < hidden_spikes_.size(); ++j) {
        if (hidden_spikes_[j]) hidden_active_.push_back(static_cast<std::int32_t>(j));
    }

    accumulate_weighted(output_weights_, hidden_active_, output_drive_);
    lif_step(output_, output_drive_, params_.neurons, output_spikes_);
}

void Network::update_traces() {
    trace_step(input_trace_, input_spikes_, params_.tau_trace_ms, params_.neurons.dt_ms);
    trace_step(hidden_.trace, hidden_spikes_, params_.tau_trace_ms, params_.neurons.dt_ms);
    trace_step(output_.trace, output_spikes_, params_.tau_trace_ms, params_.neurons.dt_ms);
}

void Network::error_step(const SpikeVector& target) {
    error_spikes(output_spikes_, target, fp_spikes_, fn_spikes_);
    error_at_output(fp_spikes_, fn_spikes_, output_error_);
    error_at_hidden(fp_spikes_, fn_spikes_, feedback_, hidden_error_);
    dendrite_step(hidden_.error_acc, hidden_error_, params_.neurons);
    dendrite_step(output_.error_acc, output_error_, params_.neurons);
}

}  // namespace memcl
