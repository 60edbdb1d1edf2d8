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
#include <span>
#include <vector>

#include "memcl/device.hpp"
#include "memcl/rng.hpp"

namespace memcl {

/// Binary spike indicators, one entry per neuron per timestep.
using SpikeVector = std::vector<std::uint8_t>;

struct NeuronParams {
    float tau_syn_ms = 4.0f;
    float tau_mem_ms = 20.0f;
    float gain = 1.0f;  // membrane resistance R folded into a unitless gain
    float v_rest = 0.0f;
    float v_threshold = 1.0f;
    int refractory_steps = 4;
    float dt_ms = 1.0f;

    void validate() const;
};

/// Per-layer dynamic state: synaptic current, membrane potential, remaining
/// refractory steps, low-pass activity trace, and the dendritic error
/// accumulator.
struct LayerState {
    std::vector<float> current;
    std::vector<float> potential;
    std::vector<int> refractory;
    std::vector<float> trace;
    std::vector<float> error_acc;

    explicit LayerState(std::size_t n)
        : current(n, 0.0f), potential(n, 0.0f), refractory(n, 0), trace(n, 0.0f),
          error_acc(n, 0.0f) {}

    std::size_t size() const noexcept { return current.size(); }
    void reset(float v_rest);
};

/// Fixed random feedback matrices projecting output-error spikes onto the
/// hidden layer, stored row-major [hidden][outputs].
struct FeedbackWeights {
    int hidden = 0;
    int outputs = 0;
    std::vector<float> positive;  // false-positive channel
    std::vector<float> negative;  // false-negative channel

    static FeedbackWeights random(int hidden, int outputs, float amplitude, Rng& rng);
};

/// Bernoulli rate coding: each pixel spikes with probability
/// pixel * rate_max * dt (clamped to [0,1]). Negative pixels are rejected.
void encode_poisson(std::span<const float> image, float rate_max_hz, float dt_ms, Rng& rng,
                    SpikeVector& out);

/// One LIF timestep. The synaptic current low-passes the weighted input for
/// every neuron; refractory neurons hold their potential at rest and never
/// spike. Spiking neurons reset to rest and enter refractoriness.
void lif_step(LayerState& state, std::span<const float> weighted_input,
              const NeuronParams& params, SpikeVector& spikes);

/// Instantaneous comparator error neurons: fp spikes where the output fired
/// without a target spike, fn where the target fired without an output spike.
void error_spikes(const SpikeVector& output, const SpikeVector& target, SpikeVector& fp,
                  SpikeVector& fn);

/// error[j] = fp[j] - fn[j], in {-1, 0, +1}.
void error_at_output(const SpikeVector& fp, const SpikeVector& fn, std::span<float> error);

/// error[i] = sum_j (positive[i][j] * fp[j] - negative[i][j] * fn[j]).
void error_at_hidden(const SpikeVector& fp, const SpikeVector& fn, const FeedbackWeights& fb,
                     std::span<float> error);

/// Leaky dendritic integration of the error signal:
/// U += (dt / tau_mem) * (error * gain - U).
void dendrite_step(std::span<float> error_acc, std::span<const float> error,
                   const NeuronParams& params);

/// Activity trace update: X += dt * (spikes - X / tau_tr).
void trace_step(std::span<float> trace, const SpikeVector& spikes, float tau_tr_ms, float dt_ms);

struct NetworkTopology {
    int inputs = 784;
    int hidden = 200;
    int outputs = 2;
};

struct SnnParams {
    NeuronParams neurons;
    float tau_trace_ms = 20.0f;
    float rate_max_hz = 250.0f;
    float feedback_amplitude = 1.0f;
    float read_noise_std_us = 0.0f;
};

/// The 784-H-2 eRBP network: two memristor crossbars, fixed random feedback,
/// and the per-layer dynamic state. One instance is single-writer for the
/// duration of a run.
class Network {
public:
    Network(const NetworkTopology& topology, const SnnParams& params,
            const DeviceLevelTable& table, int n_mem, Rng& init_rng);

    /// Clears all dynamic state (currents, potentials, refractoriness,
    /// traces, dendritic accumulators). Called at each sample boundary.
    void reset_dynamic_state();

    /// One forward timestep from the given input spikes; fills the hidden
    /// and output spike vectors and index lists.
    void forward_step(const SpikeVector& input_spikes);

    /// Error pathway for one timestep: comparator error spikes against the
    /// target, random feedback to the hidden layer, dendritic integration.
    void error_step(const SpikeVector& target);

    /// Advances the input/hidden/output activity traces by one timestep.
    void update_traces();

    Crossbar& hidden_weights() noexcept { return hidden_weights_; }
    Crossbar& output_weights() noexcept { return output_weights_; }
    const Crossbar& hidden_weights() const noexcept { return hidden_weights_; }
    const Crossbar& output_weights() const noexcept { return output_weights_; }
    const FeedbackWeights& feedback() const noexcept { return feedback_; }

    LayerState& hidden_state() noexcept { return hidden_; }
    LayerState& output_state() noexcept { return output_; }
    std::vector<float>& input_trace() noexcept { return input_trace_; }

    const SpikeVector& hidden_spikes() const noexcept { return hidden_spikes_; }
    const SpikeVector& output_spikes() const noexcept { return output_spikes_; }
    const std::vector<std::int32_t>& input_spike_indices() const noexcept {
        return input_active_;
    }
    const std::vector<std::int32_t>& hidden_spike_indices() const noexcept {
        return hidden_active_;
    }

    const NetworkTopology& topology() const noexcept { return topology_; }
    const SnnParams& params() const noexcept { return params_; }

    /// Fills `out` with Poisson spikes for `image` and refreshes the active
    /// input index list.
    void encode_input(std::span<const float> image, Rng& rng);
    const SpikeVector& input_spikes() const noexcept { return input_spikes_; }

    void set_read_noise_rng(Rng* rng) noexcept { read_noise_rng_ = rng; }

private:
    void accumulate_weighted(const Crossbar& weights,
                             const std::vector<std::int32_t>& active_rows,
                             std::vector<float>& acc);

    NetworkTopology topology_;
    SnnParams params_;
    Crossbar hidden_weights_;
    Crossbar output_weights_;
    FeedbackWeights feedback_;

    LayerState hidden_;
    LayerState output_;
    std::vector<float> input_trace_;

    SpikeVector input_spikes_;
    SpikeVector hidden_spikes_;
    SpikeVector output_spikes_;
    SpikeVector fp_spikes_;
    SpikeVector fn_spikes_;
    std::vector<std::int32_t> input_active_;
    std::vector<std::int32_t> hidden_active_;
    std::vector<float> hidden_drive_;
    std::vector<float> output_drive_;
    std::vector<float> hidden_error_;
    std::vector<float> output_error_;

    Rng* read_noise_rng_ = nullptr;
};

}  // namespace memcl
