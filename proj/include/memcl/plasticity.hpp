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
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "memcl/device.hpp"
#include "memcl/energy.hpp"
#include "memcl/rng.hpp"

namespace memcl {

enum class MetaMode { kIndividual, kShared };
enum class MetaFunction { kExponential, kBilinear };

/// Knobs of the weight-update engines. `error_threshold` is the |U|
/// magnitude that triggers an update pass, `learning_rate` applies to the
/// gradient-accumulation path only, and the boxcar bounds gate updates on
/// the post-synaptic current. The bilinear coefficients approximate
/// e^{-x} with two chords meeting at the knee (1 - 0.6x up to 1.25, then
/// 0.25 - 0.08(x - 1.25) floored at 0) and are overridable.
struct PlasticityConfig {
    float error_threshold = 0.3175f;
    float learning_rate = 0.05f;
    float current_min = -2.0f;
    float current_max = 2.0f;
    MetaFunction function = MetaFunction::kExponential;
    float bilinear_knee = 1.25f;
    float bilinear_slope1 = 0.6f;
    float bilinear_level2 = 0.25f;
    float bilinear_slope2 = 0.08f;

    void validate() const;
};

/// Metaplastic coefficients in Q8.8 fixed point (16-bit storage is part of
/// the memory-overhead contract, not a cosmetic claim). Individual mode
/// stores one coefficient per weight, shared mode one per post-synaptic
/// neuron. Coefficients never decrease and saturate at m_max.
struct MetaplasticState {
    static constexpr float kFixedScale = 1.0f / 256.0f;

    MetaMode mode = MetaMode::kIndividual;
    int rows = 0;
    int cols = 0;
    std::vector<std::uint16_t> coeff;
    std::uint16_t delta_raw = 13;  // 0.05 quantized
    std::uint16_t max_raw = 3072;  // 12.0
    float pre_threshold = 0.8f;
    float post_threshold = 0.8f;

    static MetaplasticState make(MetaMode mode, int rows, int cols, float delta_m, float m_max,
                                 float pre_threshold, float post_threshold);

    float value(int row, int col) const noexcept {
        const std::size_t idx = mode == MetaMode::kIndividual
                                    ? static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                                          static_cast<std::size_t>(col)
                                    : static_cast<std::size_t>(col);
        return static_cast<float>(coeff[idx]) * kFixedScale;
    }

    std::size_t coefficient_count() const noexcept { return coeff.size(); }
    std::size_t storage_bytes() const noexcept { return coeff.size() * sizeof(std::uint16_t); }
};

/// Update probability of a weight: e^{-|m w|}, or its two-segment bilinear
/// approximation, clamped to [0, 1].
float update_probability(float m, float w, const PlasticityConfig& cfg) noexcept;

/// One timestep of error-threshold-triggered probabilistic updates for one
/// layer. For every post-neuron whose |U| exceeds the threshold: every
/// spiking pre-neuron is eligible while the post current lies inside the
/// boxcar, each eligible weight is programmed one level (negative error up,
/// positive error down) with probability p_update, and U resets to zero no
/// matter how many weights changed. `meta == nullptr` is the baseline
/// (p_update = 1, no random draw).
void threshold_update_step(std::span<const std::int32_t> pre_spikes,
                           std::span<const float> post_current,
                           std::span<float> post_error_acc, Crossbar& weights,
                           const MetaplasticState* meta, const PlasticityConfig& cfg, Rng& rng,
                           OpCounters& counters);

/// End-of-sample coefficient evolution, individual mode: m_ij grows by
/// delta_m where the pre trace meets pre_threshold AND the post trace meets
/// post_threshold.
void evolve_meta_individual(MetaplasticState& meta, std::span<const float> pre_trace,
                            std::span<const float> post_trace, OpCounters& counters);

/// Shared mode: m_j grows by delta_m where the post trace meets
/// post_threshold (no pre-synaptic condition).
void evolve_meta_shared(MetaplasticState& meta, std::span<const float> post_trace,
                        OpCounters& counters);

/// High-precision per-weight gradient accumulators for the
/// gradient-accumulation reference, with a cached metaplasticity modulation
/// factor per weight (refreshed whenever its m or w changes).
struct GradientAccumulator {
    int rows = 0;
    int cols = 0;
    float step_threshold = 0.0f;
    std::vector<float> acc;
    std::vector<float> modulation;

    // scratch reused across timesteps
    std::vector<float> post_factor;
    std::vector<std::uint32_t> exceed_scratch;

    static GradientAccumulator make(int rows, int cols, float step_threshold);

    void reset_accumulators();
    void rebuild_modulation(const MetaplasticState& meta, const Crossbar& weights,
                            const PlasticityConfig& cfg);
    void refresh_modulation(int row, int col, const MetaplasticState& meta,
                            const Crossbar& weights, const PlasticityConfig& cfg);

    std::size_t storage_bytes() const noexcept { return acc.size() * sizeof(float); }
};

/// One timestep of modulated gradient accumulation: every (spiking pre,
/// in-boxcar post) pair adds -eta * U_j * f(m_ij, w_ij) to its accumulator;
/// each time |acc| reaches one conductance-level-step worth of weight
/// change, the device is programmed one level in sign(acc) direction and
/// the threshold charge is subtracted. U is not reset on this path.
void gradient_accumulate_step(std::span<const std::int32_t> pre_spikes,
                              std::span<const float> post_current,
                              std::span<const float> post_error_acc, Crossbar& weights,
                              const MetaplasticState& meta, GradientAccumulator& grad,
                              const PlasticityConfig& cfg, Rng& rng, OpCounters& counters);

/// State of the two controlled-experiment variants: a per-sample random
/// permutation of the update probabilities (random consolidation), or one
/// uniform update probability divided by a factor at every task boundary
/// (decaying plasticity; the only task-aware engine, by design).
struct AblationState {
    enum class Variant { kRandomConsolidation, kDecayingPlasticity };

    Variant variant = Variant::kRandomConsolidation;
    std::vector<std::uint32_t> permutation;
    float uniform_probability = 1.0f;
    float decay_factor = 5.0f;

    void resample_permutation(std::size_t weight_count, Rng& rng);
    void apply_task_decay() { uniform_probability /= decay_factor; }
};

/// threshold_update_step with the variant probability rule: random
/// consolidation reads (m, w) of the permuted weight slot; decaying
/// plasticity uses the uniform probability for every weight.
void ablation_step(std::span<const std::int32_t> pre_spikes, std::span<const float> post_current,
                   std::span<float> post_error_acc, Crossbar& weights,
                   const MetaplasticState* meta, AblationState& ablation,
                   const PlasticityConfig& cfg, Rng& rng, OpCounters& counters);

// ---------------------------------------------------------------------------
// Engine layer: binds the update rules above to the two network layers.
// ---------------------------------------------------------------------------

enum class PlasticityMode {
    kNone,
    kProbMetaIndividual,
    kProbMetaShared,
    kGradAccumMeta,
    kRandomConsolidation,
    kDecayingPlasticity,
};

std::string_view plasticity_mode_name(PlasticityMode mode) noexcept;
bool plasticity_mode_from_name(std::string_view name, PlasticityMode& mode) noexcept;

/// Coefficient-evolution hyperparameters; the output layer can override the
/// trace thresholds.
struct MetaParams {
    float delta_m = 0.05f;
    float m_max = 12.0f;
    float pre_threshold = 0.8f;
    float post_threshold = 0.8f;
    float pre_threshold_output = 0.8f;
    float post_threshold_output = 0.8f;
};

struct AblationParams {
    float initial_probability = 1.0f;
    float decay_factor = 5.0f;
};

/// Everything an engine needs to know about one weight layer at one
/// timestep (or at a sample boundary, where the traces matter).
struct LayerSignals {
    Crossbar& weights;
    const std::vector<std::int32_t>& pre_spike_indices;
    std::span<const float> post_current;
    std::span<float> post_error_acc;
    std::span<const float> pre_trace;
    std::span<const float> post_trace;
};

class PlasticityEngine {
public:
    virtual ~PlasticityEngine() = default;

    virtual void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                          OpCounters& counters) = 0;
    virtual void sample_end(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                            OpCounters& counters);

    /// True only for the decaying-plasticity control; the benchmark wires
    /// the task-boundary callback exclusively to engines that return true.
    virtual bool task_aware() const noexcept { return false; }
    virtual void task_boundary() {}

    /// Bytes of metaplastic-coefficient storage (16-bit each).
    virtual std::size_t consolidation_bytes() const noexcept { return 0; }
    /// Bytes of high-precision gradient storage (32-bit each).
    virtual std::size_t accumulator_bytes() const noexcept { return 0; }

    virtual std::string_view name() const noexcept = 0;

    struct LayerDims {
        int inputs = 0;
        int hidden = 0;
        int outputs = 0;
        float hidden_step_threshold = 0.0f;
        float output_step_threshold = 0.0f;
    };

    static std::unique_ptr<PlasticityEngine> create(PlasticityMode mode,
                                                    const PlasticityConfig& cfg,
                                                    const MetaParams& meta_params,
                                                    const AblationParams& ablation_params,
                                                    const LayerDims& dims);
};

}  // namespace memcl
