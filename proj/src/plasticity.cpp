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

#include "memcl/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memcl/simd.hpp"

namespace memcl {

void PlasticityConfig::validate() const {
    if (error_threshold <= 0.0f) throw std::invalid_argument("error_threshold must be positive");
    if (current_min >= current_max) {
        throw std::invalid_argument("boxcar bounds require current_min < current_max");
    }
}

MetaplasticState MetaplasticState::make(MetaMode mode, int rows, int cols, float delta_m,
                                        float m_max, float pre_threshold,
                                        float post_threshold) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("meta state dims must be >= 1");
    if (delta_m < 0.0f || m_max < 0.0f) {
        throw std::invalid_argument("delta_m and m_max must be non-negative");
    }
    MetaplasticState s;
    s.mode = mode;
    s.rows = rows;
    s.cols = cols;
    const std::size_t n = mode == MetaMode::kIndividual
                              ? static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)
                              : static_cast<std::size_t>(cols);
    s.coeff.assign(n, 0);
    s.delta_raw = static_cast<std::uint16_t>(
        std::min(std::lround(delta_m / kFixedScale), 65535L));
    s.max_raw = static_cast<std::uint16_t>(std::min(std::lround(m_max / kFixedScale), 65535L));
    s.pre_threshold = pre_threshold;
    s.post_threshold = post_threshold;
    return s;
}

float update_probability(float m, float w, const PlasticityConfig& cfg) noexcept {
    const float x = std::fabs(m * w);
    if (cfg.function == MetaFunction::kExponential) {
        return std::exp(-x);
    }
    float f;
    if (x <= cfg.bilinear_knee) {
        f = 1.0f - cfg.bilinear_slope1 * x;
    } else {
        f = cfg.bilinear_level2 - cfg.bilinear_slope2 * (x - cfg.bilinear_knee);
    }
    return std::clamp(f, 0.0f, 1.0f);
}

namespace {

enum class ProbRule { kBaseline, kMeta, kShuffled, kUniform };

// Shared body of threshold_update_step and ablation_step; the rule decides
// where the update probability comes from and what the hardware would have
// to touch per eligible weight.
void threshold_pass(std::span<const std::int32_t> pre_spikes, std::span<const float> post_current,
                    std::span<float> post_error_acc, Crossbar& weights,
                    const MetaplasticState* meta, const AblationState* ablation,
                    const PlasticityConfig& cfg, Rng& rng, OpCounters& counters, ProbRule rule) {
    const int cols = weights.cols();
    const bool shared = meta != nullptr && meta->mode == MetaMode::kShared;
    const auto read_kind = shared ? OpKind::kSramRead16Small : OpKind::kSramRead16;
    const auto func_kind = cfg.function == MetaFunction::kExponential ? OpKind::kExpEval
                                                                      : OpKind::kBilinearEval;

    for (int j = 0; j < cols; ++j) {
        const float u = post_error_acc[j];
        if (std::fabs(u) <= cfg.error_threshold) continue;

        const bool in_boxcar =
            post_current[j] > cfg.current_min && post_current[j] < cfg.current_max;
        if (in_boxcar && !pre_spikes.empty()) {
            const auto eligible = static_cast<std::uint64_t>(pre_spikes.size());
            counters.eligibility_events += eligible;
            switch (rule) {
                case ProbRule::kBaseline:
                    counters.record(OpKind::kAddCompare, eligible);
                    break;
                case ProbRule::kMeta:
                case ProbRule::kShuffled:
                    counters.record(read_kind, eligible);
                    counters.record(OpKind::kRngDraw, eligible);
                    counters.record(func_kind, eligible);
                    counters.record(OpKind::kAddCompare, eligible);
                    break;
                case ProbRule::kUniform:
                    counters.record(OpKind::kRngDraw, eligible);
                    counters.record(OpKind::kAddCompare, eligible);
                    break;
            }

            const auto direction = u < 0.0f ? StepDirection::kUp : StepDirection::kDown;
            for (const auto i : pre_spikes) {
                bool update = true;
                if (rule != ProbRule::kBaseline) {
                    float p = 1.0f;
                    switch (rule) {
                        case ProbRule::kMeta:
                            p = update_probability(meta->value(i, j), weights.value(i, j), cfg);
                            break;
                        case ProbRule::kShuffled: {
                            const std::uint32_t flat =
                                ablation->permutation[static_cast<std::size_t>(i) *
                                                          static_cast<std::size_t>(cols) +
                                                      static_cast<std::size_t>(j)];
                            const int pi = static_cast<int>(flat) / cols;
                            const int pj = static_cast<int>(flat) % cols;
                            p = update_probability(meta->value(pi, pj), weights.value(pi, pj),
                                                   cfg);
                            break;
                        }
                        case ProbRule::kUniform:
                            p = ablation->uniform_probability;
                            break;
                        default:
                            break;
                    }
                    update = rng.uniform_float() <= p;
                }
                if (update) {
                    weights.program_step(i, j, direction, rng);
                    counters.record(OpKind::kMemristorProgram);
                    ++counters.program_events;
                }
            }
        }

        post_error_acc[j] = 0.0f;  // reset whenever the threshold fired
    }
}

}  // namespace

void threshold_update_step(std::span<const std::int32_t> pre_spikes,
                           std::span<const float> post_current,
                           std::span<float> post_error_acc, Crossbar& weights,
                           const MetaplasticState* meta, const PlasticityConfig& cfg, Rng& rng,
                           OpCounters& counters) {
    threshold_pass(pre_spikes, post_current, post_error_acc, weights, meta, nullptr, cfg, rng,
                   counters, meta == nullptr ? ProbRule::kBaseline : ProbRule::kMeta);
}

void ablation_step(std::span<const std::int32_t> pre_spikes, std::span<const float> post_current,
                   std::span<float> post_error_acc, Crossbar& weights,
                   const MetaplasticState* meta, AblationState& ablation,
                   const PlasticityConfig& cfg, Rng& rng, OpCounters& counters) {
    if (ablation.variant == AblationState::Variant::kRandomConsolidation) {
        if (meta == nullptr) {
            throw std::invalid_argument("random consolidation requires metaplastic state");
        }
        if (ablation.permutation.size() != weights.weight_count()) {
            throw std::invalid_argument("permutation size does not match weight count");
        }
        threshold_pass(pre_spikes, post_current, post_error_acc, weights, meta, &ablation, cfg,
                       rng, counters, ProbRule::kShuffled);
    } else {
        threshold_pass(pre_spikes, post_current, post_error_acc, weights, nullptr, &ablation,
                       cfg, rng, counters, ProbRule::kUniform);
    }
}

void evolve_meta_individual(MetaplasticState& meta, std::span<const float> pre_trace,
                            std::span<const float> post_trace, OpCounters& counters) {
    if (meta.mode != MetaMode::kIndividual) {
        throw std::invalid_argument("evolve_meta_individual requires individual mode");
    }
    const int cols = meta.cols;
    for (int i = 0; i < meta.rows; ++i) {
        if (pre_trace[static_cast<std::size_t>(i)] < meta.pre_threshold) continue;
        const std::size_t base = static_cast<std::size_t>(i) * static_cast<std::size_t>(cols);
        for (int j = 0; j < cols; ++j) {
            if (post_trace[static_cast<std::size_t>(j)] < meta.post_threshold) continue;
            auto& raw = meta.coeff[base + static_cast<std::size_t>(j)];
            raw = static_cast<std::uint16_t>(
                std::min<std::uint32_t>(static_cast<std::uint32_t>(raw) + meta.delta_raw,
                                        meta.max_raw));
            ++counters.m_coeff_updates;
            counters.record(OpKind::kSramRead16);
            counters.record(OpKind::kSramWrite16);
        }
    }
}

void evolve_meta_shared(MetaplasticState& meta, std::span<const float> post_trace,
                        OpCounters& counters) {
    if (meta.mode != MetaMode::kShared) {
        throw std::invalid_argument("evolve_meta_shared requires shared mode");
    }
    for (int j = 0; j < meta.cols; ++j) {
        if (post_trace[static_cast<std::size_t>(j)] < meta.post_threshold) continue;
        auto& raw = meta.coeff[static_cast<std::size_t>(j)];
        raw = static_cast<std::uint16_t>(std::min<std::uint32_t>(
            static_cast<std::uint32_t>(raw) + meta.delta_raw, meta.max_raw));
        ++counters.m_coeff_updates;
        counters.record(OpKind::kSramRead16Small);
        counters.record(OpKind::kSramWrite16Small);
    }
}

GradientAccumulator GradientAccumulator::make(int rows, int cols, float step_threshold) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("accumulator dims must be >= 1");
    if (step_threshold <= 0.0f) throw std::invalid_argument("step_threshold must be positive");
    GradientAccumulator g;
    g.rows = rows;
    g.cols = cols;
    g.step_threshold = step_threshold;
    const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    g.acc.assign(n, 0.0f);
    g.modulation.assign(n, 1.0f);
    g.post_factor.assign(static_cast<std::size_t>(cols), 0.0f);
    g.exceed_scratch.assign(static_cast<std::size_t>(cols), 0);
    return g;
}

void GradientAccumulator::reset_accumulators() {
    std::fill(acc.begin(), acc.end(), 0.0f);
}

void GradientAccumulator::rebuild_modulation(const MetaplasticState& meta,
                                             const Crossbar& weights,
                                             const PlasticityConfig& cfg) {
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            refresh_modulation(i, j, meta, weights, cfg);
        }
    }
}

void GradientAccumulator::refresh_modulation(int row, int col, const MetaplasticState& meta,
                                             const Crossbar& weights,
                                             const PlasticityConfig& cfg) {
    const std::size_t idx =
        static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
        static_cast<std::size_t>(col);
    modulation[idx] = update_probability(meta.value(row, col), weights.value(row, col), cfg);
}

void gradient_accumulate_step(std::span<const std::int32_t> pre_spikes,
                              std::span<const float> post_current,
                              std::span<const float> post_error_acc, Crossbar& weights,
                              const MetaplasticState& meta, GradientAccumulator& grad,
                              const PlasticityConfig& cfg, Rng& rng, OpCounters& counters) {
    if (pre_spikes.empty()) return;
    const int cols = weights.cols();

    std::uint64_t posts_in_boxcar = 0;
    for (int j = 0; j < cols; ++j) {
        const bool in_boxcar =
            post_current[j] > cfg.current_min && post_current[j] < cfg.current_max;
        grad.post_factor[static_cast<std::size_t>(j)] =
            in_boxcar ? -cfg.learning_rate * post_error_acc[j] : 0.0f;
        posts_in_boxcar += in_boxcar ? 1u : 0u;
    }

    // Hardware cost per eligible (spiking pre, in-boxcar post) pair: read m,
    // read + write the 32-bit gradient word, one metaplasticity function
    // evaluation, one multiply, one accumulate-and-compare.
    const std::uint64_t eligible = posts_in_boxcar * pre_spikes.size();
    counters.eligibility_events += eligible;
    counters.record(OpKind::kSramRead16, eligible);
    counters.record(OpKind::kSramRead32, eligible);
    counters.record(OpKind::kSramWrite32, eligible);
    counters.record(cfg.function == MetaFunction::kExponential ? OpKind::kExpEval
                                                               : OpKind::kBilinearEval,
                    eligible);
    counters.record(OpKind::kMultiply, eligible);
    counters.record(OpKind::kAddCompare, eligible);

    const auto& kernels = simd::kernels();
    const float threshold = grad.step_threshold;
    for (const auto i : pre_spikes) {
        float* acc_row = grad.acc.data() +
                         static_cast<std::size_t>(i) * static_cast<std::size_t>(cols);
        const float* mod_row = grad.modulation.data() +
                               static_cast<std::size_t>(i) * static_cast<std::size_t>(cols);
        kernels.multiply_add(acc_row, grad.post_factor.data(), mod_row,
                             static_cast<std::size_t>(cols));
        const std::size_t hits = kernels.find_exceeding(
            acc_row, threshold, static_cast<std::size_t>(cols), grad.exceed_scratch.data());
        for (std::size_t h = 0; h < hits; ++h) {
            const int j = static_cast<int>(grad.exceed_scratch[h]);
            float& a = acc_row[j];
            while (std::fabs(a) >= threshold) {
                const auto direction = a > 0.0f ? StepDirection::kUp : StepDirection::kDown;
                weights.program_step(i, j, direction, rng);
                counters.record(OpKind::kMemristorProgram);
                ++counters.program_events;
                a += a > 0.0f ? -threshold : threshold;
            }
            grad.refresh_modulation(i, j, meta, weights, cfg);
        }
    }
}

void AblationState::resample_permutation(std::size_t weight_count, Rng& rng) {
    permutation.resize(weight_count);
    for (std::size_t i = 0; i < weight_count; ++i) {
        permutation[i] = static_cast<std::uint32_t>(i);
    }
    shuffle(permutation, rng);
}

// ---------------------------------------------------------------------------
// Engines
// ---------------------------------------------------------------------------

void PlasticityEngine::sample_end(LayerSignals&, LayerSignals&, Rng&, OpCounters&) {}

namespace {

LayerSignals& pick(LayerSignals& hidden, LayerSignals& output, int which) {
    return which == 0 ? hidden : output;
}

class BaselineEngine final : public PlasticityEngine {
public:
    explicit BaselineEngine(const PlasticityConfig& cfg) : cfg_(cfg) {}

    void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                  OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            threshold_update_step(sig.pre_spike_indices, sig.post_current, sig.post_error_acc,
                                  sig.weights, nullptr, cfg_, rng, counters);
        }
    }

    std::string_view name() const noexcept override { return "none"; }

private:
    PlasticityConfig cfg_;
};

class ProbMetaEngine final : public PlasticityEngine {
public:
    ProbMetaEngine(MetaMode mode, const PlasticityConfig& cfg, const MetaParams& params,
                   const LayerDims& dims)
        : mode_(mode), cfg_(cfg) {
        meta_[0] = MetaplasticState::make(mode, dims.inputs, dims.hidden, params.delta_m,
                                          params.m_max, params.pre_threshold,
                                          params.post_threshold);
        meta_[1] = MetaplasticState::make(mode, dims.hidden, dims.outputs, params.delta_m,
                                          params.m_max, params.pre_threshold_output,
                                          params.post_threshold_output);
    }

    void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                  OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            threshold_update_step(sig.pre_spike_indices, sig.post_current, sig.post_error_acc,
                                  sig.weights, &meta_[layer], cfg_, rng, counters);
        }
    }

    void sample_end(LayerSignals& hidden, LayerSignals& output, Rng&,
                    OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            if (mode_ == MetaMode::kIndividual) {
                evolve_meta_individual(meta_[layer], sig.pre_trace, sig.post_trace, counters);
            } else {
                evolve_meta_shared(meta_[layer], sig.post_trace, counters);
            }
        }
    }

    std::size_t consolidation_bytes() const noexcept override {
        return meta_[0].storage_bytes() + meta_[1].storage_bytes();
    }

    std::string_view name() const noexcept override {
        return mode_ == MetaMode::kIndividual ? "prob_meta_individual" : "prob_meta_shared";
    }

    const MetaplasticState& meta(int layer) const { return meta_[layer]; }

private:
    MetaMode mode_;
    PlasticityConfig cfg_;
    MetaplasticState meta_[2];
};

class RandomConsolidationEngine final : public PlasticityEngine {
public:
    RandomConsolidationEngine(const PlasticityConfig& cfg, const MetaParams& params,
                              const LayerDims& dims)
        : cfg_(cfg) {
        meta_[0] = MetaplasticState::make(MetaMode::kIndividual, dims.inputs, dims.hidden,
                                          params.delta_m, params.m_max, params.pre_threshold,
                                          params.post_threshold);
        meta_[1] = MetaplasticState::make(MetaMode::kIndividual, dims.hidden, dims.outputs,
                                          params.delta_m, params.m_max,
                                          params.pre_threshold_output,
                                          params.post_threshold_output);
        ablation_[0].variant = AblationState::Variant::kRandomConsolidation;
        ablation_[1].variant = AblationState::Variant::kRandomConsolidation;
        needs_permutation_ = true;
    }

    void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                  OpCounters& counters) override {
        if (needs_permutation_) {
            // first sample of the run
            ablation_[0].resample_permutation(hidden.weights.weight_count(), rng);
            ablation_[1].resample_permutation(output.weights.weight_count(), rng);
            needs_permutation_ = false;
        }
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            ablation_step(sig.pre_spike_indices, sig.post_current, sig.post_error_acc,
                          sig.weights, &meta_[layer], ablation_[layer], cfg_, rng, counters);
        }
    }

    void sample_end(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                    OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            evolve_meta_individual(meta_[layer], sig.pre_trace, sig.post_trace, counters);
        }
        ablation_[0].resample_permutation(hidden.weights.weight_count(), rng);
        ablation_[1].resample_permutation(output.weights.weight_count(), rng);
    }

    std::size_t consolidation_bytes() const noexcept override {
        return meta_[0].storage_bytes() + meta_[1].storage_bytes();
    }

    std::string_view name() const noexcept override { return "random_consolidation"; }

private:
    PlasticityConfig cfg_;
    MetaplasticState meta_[2];
    AblationState ablation_[2];
    bool needs_permutation_ = true;
};

class DecayingPlasticityEngine final : public PlasticityEngine {
public:
    DecayingPlasticityEngine(const PlasticityConfig& cfg, const AblationParams& params)
        : cfg_(cfg) {
        if (params.initial_probability <= 0.0f || params.initial_probability > 1.0f) {
            throw std::invalid_argument("initial update probability must be in (0, 1]");
        }
        if (params.decay_factor <= 1.0f) {
            throw std::invalid_argument("decay factor must exceed 1");
        }
        state_.variant = AblationState::Variant::kDecayingPlasticity;
        state_.uniform_probability = params.initial_probability;
        state_.decay_factor = params.decay_factor;
    }

    void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                  OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            ablation_step(sig.pre_spike_indices, sig.post_current, sig.post_error_acc,
                          sig.weights, nullptr, state_, cfg_, rng, counters);
        }
    }

    bool task_aware() const noexcept override { return true; }
    void task_boundary() override { state_.apply_task_decay(); }

    float current_probability() const noexcept { return state_.uniform_probability; }

    std::string_view name() const noexcept override { return "decaying_plasticity"; }

private:
    PlasticityConfig cfg_;
    AblationState state_;
};

class GradAccumEngine final : public PlasticityEngine {
public:
    GradAccumEngine(const PlasticityConfig& cfg, const MetaParams& params, const LayerDims& dims)
        : cfg_(cfg) {
        meta_[0] = MetaplasticState::make(MetaMode::kIndividual, dims.inputs, dims.hidden,
                                          params.delta_m, params.m_max, params.pre_threshold,
                                          params.post_threshold);
        meta_[1] = MetaplasticState::make(MetaMode::kIndividual, dims.hidden, dims.outputs,
                                          params.delta_m, params.m_max,
                                          params.pre_threshold_output,
                                          params.post_threshold_output);
        grad_[0] = GradientAccumulator::make(dims.inputs, dims.hidden,
                                             dims.hidden_step_threshold);
        grad_[1] = GradientAccumulator::make(dims.hidden, dims.outputs,
                                             dims.output_step_threshold);
    }

    void timestep(LayerSignals& hidden, LayerSignals& output, Rng& rng,
                  OpCounters& counters) override {
        if (!cache_ready_) {
            grad_[0].rebuild_modulation(meta_[0], hidden.weights, cfg_);
            grad_[1].rebuild_modulation(meta_[1], output.weights, cfg_);
            cache_ready_ = true;
        }
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            gradient_accumulate_step(sig.pre_spike_indices, sig.post_current,
                                     sig.post_error_acc, sig.weights, meta_[layer],
                                     grad_[layer], cfg_, rng, counters);
        }
    }

    void sample_end(LayerSignals& hidden, LayerSignals& output, Rng&,
                    OpCounters& counters) override {
        for (int layer = 0; layer < 2; ++layer) {
            auto& sig = pick(hidden, output, layer);
            auto& meta = meta_[layer];
            evolve_meta_individual(meta, sig.pre_trace, sig.post_trace, counters);
            // refresh the modulation cache of every coefficient that moved
            for (int i = 0; i < meta.rows; ++i) {
                if (sig.pre_trace[static_cast<std::size_t>(i)] < meta.pre_threshold) continue;
                for (int j = 0; j < meta.cols; ++j) {
                    if (sig.post_trace[static_cast<std::size_t>(j)] < meta.post_threshold) {
                        continue;
                    }
                    grad_[layer].refresh_modulation(i, j, meta, sig.weights, cfg_);
                }
            }
            grad_[layer].reset_accumulators();
        }
    }

    std::size_t consolidation_bytes() const noexcept override {
        return meta_[0].storage_bytes() + meta_[1].storage_bytes();
    }

    std::size_t accumulator_bytes() const noexcept override {
        return grad_[0].storage_bytes() + grad_[1].storage_bytes();
    }

    std::string_view name() const noexcept override { return "grad_accum_meta"; }

    const GradientAccumulator& accumulator(int layer) const { return grad_[layer]; }

private:
    PlasticityConfig cfg_;
    MetaplasticState meta_[2];
    GradientAccumulator grad_[2];
    bool cache_ready_ = false;
};

}  // namespace

std::string_view plasticity_mode_name(PlasticityMode mode) noexcept {
    switch (mode) {
        case PlasticityMode::kNone: return "none";
        case PlasticityMode::kProbMetaIndividual: return "prob_meta_individual";
        case PlasticityMode::kProbMetaShared: return "prob_meta_shared";
        case PlasticityMode::kGradAccumMeta: return "grad_accum_meta";
        case PlasticityMode::kRandomConsolidation: return "random_consolidation";
        case PlasticityMode::kDecayingPlasticity: return "decaying_plasticity";
    }
    return "unknown";
}

bool plasticity_mode_from_name(std::string_view name, PlasticityMode& mode) noexcept {
    for (const auto candidate :
         {PlasticityMode::kNone, PlasticityMode::kProbMetaIndividual,
          PlasticityMode::kProbMetaShared, PlasticityMode::kGradAccumMeta,
          PlasticityMode::kRandomConsolidation, PlasticityMode::kDecayingPlasticity}) {
        if (plasticity_mode_name(candidate) == name) {
            mode = candidate;
            return true;
        }
    }
    return false;
}

std::unique_ptr<PlasticityEngine> PlasticityEngine::create(PlasticityMode mode,
                                                           const PlasticityConfig& cfg,
                                                           const MetaParams& meta_params,
                                                           const AblationParams& ablation_params,
                                                           const LayerDims& dims) {
    cfg.validate();
    switch (mode) {
        case PlasticityMode::kNone:
            return std::make_unique<BaselineEngine>(cfg);
        case PlasticityMode::kProbMetaIndividual:
            return std::make_unique<ProbMetaEngine>(MetaMode::kIndividual, cfg, meta_params,
                                                    dims);
        case PlasticityMode::kProbMetaShared:
            return std::make_unique<ProbMetaEngine>(MetaMode::kShared, cfg, meta_params, dims);
        case PlasticityMode::kGradAccumMeta:
            return std::make_unique<GradAccumEngine>(cfg, meta_params, dims);
        case PlasticityMode::kRandomConsolidation:
            return std::make_unique<RandomConsolidationEngine>(cfg, meta_params, dims);
        case PlasticityMode::kDecayingPlasticity:
            return std::make_unique<DecayingPlasticityEngine>(cfg, ablation_params);
    }
    throw std::invalid_argument("unknown plasticity mode");
}

}  // namespace memcl
