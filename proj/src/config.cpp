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

#include "memcl/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace memcl {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" +
                          value + "'");
    }
}

std::string unquote(const std::string& value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return value.substr(1, value.size() - 2);
    }
    return value;
}

struct Entry {
    std::function<void(ExperimentConfig&, const std::string&)> assign;
    // non-null for numeric keys (sweepable)
    std::function<void(ExperimentConfig&, double)> assign_numeric;
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> reg = [] {
        std::map<std::string, Entry> r;
        auto str = [&r](const char* name, std::string ExperimentConfig::Dataset::* field) {
            r[name] = {[field](ExperimentConfig& c, const std::string& v) {
                           c.dataset.*field = unquote(v);
                       },
                       nullptr};
        };
        str("dataset.train_images", &ExperimentConfig::Dataset::train_images);
        str("dataset.train_labels", &ExperimentConfig::Dataset::train_labels);
        str("dataset.test_images", &ExperimentConfig::Dataset::test_images);
        str("dataset.test_labels", &ExperimentConfig::Dataset::test_labels);

        auto num = [&r](const char* name, auto accessor) {
            r[name] = {[name, accessor](ExperimentConfig& c, const std::string& v) {
                           accessor(c) = parse_double(name, v);
                       },
                       [accessor](ExperimentConfig& c, double v) { accessor(c) = v; }};
        };
        auto integer = [&r](const char* name, auto accessor) {
            r[name] = {[name, accessor](ExperimentConfig& c, const std::string& v) {
                           accessor(c) = parse_int(name, v);
                       },
                       [accessor](ExperimentConfig& c, double v) {
                           accessor(c) = static_cast<int>(v);
                       }};
        };

        integer("network.inputs", [](ExperimentConfig& c) -> int& { return c.network.inputs; });
        integer("network.hidden", [](ExperimentConfig& c) -> int& { return c.network.hidden; });
        integer("network.outputs",
                [](ExperimentConfig& c) -> int& { return c.network.outputs; });

        integer("device.n_mem", [](ExperimentConfig& c) -> int& { return c.device.n_mem; });
        r["device.level_table"] = {[](ExperimentConfig& c, const std::string& v) {
                                       c.device.level_table = unquote(v);
                                   },
                                   nullptr};
        num("device.default_std_fraction",
            [](ExperimentConfig& c) -> double& { return c.device.default_std_fraction; });
        num("device.read_noise_std_us",
            [](ExperimentConfig& c) -> double& { return c.device.read_noise_std_us; });

        num("snn.dt_ms", [](ExperimentConfig& c) -> double& { return c.snn.dt_ms; });
        num("snn.tau_syn_ms", [](ExperimentConfig& c) -> double& { return c.snn.tau_syn_ms; });
        num("snn.tau_mem_ms", [](ExperimentConfig& c) -> double& { return c.snn.tau_mem_ms; });
        num("snn.membrane_gain",
            [](ExperimentConfig& c) -> double& { return c.snn.membrane_gain; });
        num("snn.v_rest", [](ExperimentConfig& c) -> double& { return c.snn.v_rest; });
        num("snn.v_threshold", [](ExperimentConfig& c) -> double& { return c.snn.v_threshold; });
        integer("snn.refractory_steps",
                [](ExperimentConfig& c) -> int& { return c.snn.refractory_steps; });
        num("snn.tau_trace_ms",
            [](ExperimentConfig& c) -> double& { return c.snn.tau_trace_ms; });
        num("snn.rate_max_hz", [](ExperimentConfig& c) -> double& { return c.snn.rate_max_hz; });
        integer("snn.train_steps",
                [](ExperimentConfig& c) -> int& { return c.snn.train_steps; });
        integer("snn.eval_steps", [](ExperimentConfig& c) -> int& { return c.snn.eval_steps; });
        num("snn.feedback_amplitude",
            [](ExperimentConfig& c) -> double& { return c.snn.feedback_amplitude; });

        r["plasticity.mode"] = {[](ExperimentConfig& c, const std::string& v) {
                                    c.plasticity.mode = unquote(v);
                                },
                                nullptr};
        r["plasticity.function"] = {[](ExperimentConfig& c, const std::string& v) {
                                        c.plasticity.function = unquote(v);
                                    },
                                    nullptr};
        // accepts "auto" (one conductance-level step of error) or a number
        r["plasticity.error_threshold"] = {
            [](ExperimentConfig& c, const std::string& v) {
                if (unquote(v) == "auto") {
                    c.plasticity.error_threshold = -1.0;
                } else {
                    c.plasticity.error_threshold = parse_double("plasticity.error_threshold", v);
                }
            },
            [](ExperimentConfig& c, double v) { c.plasticity.error_threshold = v; }};
        num("plasticity.learning_rate",
            [](ExperimentConfig& c) -> double& { return c.plasticity.learning_rate; });
        num("plasticity.current_min",
            [](ExperimentConfig& c) -> double& { return c.plasticity.current_min; });
        num("plasticity.current_max",
            [](ExperimentConfig& c) -> double& { return c.plasticity.current_max; });
        num("plasticity.delta_m",
            [](ExperimentConfig& c) -> double& { return c.plasticity.delta_m; });
        num("plasticity.m_max", [](ExperimentConfig& c) -> double& { return c.plasticity.m_max; });
        num("plasticity.pre_threshold",
            [](ExperimentConfig& c) -> double& { return c.plasticity.pre_threshold; });
        num("plasticity.post_threshold",
            [](ExperimentConfig& c) -> double& { return c.plasticity.post_threshold; });
        num("plasticity.pre_threshold_output",
            [](ExperimentConfig& c) -> double& { return c.plasticity.pre_threshold_output; });
        num("plasticity.post_threshold_output",
            [](ExperimentConfig& c) -> double& { return c.plasticity.post_threshold_output; });
        num("plasticity.decay_factor",
            [](ExperimentConfig& c) -> double& { return c.plasticity.decay_factor; });
        num("plasticity.initial_update_probability", [](ExperimentConfig& c) -> double& {
            return c.plasticity.initial_update_probability;
        });
        num("plasticity.bilinear_knee",
            [](ExperimentConfig& c) -> double& { return c.plasticity.bilinear_knee; });
        num("plasticity.bilinear_slope1",
            [](ExperimentConfig& c) -> double& { return c.plasticity.bilinear_slope1; });
        num("plasticity.bilinear_level2",
            [](ExperimentConfig& c) -> double& { return c.plasticity.bilinear_level2; });
        num("plasticity.bilinear_slope2",
            [](ExperimentConfig& c) -> double& { return c.plasticity.bilinear_slope2; });

        r["energy.cost_table"] = {[](ExperimentConfig& c, const std::string& v) {
                                      c.energy.cost_table = unquote(v);
                                  },
                                  nullptr};

        r["run.seed"] = {[](ExperimentConfig& c, const std::string& v) {
                             c.run.seed = parse_u64("run.seed", v);
                         },
                         [](ExperimentConfig& c, double v) {
                             c.run.seed = static_cast<std::uint64_t>(v);
                         }};
        integer("run.seeds", [](ExperimentConfig& c) -> int& { return c.run.seeds; });
        num("run.train_fraction",
            [](ExperimentConfig& c) -> double& { return c.run.train_fraction; });
        r["run.output_dir"] = {[](ExperimentConfig& c, const std::string& v) {
                                   c.run.output_dir = unquote(v);
                               },
                               nullptr};
        r["run.kernel_backend"] = {[](ExperimentConfig& c, const std::string& v) {
                                       c.run.kernel_backend = unquote(v);
                                   },
                                   nullptr};
        return r;
    }();
    return reg;
}

std::string strip_comment(const std::string& line) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quotes = !in_quotes;
        else if (line[i] == '#' && !in_quotes) return line.substr(0, i);
    }
    return line;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path);
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": key '" + key +
                              "' outside any [section]");
        }
        const std::string dotted = section + "." + key;
        const auto it = registry().find(dotted);
        if (it == registry().end()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown config key '" +
                              dotted + "'");
        }
        it->second.assign(cfg, value);
    }
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (network.inputs < 1 || network.hidden < 1 || network.outputs < 1) {
        throw ConfigError("network sizes must be >= 1");
    }
    if (device.n_mem < 1) throw ConfigError("device.n_mem must be >= 1");
    if (device.default_std_fraction < 0.0) {
        throw ConfigError("device.default_std_fraction must be >= 0");
    }
    if (device.read_noise_std_us < 0.0) throw ConfigError("device.read_noise_std_us must be >= 0");
    if (snn.dt_ms <= 0.0 || snn.tau_syn_ms <= 0.0 || snn.tau_mem_ms <= 0.0 ||
        snn.tau_trace_ms <= 0.0) {
        throw ConfigError("snn time constants and dt must be positive");
    }
    if (snn.v_threshold <= snn.v_rest) throw ConfigError("snn.v_threshold must exceed snn.v_rest");
    if (snn.refractory_steps < 0) throw ConfigError("snn.refractory_steps must be >= 0");
    if (snn.rate_max_hz < 0.0) throw ConfigError("snn.rate_max_hz must be >= 0");
    if (snn.train_steps < 1 || snn.eval_steps < 1) {
        throw ConfigError("snn.train_steps and snn.eval_steps must be >= 1");
    }

    PlasticityMode m;
    if (!plasticity_mode_from_name(plasticity.mode, m)) {
        throw ConfigError("unknown plasticity.mode '" + plasticity.mode +
                          "' (expected none, prob_meta_individual, prob_meta_shared, "
                          "grad_accum_meta, random_consolidation or decaying_plasticity)");
    }
    if (plasticity.function != "exponential" && plasticity.function != "bilinear") {
        throw ConfigError("plasticity.function must be 'exponential' or 'bilinear'");
    }
    if (plasticity.error_threshold == 0.0 ||
        (plasticity.error_threshold < 0.0 && plasticity.error_threshold != -1.0)) {
        throw ConfigError("plasticity.error_threshold must be positive or 'auto'");
    }
    if (plasticity.learning_rate <= 0.0) throw ConfigError("plasticity.learning_rate must be > 0");
    if (plasticity.current_min >= plasticity.current_max) {
        throw ConfigError("plasticity.current_min must be below plasticity.current_max");
    }
    if (plasticity.delta_m < 0.0 || plasticity.m_max < 0.0) {
        throw ConfigError("plasticity.delta_m and plasticity.m_max must be >= 0");
    }
    if (plasticity.decay_factor <= 1.0) throw ConfigError("plasticity.decay_factor must exceed 1");
    if (plasticity.initial_update_probability <= 0.0 ||
        plasticity.initial_update_probability > 1.0) {
        throw ConfigError("plasticity.initial_update_probability must be in (0, 1]");
    }

    if (run.seeds < 1) throw ConfigError("run.seeds must be >= 1");
    if (run.train_fraction <= 0.0 || run.train_fraction > 1.0) {
        throw ConfigError("run.train_fraction must be in (0, 1]");
    }
    if (run.kernel_backend != "auto" && run.kernel_backend != "scalar" &&
        run.kernel_backend != "avx2") {
        throw ConfigError("run.kernel_backend must be auto, scalar or avx2");
    }
}

PlasticityMode ExperimentConfig::mode() const {
    PlasticityMode m = PlasticityMode::kNone;
    plasticity_mode_from_name(plasticity.mode, m);
    return m;
}

MetaFunction ExperimentConfig::meta_function() const {
    return plasticity.function == "bilinear" ? MetaFunction::kBilinear
                                             : MetaFunction::kExponential;
}

double ExperimentConfig::resolved_error_threshold(double level_step_weight_units) const {
    if (plasticity.error_threshold > 0.0) return plasticity.error_threshold;
    return level_step_weight_units / plasticity.learning_rate;
}

std::string ExperimentConfig::resolve_dataset_path(const std::string& path) const {
    if (path.empty() || path.front() == '/') return path;
    if (const char* dir = std::getenv("MEMCL_DATA_DIR"); dir != nullptr && dir[0] != '\0') {
        std::string base(dir);
        if (base.back() != '/') base += '/';
        return base + path;
    }
    return path;
}

bool ExperimentConfig::has_numeric_key(const std::string& dotted_key) const {
    const auto it = registry().find(dotted_key);
    return it != registry().end() && it->second.assign_numeric != nullptr;
}

void ExperimentConfig::set_numeric(const std::string& dotted_key, double value) {
    const auto it = registry().find(dotted_key);
    if (it == registry().end() || it->second.assign_numeric == nullptr) {
        throw ConfigError("unknown or non-numeric config key '" + dotted_key + "'");
    }
    it->second.assign_numeric(*this, value);
}

std::string ExperimentConfig::echo_json() const {
    nlohmann::ordered_json j;
    j["dataset"] = {{"train_images", dataset.train_images},
                    {"train_labels", dataset.train_labels},
                    {"test_images", dataset.test_images},
                    {"test_labels", dataset.test_labels}};
    j["network"] = {{"inputs", network.inputs},
                    {"hidden", network.hidden},
                    {"outputs", network.outputs}};
    j["device"] = {{"n_mem", device.n_mem},
                   {"level_table", device.level_table},
                   {"default_std_fraction", device.default_std_fraction},
                   {"read_noise_std_us", device.read_noise_std_us}};
    j["snn"] = {{"dt_ms", snn.dt_ms},
                {"tau_syn_ms", snn.tau_syn_ms},
                {"tau_mem_ms", snn.tau_mem_ms},
                {"membrane_gain", snn.membrane_gain},
                {"v_rest", snn.v_rest},
                {"v_threshold", snn.v_threshold},
                {"refractory_steps", snn.refractory_steps},
                {"tau_trace_ms", snn.tau_trace_ms},
                {"rate_max_hz", snn.rate_max_hz},
                {"train_steps", snn.train_steps},
                {"eval_steps", snn.eval_steps},
                {"feedback_amplitude", snn.feedback_amplitude}};
    j["plasticity"] = {{"mode", plasticity.mode},
                       {"function", plasticity.function},
                       {"error_threshold", plasticity.error_threshold},
                       {"learning_rate", plasticity.learning_rate},
                       {"current_min", plasticity.current_min},
                       {"current_max", plasticity.current_max},
                       {"delta_m", plasticity.delta_m},
                       {"m_max", plasticity.m_max},
                       {"pre_threshold", plasticity.pre_threshold},
                       {"post_threshold", plasticity.post_threshold},
                       {"pre_threshold_output", plasticity.pre_threshold_output},
                       {"post_threshold_output", plasticity.post_threshold_output},
                       {"decay_factor", plasticity.decay_factor},
                       {"initial_update_probability", plasticity.initial_update_probability},
                       {"bilinear_knee", plasticity.bilinear_knee},
                       {"bilinear_slope1", plasticity.bilinear_slope1},
                       {"bilinear_level2", plasticity.bilinear_level2},
                       {"bilinear_slope2", plasticity.bilinear_slope2}};
    j["energy"] = {{"cost_table", energy.cost_table}};
    j["run"] = {{"seed", run.seed},
                {"seeds", run.seeds},
                {"train_fraction", run.train_fraction},
                {"output_dir", run.output_dir},
                {"kernel_backend", run.kernel_backend}};
    return j.dump(2);
}

}  // namespace memcl
