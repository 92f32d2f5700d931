/*
 * Copyright 2026 The pragsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pragsim/geometry.hpp"
#include "pragsim/numerics.hpp"
#include "pragsim/pragmatic.hpp"

namespace pragsim {

struct LayerConfig {
    std::string name;
    LayerSpec spec;  // depth as configured; engines run on with_brick_depth(spec)
    std::optional<PrecisionWindow> precision;
    std::optional<QuantParams> quant;
    bool first = false;
};

enum class EngineKind { DaDN, Stripes, Pragmatic };

struct EngineVariant {
    EngineKind kind = EngineKind::DaDN;
    PragConfig prag;  // meaningful for Pragmatic only

    [[nodiscard]] std::string label() const;
};

struct SyntheticTrace {
    double sigma = 1.0;
    bool relu = true;
};

struct FileTrace {
    std::filesystem::path dir;  // one <layer name>.prgt per layer
};

struct ExperimentConfig {
    std::vector<LayerConfig> layers;
    std::vector<EngineVariant> engines;  // grid already expanded
    std::uint64_t seed = 0;
    std::variant<SyntheticTrace, FileTrace> trace = SyntheticTrace{};
    std::optional<bool> signed_neurons;  // overrides the format implied by the trace
    double synapse_sigma = 64.0;
    int width = 16;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> terms_csv_path;
};

// Parses the JSON config text. Errors are ConfigError and name the offending
// field, e.g. "layers[1].stride". Relative paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Neuron container format implied by the width, trace kind and overrides.
NeuronFormat neuron_format(const ExperimentConfig& cfg);

}  // namespace pragsim
