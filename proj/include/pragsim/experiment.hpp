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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "pragsim/analysis.hpp"
#include "pragsim/config.hpp"

namespace pragsim {

/// Tensors every engine of one layer consumes, depth already zero-extended to
/// whole bricks.
struct LayerInputs {
    LayerSpec spec;
    Tensor3 input;
    FilterSet filters;
    NeuronFormat fmt;
    std::optional<QuantParams> quant;  // parameters used for 8-bit codes
};

LayerInputs build_layer_inputs(const ExperimentConfig& cfg, std::size_t layer);

// Window used for term analysis: the layer's profile, else the full container.
PrecisionWindow analysis_window(const ExperimentConfig& cfg, std::size_t layer);

// Runs every configured engine on one layer and cross-checks each output
// against the convolution oracle (OracleMismatch on any difference).
LayerRun simulate_layer(const ExperimentConfig& cfg, std::size_t layer);

// Term counts and bit statistics only; no engines run.
LayerRun analyze_layer(const ExperimentConfig& cfg, std::size_t layer);

// Layers may run concurrently; results always come back in layer order.
std::vector<LayerRun> simulate(const ExperimentConfig& cfg, int jobs = 1);
std::vector<LayerRun> analyze(const ExperimentConfig& cfg);

// Writes <dir>/<layer name>.prgt for every layer input.
void generate_traces(const ExperimentConfig& cfg, const std::filesystem::path& dir);

// Parses, builds inputs for every layer and checks engine preconditions
// without running the engines.
void dry_run(const ExperimentConfig& cfg);

}  // namespace pragsim
