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
#include <functional>

#include "pragsim/geometry.hpp"
#include "pragsim/numerics.hpp"

namespace pragsim {

struct CycleReport {
    std::int64_t compute_cycles = 0;   // total layer cycles, fetch waits included
    std::int64_t nm_fetch_cycles = 0;  // cycles the dispatcher spent reading NM
    std::int64_t stall_cycles = 0;     // cycles lost waiting on NM, SB or SSRs
    std::int64_t sb_reads = 0;         // synapse-set reads from the synapse buffers
    std::int64_t total_terms = 0;
    std::int64_t effectual_terms = 0;

    bool operator==(const CycleReport&) const = default;
};

struct EngineResult {
    Tensor3 output;
    CycleReport report;
};

// Direct triple loop over filter taps and depth with 64-bit accumulation.
Tensor3 conv_oracle(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec);

// Pre-activation sum for one output neuron; shared by the oracle and the
// loop-order cross check in tests.
std::int64_t oracle_sum(const Tensor3& input, const Tensor3& filter, const LayerSpec& spec, int ox, int oy);

// One cycle per (filter group, window, brick).
std::int64_t dadn_cycles(const LayerSpec& spec);

// width terms for every neuron-synapse multiplication.
std::int64_t dadn_terms(const LayerSpec& spec, int width = 16);

std::int64_t multiplications(const LayerSpec& spec);

// Synapse-set reads under the shared pallet schedule: one per
// (filter group, window pallet, brick step).
std::int64_t synapse_set_reads(const LayerSpec& spec);

// Sum of cost(v) over every neuron visited by every window, padding included,
// scaled by the filter count (each neuron use meets n synapses).
std::int64_t sum_over_pairs(const Tensor3& input, const LayerSpec& spec,
                            const std::function<std::int64_t(std::int32_t)>& cost);

// Bit-parallel baseline: oracle output plus the value-blind cycle model.
EngineResult dadn_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                        const NeuronFormat& fmt);

}  // namespace pragsim
