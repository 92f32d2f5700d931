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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pragsim/encoding.hpp"
#include "pragsim/numerics.hpp"
#include "pragsim/reference.hpp"

namespace pragsim {

enum class SyncMode { Pallet, Column };
enum class TrimMode { None, Profile };

struct PragConfig {
    int l_bits = 4;                         // first-stage shifter control bits; 4 is single-stage
    SyncMode sync = SyncMode::Pallet;
    std::optional<int> ssr_count = 1;       // nullopt: unbounded
    std::optional<int> pallet_buffer = 2;   // nullopt: unbounded
    TrimMode trim = TrimMode::None;

    bool operator==(const PragConfig&) const = default;
};

void validate(const PragConfig& cfg);

// Short label such as "PRA-2b-col-1R-red".
std::string label(const PragConfig& cfg);

inline constexpr int kPipLanes = 16;
inline constexpr int kMaxLBits = 4;

using LaneMask = std::uint16_t;

/// One cycle of the shared column control: the second-stage shift and which
/// lanes emit a term together with their first-stage shifts.
struct StageDecision {
    int c = 0;
    LaneMask advance = 0;
    std::array<std::int8_t, kPipLanes> first_stage{};  // -1 for lanes not advancing

    bool operator==(const StageDecision&) const = default;
};

// Picks the smallest live head as the common shift; lanes within 2^L of it
// advance, the rest stall. Throws AllDone when every head is empty.
StageDecision two_stage_step(std::span<const std::optional<int>> heads, int l_bits);

/// Per-lane cursors over the oneffset streams of one PIP column.
class LaneState {
public:
    explicit LaneState(std::span<const OneffsetStream> streams);

    [[nodiscard]] std::vector<std::optional<int>> heads() const;
    [[nodiscard]] bool done() const noexcept;

    struct Outcome {
        StageDecision decision;
        bool done = false;  // every lane exhausted after this step
    };

    Outcome step(int l_bits);

private:
    std::array<OneffsetStream, kPipLanes> streams_{};
    std::array<int, kPipLanes> pos_{};
    std::size_t lanes_ = 0;
};

/// Cycle-by-cycle schedule of one PIP column over a neuron brick. All-zero
/// bricks still take one cycle for the end markers.
struct PipSchedule {
    std::vector<StageDecision> steps;

    [[nodiscard]] int cycles() const noexcept { return steps.empty() ? 1 : static_cast<int>(steps.size()); }
};

PipSchedule pip_schedule(std::span<const OneffsetStream> streams, int l_bits);

// Shift-and-add of the synapses along a schedule:
// sum over cycles of (sum over advancing lanes of +-s << first_stage) << c.
std::int64_t apply_schedule(const PipSchedule& schedule, std::span<const OneffsetStream> streams,
                            std::span<const std::int32_t> synapses);

// Per-lane weight the schedule applies to each synapse: the sum of
// +-2^(c + first_stage) over the cycles the lane advances. Accumulating
// synapse * weight over the lanes equals apply_schedule.
std::array<std::int64_t, kPipLanes> schedule_weights(const PipSchedule& schedule,
                                                     std::span<const OneffsetStream> streams);

struct PipResult {
    std::int64_t value = 0;
    int cycles = 0;
};

PipResult pip_inner(std::span<const OneffsetStream> streams, std::span<const std::int32_t> synapses, int l_bits);

// Oneffset streams of one pallet, window-major: [window][lane].
using PalletStreams = std::array<std::array<OneffsetStream, kPipLanes>, kPalletWindows>;

// Lock-step cost of a pallet: the slowest of the 16 PIP columns.
int pallet_phase_cycles(const PalletStreams& streams, int l_bits);

/// Inputs for the per-column synchronisation simulator: a cost per
/// (synapse set, column) and the NM fetch cost of each set's neuron pallet.
/// Set 0 is assumed prefetched.
struct ColumnSyncInput {
    int columns = kPalletWindows;
    std::vector<int> cost;   // [set * columns + column], each >= 1
    std::vector<int> fetch;  // [set]
    std::optional<int> ssr_count = 1;
    std::optional<int> pallet_buffer = 2;
};

struct ColumnSyncResult {
    std::int64_t cycles = 0;
    std::int64_t stall_cycles = 0;  // cycles with at least one column waiting
    std::int64_t sb_reads = 0;
    std::int64_t fetch_cycles = 0;
    std::vector<std::int64_t> start;   // [set * columns + column]: cycle the column began the set
    std::vector<std::int64_t> read_at; // [set]: cycle the set was read from the SB
};

/// Each column walks the sets at its own pace. A set not held in an SSR needs
/// an SB read: one grant per cycle, lowest column first, into a free SSR. An
/// SSR frees once every column has copied its set. A neuron pallet stays in
/// the dispatcher buffer until every column has finished it.
ColumnSyncResult simulate_column_sync(const ColumnSyncInput& in);

EngineResult prag_layer_pallet(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                               const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                               const NeuronFormat& fmt = kUnsigned16);

EngineResult prag_layer_column(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                               const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                               const NeuronFormat& fmt = kUnsigned16);

// Dispatches on cfg.sync.
EngineResult prag_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                        const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                        const NeuronFormat& fmt = kUnsigned16);

}  // namespace pragsim
