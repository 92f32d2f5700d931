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
#include <span>
#include <vector>

#include "pragsim/geometry.hpp"

namespace pragsim {

// Neuron memory is organised in rows of 256 neurons: 16 bricks at one (y, i0)
// for 16 consecutive x positions. A pallet costs one cycle per distinct row
// holding one of its present, unpadded bricks.
inline constexpr int kNmRowBricks = 16;

// Rows touched by the pallet of windows base_wx..base_wx+15 at one brick step.
int dispatcher_fetch_cycles(const LayerSpec& spec, int base_wx, int wy, const BrickStep& step);

// Closed form for a full pallet: floor(15*s/16) + 1 rows when the first brick
// starts a row, one more when it does not; never above 16.
int dispatcher_fetch_cycles(const LayerSpec& spec, bool aligned);

// Upper bound min(s + 1, 16) over all alignments.
int dispatcher_fetch_bound(const LayerSpec& spec);

// Fetch cost of every (window pallet, brick step) phase of one filter group,
// pallets row by row, steps innermost.
std::vector<int> layer_fetch_sequence(const LayerSpec& spec);

struct PhaseTiming {
    std::int64_t cycles = 0;
    std::int64_t stall_cycles = 0;
    std::int64_t fetch_cycles = 0;
};

/// Lock-step timing for a phase sequence repeated once per filter group.
///
/// The dispatcher fetches the next pallet while the current one is processed,
/// so phase j lasts max(P_j, NM_{j+1}). The first pallet of the layer is
/// prefetched and the last phase has nothing left to fetch.
PhaseTiming pallet_sync_timing(std::span<const int> phase_cost, std::span<const int> fetch, std::int64_t groups);

}  // namespace pragsim
