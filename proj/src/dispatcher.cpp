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

#include "pragsim/dispatcher.hpp"

#include <algorithm>

#include "pragsim/error.hpp"

namespace pragsim {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

int dispatcher_fetch_cycles(const LayerSpec& spec, int base_wx, int wy, const BrickStep& step) {
    const OutputDims od = output_dims(spec);
    const int y = wy * spec.s + step.by - spec.pad;
    if (y < 0 || y >= spec.ny) return 0;
    int rows = 0;
    int last_row = -1;
    for (int w = 0; w < kPalletWindows && base_wx + w < od.ox; ++w) {
        const int x = (base_wx + w) * spec.s + step.bx - spec.pad;
        if (x < 0 || x >= spec.nx) continue;
        // x grows with w, so rows arrive in nondecreasing order.
        const int row = floor_div(x, kNmRowBricks);
        if (row != last_row) {
            ++rows;
            last_row = row;
        }
    }
    return rows;
}

int dispatcher_fetch_cycles(const LayerSpec& spec, bool aligned) {
    if (spec.s < 1) throw SimError(ErrorCode::OutOfRange, "stride must be >= 1");
    const int rows = (kPalletWindows - 1) * spec.s / kNmRowBricks + 1 + (aligned ? 0 : 1);
    return std::min(rows, kPalletWindows);
}

int dispatcher_fetch_bound(const LayerSpec& spec) { return std::min(spec.s + 1, kPalletWindows); }

std::vector<int> layer_fetch_sequence(const LayerSpec& spec) {
    const OutputDims od = output_dims(spec);
    const auto steps = brick_steps(spec);
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(pallets_per_layer(spec)) * steps.size());
    for (int wy = 0; wy < od.oy; ++wy)
        for (int base = 0; base < od.ox; base += kPalletWindows)
            for (const auto& st : steps) seq.push_back(dispatcher_fetch_cycles(spec, base, wy, st));
    return seq;
}

PhaseTiming pallet_sync_timing(std::span<const int> phase_cost, std::span<const int> fetch, std::int64_t groups) {
    if (phase_cost.size() != fetch.size()) throw SimError(ErrorCode::ShapeMismatch, "phase/fetch length mismatch");
    PhaseTiming t;
    const auto k = static_cast<std::int64_t>(phase_cost.size());
    const std::int64_t total = k * groups;
    for (std::int64_t j = 0; j < total; ++j) {
        const int p = phase_cost[static_cast<std::size_t>(j % k)];
        const int next = j + 1 < total ? fetch[static_cast<std::size_t>((j + 1) % k)] : 0;
        t.cycles += std::max(p, next);
        t.stall_cycles += std::max(0, next - p);
        t.fetch_cycles += fetch[static_cast<std::size_t>(j % k)];
    }
    return t;
}

}  // namespace pragsim
