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

#include "pragsim/geometry.hpp"

#include <string>

#include "pragsim/error.hpp"

namespace pragsim {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

void validate(const LayerSpec& spec) {
    if (spec.nx <= 0 || spec.ny <= 0 || spec.i <= 0 || spec.n <= 0 || spec.fx <= 0 || spec.fy <= 0) {
        throw SimError(ErrorCode::OutOfRange, "layer sizes must be positive");
    }
    if (spec.s < 1) throw SimError(ErrorCode::OutOfRange, "stride must be >= 1");
    if (spec.pad < 0) throw SimError(ErrorCode::OutOfRange, "padding must be >= 0");
    if (spec.out_shift < 0 || spec.out_shift > 47) {
        throw SimError(ErrorCode::OutOfRange, "out_shift must lie in [0, 47]");
    }
    if (spec.i % kBrickSize != 0) {
        throw SimError(ErrorCode::OutOfRange, "depth " + std::to_string(spec.i) + " is not a multiple of 16");
    }
    const int ex = spec.nx + 2 * spec.pad - spec.fx;
    const int ey = spec.ny + 2 * spec.pad - spec.fy;
    if (ex < 0 || ey < 0) throw SimError(ErrorCode::NonIntegralDims, "filter larger than padded input");
    if (ex % spec.s != 0 || ey % spec.s != 0) {
        throw SimError(ErrorCode::NonIntegralDims, "padded input extent not divisible by stride " +
                                                       std::to_string(spec.s));
    }
}

OutputDims output_dims(const LayerSpec& spec) {
    validate(spec);
    return {(spec.nx + 2 * spec.pad - spec.fx) / spec.s + 1, (spec.ny + 2 * spec.pad - spec.fy) / spec.s + 1,
            spec.n};
}

LayerSpec with_brick_depth(LayerSpec spec) {
    spec.i = ceil_div(spec.i, kBrickSize) * kBrickSize;
    return spec;
}

Tensor3::Tensor3(int x, int y, int depth)
    : x_(x), y_(y), depth_(depth),
      values_(static_cast<std::size_t>(x) * static_cast<std::size_t>(y) * static_cast<std::size_t>(depth), 0) {
    if (x < 0 || y < 0 || depth < 0) throw SimError(ErrorCode::OutOfRange, "negative tensor dimension");
}

Tensor3::Tensor3(int x, int y, int depth, std::vector<std::int32_t> values)
    : x_(x), y_(y), depth_(depth), values_(std::move(values)) {
    if (x < 0 || y < 0 || depth < 0) throw SimError(ErrorCode::OutOfRange, "negative tensor dimension");
    if (values_.size() != static_cast<std::size_t>(x) * static_cast<std::size_t>(y) * static_cast<std::size_t>(depth)) {
        throw SimError(ErrorCode::ShapeMismatch, "value count does not match x*y*depth");
    }
}

Tensor3 zero_extend_depth(const Tensor3& t, int depth) {
    if (depth == t.depth()) return t;
    if (depth < t.depth()) throw SimError(ErrorCode::ShapeMismatch, "cannot shrink tensor depth");
    Tensor3 out(t.x(), t.y(), depth);
    for (int y = 0; y < t.y(); ++y)
        for (int x = 0; x < t.x(); ++x)
            for (int i = 0; i < t.depth(); ++i) out.at(x, y, i) = t.at(x, y, i);
    return out;
}

FilterSet zero_extend_depth(const FilterSet& f, int depth) {
    FilterSet out;
    out.filters.reserve(f.filters.size());
    for (const auto& t : f.filters) out.filters.push_back(zero_extend_depth(t, depth));
    return out;
}

void check_shapes(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec) {
    if (input.x() != spec.nx || input.y() != spec.ny || input.depth() != spec.i) {
        throw SimError(ErrorCode::ShapeMismatch, "input tensor dims do not match layer");
    }
    if (filters.count() != spec.n) throw SimError(ErrorCode::ShapeMismatch, "filter count does not match layer");
    for (const auto& f : filters.filters) {
        if (f.x() != spec.fx || f.y() != spec.fy || f.depth() != spec.i) {
            throw SimError(ErrorCode::ShapeMismatch, "filter dims do not match layer");
        }
    }
}

int Pallet::present_count() const noexcept {
    int c = 0;
    for (bool p : present) c += p ? 1 : 0;
    return c;
}

std::vector<BrickStep> brick_steps(const LayerSpec& spec) {
    std::vector<BrickStep> steps;
    steps.reserve(static_cast<std::size_t>(spec.fx * spec.fy * (spec.i / kBrickSize)));
    for (int by = 0; by < spec.fy; ++by)
        for (int bx = 0; bx < spec.fx; ++bx)
            for (int i0 = 0; i0 < spec.i; i0 += kBrickSize) steps.push_back({bx, by, i0});
    return steps;
}

Brick window_brick(const Tensor3& input, const LayerSpec& spec, int wx, int wy, int bx, int by, int i0) {
    const OutputDims od = output_dims(spec);
    if (wx < 0 || wx >= od.ox || wy < 0 || wy >= od.oy) {
        throw SimError(ErrorCode::OutOfRange, "window (" + std::to_string(wx) + "," + std::to_string(wy) +
                                                  ") outside output");
    }
    if (bx < 0 || bx >= spec.fx || by < 0 || by >= spec.fy) throw SimError(ErrorCode::OutOfRange, "filter tap");
    if (i0 < 0 || i0 % kBrickSize != 0 || i0 + kBrickSize > spec.i) {
        throw SimError(ErrorCode::OutOfRange, "brick depth offset " + std::to_string(i0));
    }
    Brick b;
    b.x = wx * spec.s + bx - spec.pad;
    b.y = wy * spec.s + by - spec.pad;
    b.i0 = i0;
    if (b.x < 0 || b.x >= input.x() || b.y < 0 || b.y >= input.y()) return b;  // padding
    for (int k = 0; k < kBrickSize; ++k) b.values[static_cast<std::size_t>(k)] = input.at(b.x, b.y, i0 + k);
    return b;
}

Pallet build_pallet(const Tensor3& input, const LayerSpec& spec, int base_wx, int wy, int bx, int by, int i0) {
    const OutputDims od = output_dims(spec);
    if (base_wx < 0 || base_wx >= od.ox) throw SimError(ErrorCode::OutOfRange, "pallet base window");
    Pallet p;
    for (int w = 0; w < kPalletWindows; ++w) {
        const auto lane = static_cast<std::size_t>(w);
        const int wx = base_wx + w;
        if (wx < od.ox) {
            p.bricks[lane] = window_brick(input, spec, wx, wy, bx, by, i0);
            p.present[lane] = true;
        } else {
            p.bricks[lane].x = wx * spec.s + bx - spec.pad;
            p.bricks[lane].y = wy * spec.s + by - spec.pad;
            p.bricks[lane].i0 = i0;
        }
    }
    return p;
}

std::int64_t pallets_per_layer(const LayerSpec& spec) {
    const OutputDims od = output_dims(spec);
    return static_cast<std::int64_t>(ceil_div(od.ox, kPalletWindows)) * od.oy;
}

std::int64_t filter_groups(const LayerSpec& spec) { return ceil_div(spec.n, kFilterGroup); }

}  // namespace pragsim
