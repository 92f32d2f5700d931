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
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pragsim {

// Chip organisation shared by every engine model.
inline constexpr int kBrickSize = 16;       // neurons per brick, along depth
inline constexpr int kPalletWindows = 16;   // bricks (windows) per pallet
inline constexpr int kFiltersPerTile = 16;
inline constexpr int kTiles = 16;
inline constexpr int kFilterGroup = kFiltersPerTile * kTiles;  // 256 filters in flight

enum class Activation { Identity, Relu };

struct LayerSpec {
    int nx = 0;
    int ny = 0;
    int i = 0;   // input depth
    int n = 0;   // filter count
    int fx = 0;
    int fy = 0;
    int s = 1;
    int pad = 0;
    Activation act = Activation::Identity;
    int out_shift = 0;  // arithmetic right shift applied after the activation

    bool operator==(const LayerSpec&) const = default;
};

struct OutputDims {
    int ox = 0;
    int oy = 0;
    int oi = 0;

    bool operator==(const OutputDims&) const = default;
};

// Throws NonIntegralDims when the padded extent does not tile with the stride,
// OutOfRange for non-positive sizes or a depth that is not a brick multiple.
void validate(const LayerSpec& spec);

OutputDims output_dims(const LayerSpec& spec);

// Rounds the depth up to a whole number of bricks.
LayerSpec with_brick_depth(LayerSpec spec);

/// Dense 3D array of neuron (or synapse) containers in (y, x, i) row-major
/// order, i fastest. Values are held widened to 32 bits so that both signed
/// and unsigned 16-bit containers fit; callers check the container range with
/// fits_container().
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int x, int y, int depth);
    Tensor3(int x, int y, int depth, std::vector<std::int32_t> values);

    [[nodiscard]] int x() const noexcept { return x_; }
    [[nodiscard]] int y() const noexcept { return y_; }
    [[nodiscard]] int depth() const noexcept { return depth_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] std::int32_t at(int x, int y, int i) const { return values_[index(x, y, i)]; }
    std::int32_t& at(int x, int y, int i) { return values_[index(x, y, i)]; }

    [[nodiscard]] const std::vector<std::int32_t>& values() const noexcept { return values_; }
    std::vector<std::int32_t>& values() noexcept { return values_; }

    bool operator==(const Tensor3&) const = default;

private:
    [[nodiscard]] std::size_t index(int x, int y, int i) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(x_) + static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(depth_) +
               static_cast<std::size_t>(i);
    }

    int x_ = 0;
    int y_ = 0;
    int depth_ = 0;
    std::vector<std::int32_t> values_;
};

// Zero-extends the depth of a tensor. A no-op when depth already matches.
Tensor3 zero_extend_depth(const Tensor3& t, int depth);

struct FilterSet {
    std::vector<Tensor3> filters;  // each (fx, fy, i)

    [[nodiscard]] int count() const noexcept { return static_cast<int>(filters.size()); }
};

FilterSet zero_extend_depth(const FilterSet& f, int depth);

// Checks input dims (nx, ny, i) and every filter against the layer shape.
void check_shapes(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec);

/// 16 values contiguous along depth. Origin is in unpadded input coordinates
/// and may lie in the padding border (negative or past the edge).
struct Brick {
    int x = 0;
    int y = 0;
    int i0 = 0;
    std::array<std::int32_t, kBrickSize> values{};
};

/// Bricks at the same depth offset from 16 windows adjacent along x. Lanes
/// past the last output column are absent and hold zeros.
struct Pallet {
    std::array<Brick, kPalletWindows> bricks{};
    std::array<bool, kPalletWindows> present{};

    [[nodiscard]] int present_count() const noexcept;
};

/// Position of one brick within a window: filter tap (bx, by) and depth offset.
struct BrickStep {
    int bx = 0;
    int by = 0;
    int i0 = 0;
};

// All fy * fx * (i/16) steps of a window, by outermost, i0 innermost.
std::vector<BrickStep> brick_steps(const LayerSpec& spec);

Brick window_brick(const Tensor3& input, const LayerSpec& spec, int wx, int wy, int bx, int by, int i0);

Pallet build_pallet(const Tensor3& input, const LayerSpec& spec, int base_wx, int wy, int bx, int by, int i0);

// Window pallets per layer: each output row is split into ceil(ox/16) pallets,
// pallets never wrap across rows.
std::int64_t pallets_per_layer(const LayerSpec& spec);

std::int64_t filter_groups(const LayerSpec& spec);

}  // namespace pragsim
