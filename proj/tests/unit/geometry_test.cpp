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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "pragsim/error.hpp"
#include "pragsim/geometry.hpp"

using namespace pragsim;

namespace {

LayerSpec layer(int nx, int ny, int i, int n, int fx, int fy, int s = 1, int pad = 0) {
    return LayerSpec{nx, ny, i, n, fx, fy, s, pad};
}

// Window positions counted by sliding a filter over the padded input.
std::pair<int, int> enumerate_windows(const LayerSpec& spec) {
    int cx = 0, cy = 0;
    for (int x = 0; x + spec.fx <= spec.nx + 2 * spec.pad; x += spec.s) ++cx;
    for (int y = 0; y + spec.fy <= spec.ny + 2 * spec.pad; y += spec.s) ++cy;
    return {cx, cy};
}

}  // namespace

TEST(OutputDims, SingleWindow) {
    EXPECT_EQ(output_dims(layer(3, 3, 16, 2, 3, 3)), (OutputDims{1, 1, 2}));
}

TEST(OutputDims, MatchesWindowEnumeration) {
    EXPECT_EQ(output_dims(layer(8, 8, 16, 16, 3, 3)), (OutputDims{6, 6, 16}));
    EXPECT_EQ(output_dims(layer(8, 8, 16, 4, 2, 2, 2)), (OutputDims{4, 4, 4}));
    for (int nx = 1; nx <= 12; ++nx) {
        for (int f = 1; f <= 4; ++f) {
            for (int s = 1; s <= 3; ++s) {
                for (int pad = 0; pad <= 2; ++pad) {
                    const LayerSpec spec = layer(nx, nx, 16, 3, f, f, s, pad);
                    const int extent = nx + 2 * pad - f;
                    if (extent < 0 || extent % s != 0) {
                        EXPECT_THROW(validate(spec), SimError);
                        continue;
                    }
                    const auto [cx, cy] = enumerate_windows(spec);
                    EXPECT_EQ(output_dims(spec), (OutputDims{cx, cy, 3}));
                }
            }
        }
    }
}

TEST(Validate, RejectsBadLayers) {
    try {
        validate(layer(8, 8, 16, 4, 3, 3, 2));
        FAIL();
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonIntegralDims);
    }
    try {
        validate(layer(8, 8, 17, 4, 3, 3));
        FAIL();
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
    EXPECT_THROW(validate(layer(0, 8, 16, 4, 3, 3)), SimError);
    EXPECT_EQ(with_brick_depth(layer(8, 8, 17, 4, 3, 3)).i, 32);
    EXPECT_EQ(with_brick_depth(layer(8, 8, 3, 4, 3, 3)).i, 16);
}

TEST(Tensor3, ZeroExtendKeepsValues) {
    std::mt19937_64 rng(1);
    const Tensor3 t = oracle::random_tensor(rng, 3, 2, 5, -9, 9);
    const Tensor3 e = zero_extend_depth(t, 16);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x)
            for (int c = 0; c < 16; ++c) EXPECT_EQ(e.at(x, y, c), c < 5 ? t.at(x, y, c) : 0);
}

TEST(WindowBrick, ZeroInputGivesZeroBrick) {
    const LayerSpec spec = layer(4, 4, 16, 1, 3, 3);
    const Brick b = window_brick(Tensor3(4, 4, 16), spec, 1, 1, 2, 2, 0);
    for (auto v : b.values) EXPECT_EQ(v, 0);
}

TEST(WindowBrick, PaddingCornerIsZero) {
    std::mt19937_64 rng(2);
    const LayerSpec spec = layer(4, 4, 16, 1, 3, 3, 1, 1);
    const Tensor3 in = oracle::random_tensor(rng, 4, 4, 16, 1, 100);
    const Brick b = window_brick(in, spec, 0, 0, 0, 0, 0);
    EXPECT_EQ(b.x, -1);
    EXPECT_EQ(b.y, -1);
    for (auto v : b.values) EXPECT_EQ(v, 0);
}

TEST(WindowBrick, EqualsDirectSlice) {
    std::mt19937_64 rng(3);
    const LayerSpec spec = layer(4, 4, 32, 1, 2, 2);
    const Tensor3 in = oracle::random_tensor(rng, 4, 4, 32, -500, 500);
    const Brick b = window_brick(in, spec, 1, 2, 1, 0, 16);
    for (int k = 0; k < 16; ++k) EXPECT_EQ(b.values[k], in.at(2, 2, 16 + k));
    EXPECT_THROW(window_brick(in, spec, 3, 0, 0, 0, 0), SimError);
    EXPECT_THROW(window_brick(in, spec, 0, 0, 0, 0, 8), SimError);
}

TEST(WindowBrick, StepsEnumerateEachWindowNeuronOnce) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int f = 1 + static_cast<int>(rng() % 3);
        const int s = 1 + static_cast<int>(rng() % 2);
        const int pad = static_cast<int>(rng() % 2);
        const int ox = 1 + static_cast<int>(rng() % 4);
        const int nx = (ox - 1) * s + f - 2 * pad;
        if (nx <= 0) continue;
        const LayerSpec spec = layer(nx, nx, 32, 1, f, f, s, pad);
        const auto steps = brick_steps(spec);
        ASSERT_EQ(steps.size(), static_cast<std::size_t>(f * f * 2));
        for (int wy = 0; wy < ox; ++wy) {
            for (int wx = 0; wx < ox; ++wx) {
                std::set<std::tuple<int, int, int>> seen;
                for (const auto& st : steps) {
                    const int x = wx * s - pad + st.bx;
                    const int y = wy * s - pad + st.by;
                    for (int k = 0; k < 16; ++k) EXPECT_TRUE(seen.emplace(x, y, st.i0 + k).second);
                }
                EXPECT_EQ(seen.size(), static_cast<std::size_t>(f * f * 32));
            }
        }
    }
}

TEST(BuildPallet, PresentCounts) {
    const Tensor3 in16(18, 3, 16);
    EXPECT_EQ(build_pallet(in16, layer(18, 3, 16, 1, 3, 3), 0, 0, 0, 0, 0).present_count(), 16);
    const Tensor3 in6(8, 3, 16);
    const Pallet p = build_pallet(in6, layer(8, 3, 16, 1, 3, 3), 0, 0, 0, 0, 0);
    EXPECT_EQ(p.present_count(), 6);
    for (int w = 6; w < 16; ++w) {
        EXPECT_FALSE(p.present[w]);
        for (auto v : p.bricks[w].values) EXPECT_EQ(v, 0);
    }
}

TEST(BuildPallet, StrideTwoOrigins) {
    const LayerSpec spec = layer(69, 3, 16, 1, 3, 3, 2);
    const Tensor3 in(69, 3, 16);
    const Pallet p = build_pallet(in, spec, 16, 0, 1, 0, 0);
    for (int w = 0; w < 16; ++w) {
        ASSERT_TRUE(p.present[w]);
        EXPECT_EQ(p.bricks[w].x, 16 * 2 + w * 2 + 1);
    }
}

TEST(BuildPallet, UnitStrideOriginsAreConsecutive) {
    const LayerSpec spec = layer(40, 3, 16, 1, 3, 3);
    const Pallet p = build_pallet(Tensor3(40, 3, 16), spec, 16, 0, 2, 1, 0);
    for (int w = 1; w < 16; ++w) EXPECT_EQ(p.bricks[w].x, p.bricks[w - 1].x + 1);
}

TEST(Counts, PalletsAndGroups) {
    EXPECT_EQ(pallets_per_layer(layer(18, 18, 16, 1, 3, 3)), 16);
    EXPECT_EQ(pallets_per_layer(layer(19, 18, 16, 1, 3, 3)), 32);
    EXPECT_EQ(filter_groups(layer(18, 18, 16, 256, 3, 3)), 1);
    EXPECT_EQ(filter_groups(layer(18, 18, 16, 257, 3, 3)), 2);
}

TEST(CheckShapes, Mismatch) {
    const LayerSpec spec = layer(4, 4, 16, 2, 3, 3);
    FilterSet fs;
    fs.filters.push_back(Tensor3(3, 3, 16));
    try {
        check_shapes(Tensor3(4, 4, 16), fs, spec);
        FAIL();
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
    }
}
