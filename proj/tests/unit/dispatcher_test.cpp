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

#include <algorithm>
#include <vector>

#include "pragsim/dispatcher.hpp"
#include "pragsim/error.hpp"

using namespace pragsim;

namespace {

// Wide single-row layer so that a full pallet of unpadded bricks exists for
// every alignment offset.
LayerSpec wide(int s) { return LayerSpec{80 * s + 1, 1, 16, 1, 1, 1, s, 0}; }

// Rows spanned by 16 bricks at x0, x0+s, ... counted by listing them.
int rows_by_listing(int x0, int s) {
    std::vector<int> rows;
    for (int w = 0; w < 16; ++w) rows.push_back((x0 + w * s) / 16);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return static_cast<int>(rows.size());
}

}  // namespace

TEST(Fetch, UnitStride) {
    const LayerSpec spec = wide(1);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, 0, 0, {0, 0, 0}), 1);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, 3, 0, {0, 0, 0}), 2);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, true), 1);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, false), 2);
    EXPECT_EQ(dispatcher_fetch_bound(spec), 2);
}

TEST(Fetch, StrideFour) {
    const LayerSpec spec = wide(4);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, true), 4);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, false), 5);
    EXPECT_EQ(dispatcher_fetch_bound(spec), 5);
    EXPECT_EQ(dispatcher_fetch_cycles(spec, 1, 0, {0, 0, 0}), 5);
}

TEST(Fetch, ClosedFormMatchesGeometry) {
    for (int s = 1; s <= 20; ++s) {
        const LayerSpec spec = wide(s);
        int worst_misaligned = 0;
        for (int bx = 0; bx < 16; ++bx) {
            // window 0 with tap offset bx puts the first brick at x = bx
            LayerSpec tap = spec;
            tap.fx = 16;
            tap.nx = 80 * s + 16;
            const int got = dispatcher_fetch_cycles(tap, 0, 0, {bx, 0, 0});
            EXPECT_EQ(got, rows_by_listing(bx, s)) << "s=" << s << " bx=" << bx;
            EXPECT_LE(got, dispatcher_fetch_bound(spec));
            if (bx == 0) EXPECT_EQ(got, dispatcher_fetch_cycles(spec, true));
            else worst_misaligned = std::max(worst_misaligned, got);
        }
        EXPECT_EQ(worst_misaligned, dispatcher_fetch_cycles(spec, false)) << "s=" << s;
    }
}

TEST(Fetch, PaddingAndPartialPallets) {
    const LayerSpec spec{16, 4, 16, 1, 3, 3, 1, 1};
    // top padding row: nothing to read
    EXPECT_EQ(dispatcher_fetch_cycles(spec, 0, 0, {0, 0, 0}), 0);
    // left padding column skipped, remaining 15 bricks in one row
    EXPECT_EQ(dispatcher_fetch_cycles(spec, 0, 1, {0, 0, 0}), 1);
    const auto seq = layer_fetch_sequence(spec);
    EXPECT_EQ(seq.size(), static_cast<std::size_t>(4 * 9));
}

TEST(PalletSyncTiming, HiddenFirstFetchAndStalls) {
    const std::vector<int> cost{5, 4, 4};
    const std::vector<int> none{0, 0, 0};
    auto t = pallet_sync_timing(cost, none, 1);
    EXPECT_EQ(t.cycles, 13);
    EXPECT_EQ(t.stall_cycles, 0);

    const std::vector<int> fetch{9, 6, 2};
    t = pallet_sync_timing(cost, fetch, 1);
    // phase 0: max(5, 6); phase 1: max(4, 2); phase 2: 4
    EXPECT_EQ(t.cycles, 6 + 4 + 4);
    EXPECT_EQ(t.stall_cycles, 1);
    EXPECT_EQ(t.fetch_cycles, 17);

    t = pallet_sync_timing(cost, fetch, 2);
    // the second group refetches pallet 0 after phase 2
    EXPECT_EQ(t.cycles, 6 + 4 + 9 + 6 + 4 + 4);
    EXPECT_THROW(pallet_sync_timing(cost, std::vector<int>{1}, 1), SimError);
}
