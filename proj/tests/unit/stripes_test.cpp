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

#include <array>
#include <random>

#include "oracles.hpp"
#include "pragsim/error.hpp"
#include "pragsim/reference.hpp"
#include "pragsim/stripes.hpp"

using namespace pragsim;

TEST(SipInner, Examples) {
    const std::array<std::int32_t, 16> zeros{};
    std::array<std::int32_t, 16> syn{};
    syn.fill(77);
    EXPECT_EQ(sip_inner(zeros, syn, {15, 0}), 0);
    const std::array<std::int32_t, 2> n{3, 1};
    const std::array<std::int32_t, 2> s{5, -2};
    EXPECT_EQ(sip_inner(n, s, {1, 0}), 13);
    const std::array<std::int32_t, 2> wide{4, 1};
    EXPECT_THROW((void)sip_inner(wide, s, {1, 0}), SimError);
}

TEST(SipInner, ExhaustiveFourBitPairs) {
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            for (int x = -8; x < 8; ++x)
                for (int y = -8; y < 8; ++y) {
                    const std::array<std::int32_t, 2> n{a, b};
                    const std::array<std::int32_t, 2> s{x, y};
                    ASSERT_EQ(sip_inner(n, s, {3, 0}), a * x + b * y);
                    const std::array<std::int32_t, 2> sn{a - 8, b - 8};
                    ASSERT_EQ(sip_inner(sn, s, {3, 0}, true), (a - 8) * x + (b - 8) * y);
                }
}

TEST(SipInner, OffsetWindow) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const int lsb = static_cast<int>(rng() % 6);
        const int msb = lsb + static_cast<int>(rng() % (16 - lsb));
        const PrecisionWindow p{msb, lsb};
        std::array<std::int32_t, 16> n{}, s{};
        std::int64_t want = 0;
        for (int k = 0; k < 16; ++k) {
            n[k] = trim(static_cast<std::int32_t>(rng() & 0xFFFF), p);
            s[k] = static_cast<std::int32_t>(rng() % 2001) - 1000;
            want += static_cast<std::int64_t>(n[k]) * s[k];
        }
        ASSERT_EQ(sip_inner(n, s, p), want);
    }
}

namespace {

struct Case {
    LayerSpec spec;
    Tensor3 input;
    FilterSet filters;
};

Case random_case(std::mt19937_64& rng) {
    LayerSpec spec{};
    spec.s = 1 + static_cast<int>(rng() % 3);
    spec.pad = static_cast<int>(rng() % 2);
    spec.fx = spec.fy = 1 + static_cast<int>(rng() % 3);
    const int ox = 1 + static_cast<int>(rng() % 20), oy = 1 + static_cast<int>(rng() % 4);
    spec.nx = (ox - 1) * spec.s + spec.fx - 2 * spec.pad;
    spec.ny = (oy - 1) * spec.s + spec.fy - 2 * spec.pad;
    if (spec.nx < 1) spec.nx += spec.s * ((1 - spec.nx + spec.s - 1) / spec.s);
    if (spec.ny < 1) spec.ny += spec.s * ((1 - spec.ny + spec.s - 1) / spec.s);
    spec.i = 16 * (1 + static_cast<int>(rng() % 2));
    spec.n = 1 + static_cast<int>(rng() % 8);
    spec.act = Activation::Relu;
    spec.out_shift = static_cast<int>(rng() % 8);
    Case c{spec, oracle::random_neurons(rng, spec.nx, spec.ny, spec.i), {}};
    c.filters = oracle::random_filters(rng, spec, -128, 127);
    return c;
}

}  // namespace

TEST(StripesLayer, OracleOnTrimmedInput) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const Case c = random_case(rng);
        const int lsb = static_cast<int>(rng() % 4);
        const PrecisionWindow p{lsb + static_cast<int>(rng() % (16 - lsb)), lsb};
        const auto r = stripes_layer(c.input, c.filters, c.spec, p);
        EXPECT_EQ(r.output, oracle::naive_conv(trim(c.input, p), c.filters, c.spec));
        EXPECT_EQ(r.report.sb_reads, synapse_set_reads(c.spec));
    }
}

TEST(StripesLayer, SignedNeurons) {
    std::mt19937_64 rng(13);
    const LayerSpec spec{20, 3, 16, 5, 3, 3, 1, 1, Activation::Identity, 2};
    const Tensor3 in = oracle::random_tensor(rng, 20, 3, 16, -32768, 32767);
    const FilterSet fs = oracle::random_filters(rng, spec, -100, 100);
    const PrecisionWindow p{11, 3};
    const auto r = stripes_layer(in, fs, spec, p, kSigned16);
    EXPECT_EQ(r.output, oracle::naive_conv(trim(in, p, true), fs, spec));
}

TEST(StripesLayer, FullPrecisionMatchesDadn) {
    const LayerSpec spec{34, 3, 32, 40, 3, 3};  // ox = 32
    std::mt19937_64 rng(14);
    const Tensor3 in = oracle::random_neurons(rng, 34, 3, 32);
    const FilterSet fs = oracle::random_filters(rng, spec, -5, 5);
    EXPECT_EQ(stripes_layer(in, fs, spec, PrecisionWindow{15, 0}).report.compute_cycles, dadn_cycles(spec));
}

TEST(StripesLayer, CyclesScaleWithPrecisionAndIgnoreValues) {
    const LayerSpec spec{32, 4, 16, 300, 1, 1};
    std::mt19937_64 rng(15);
    const FilterSet fs = oracle::random_filters(rng, spec, -5, 5);
    const Tensor3 a = oracle::random_neurons(rng, 32, 4, 16);
    const Tensor3 b(32, 4, 16);
    const auto full = stripes_layer(a, fs, spec, PrecisionWindow{15, 0}).report.compute_cycles;
    for (int w = 1; w <= 16; ++w) {
        const PrecisionWindow p{w - 1, 0};
        const auto ca = stripes_layer(a, fs, spec, p).report.compute_cycles;
        EXPECT_EQ(ca * 16, full * w);
        EXPECT_EQ(stripes_layer(b, fs, spec, p).report.compute_cycles, ca);
    }
}

TEST(StripesLayer, MissingProfile) {
    const LayerSpec spec{4, 4, 16, 1, 1, 1};
    FilterSet fs;
    fs.filters.emplace_back(1, 1, 16);
    try {
        (void)stripes_layer(Tensor3(4, 4, 16), fs, spec, std::nullopt);
        FAIL();
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingProfile);
    }
}
