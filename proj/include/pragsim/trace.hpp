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
#include <filesystem>
#include <optional>
#include <random>

#include "pragsim/geometry.hpp"
#include "pragsim/numerics.hpp"

namespace pragsim {

// Mixes a seed with a stream id (SplitMix64 finaliser) so that neurons and
// synapses of every layer draw from independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Normal deviates from std::mt19937_64 via Box-Muller. Both pieces are fully
/// specified, so the sequence does not depend on the standard library vendor.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next();                  // N(0, 1)
    double uniform();               // [0, 1), 53 bits
    std::uint64_t bits() { return rng_(); }

private:
    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

// Neurons for a layer input (nx, ny, i): round-half-even of N(0, sigma),
// optionally rectified, clamped to the container of fmt.
Tensor3 generate_trace(const LayerSpec& spec, double sigma, bool relu, std::uint64_t seed,
                       const NeuronFormat& fmt = kUnsigned16);

struct QuantizedTrace {
    Tensor3 codes;
    QuantParams params;
};

// Real-valued N(0, sigma) neurons (optionally rectified) mapped to 8-bit codes.
// Without explicit params the range spans the drawn values.
QuantizedTrace generate_quantized_trace(const LayerSpec& spec, double sigma, bool relu, std::uint64_t seed,
                                        const std::optional<QuantParams>& q);

// n filters of (fx, fy, i). 16-bit synapses are rounded N(0, sigma) clamped to
// +-32767; 8-bit synapses are uniform codes.
FilterSet generate_filters(const LayerSpec& spec, double sigma, std::uint64_t seed, int width);

enum class TraceDtype : std::uint8_t { Int16 = 0, UInt8 = 1 };

inline constexpr std::uint16_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderBytes = 20;

// "PRGT", u16 version, u8 dtype, u8 reserved, u32 x, y, i, then the values in
// (y, x, i) order, all little-endian. Throws TraceIOError.
void write_trace(const std::filesystem::path& path, const Tensor3& t, TraceDtype dtype);
Tensor3 read_trace(const std::filesystem::path& path, TraceDtype* dtype_out = nullptr);

}  // namespace pragsim
