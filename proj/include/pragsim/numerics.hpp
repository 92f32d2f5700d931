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
#include <optional>
#include <vector>

#include "pragsim/geometry.hpp"

namespace pragsim {

/// How neuron containers are interpreted by the serial engines.
///
/// Unsigned containers hold post-activation values in [0, 2^width). Signed
/// containers are 16-bit two's complement; the precision-serial engine treats
/// the top bit of the precision window as a negatively weighted sign plane and
/// the essential-bit engine encodes sign-magnitude.
struct NeuronFormat {
    int width = 16;  // 8 or 16
    bool is_signed = false;

    bool operator==(const NeuronFormat&) const = default;
};

inline constexpr NeuronFormat kUnsigned16{16, false};
inline constexpr NeuronFormat kSigned16{16, true};
inline constexpr NeuronFormat kUnsigned8{8, false};

void validate(const NeuronFormat& fmt);
[[nodiscard]] bool fits_container(std::int32_t v, const NeuronFormat& fmt) noexcept;
// Throws OutOfRange naming the first offending value.
void check_container(const Tensor3& t, const NeuronFormat& fmt);

/// Bit window [lsb, msb] kept by per-layer trimming; bit 0 is the container LSB.
struct PrecisionWindow {
    int msb = 15;
    int lsb = 0;

    [[nodiscard]] int width() const noexcept { return msb - lsb + 1; }
    bool operator==(const PrecisionWindow&) const = default;
};

// One window per layer, in layer order.
using PrecisionProfile = std::vector<PrecisionWindow>;

void validate(const PrecisionWindow& p, int container_width = 16);

// Maps per-layer widths (as published precision tables list them) onto windows
// anchored at `lsb`.
PrecisionProfile profile_from_widths(const std::vector<int>& widths, int lsb = 0);

// Zeroes prefix and suffix bits outside the window. Unsigned values are masked
// directly; negative values are rejected with NegativeTrim. In signed mode the
// magnitude is masked to [lsb, msb-1] so that the result is representable as a
// two's-complement number whose sign bit is msb.
std::int32_t trim(std::int32_t v, PrecisionWindow p, bool is_signed = false);

Tensor3 trim(const Tensor3& t, PrecisionWindow p, bool is_signed = false);

struct QuantParams {
    double vmin = 0.0;
    double vmax = 1.0;
};

void validate(const QuantParams& q);

// Linear map of [vmin, vmax] onto codes 0..255, round-half-to-even, clamped.
std::uint8_t quantize8(double x, const QuantParams& q);
double dequantize8(std::uint8_t code, const QuantParams& q);

inline constexpr std::int32_t kFixedMin = -32768;
inline constexpr std::int32_t kFixedMax = 32767;

// Activation, then arithmetic right shift (rounds toward -inf), then saturation
// to the signed 16-bit range.
std::int32_t activate(std::int64_t sum, Activation act, int out_shift);

}  // namespace pragsim
