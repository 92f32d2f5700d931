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

#include "pragsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pragsim/error.hpp"

namespace pragsim {

void validate(const NeuronFormat& fmt) {
    if (fmt.width != 8 && fmt.width != 16) throw SimError(ErrorCode::OutOfRange, "width must be 8 or 16");
    if (fmt.width == 8 && fmt.is_signed) throw SimError(ErrorCode::OutOfRange, "8-bit codes are unsigned");
}

bool fits_container(std::int32_t v, const NeuronFormat& fmt) noexcept {
    if (fmt.is_signed) {
        const std::int32_t half = std::int32_t{1} << (fmt.width - 1);
        return v >= -half && v < half;
    }
    return v >= 0 && v < (std::int32_t{1} << fmt.width);
}

void check_container(const Tensor3& t, const NeuronFormat& fmt) {
    for (std::int32_t v : t.values()) {
        if (!fits_container(v, fmt)) {
            throw SimError(ErrorCode::OutOfRange, "value " + std::to_string(v) + " does not fit a " +
                                                      (fmt.is_signed ? "signed " : "unsigned ") +
                                                      std::to_string(fmt.width) + "-bit container");
        }
    }
}

void validate(const PrecisionWindow& p, int container_width) {
    if (p.lsb < 0 || p.msb < p.lsb || p.msb >= container_width) {
        throw SimError(ErrorCode::OutOfRange, "precision window (" + std::to_string(p.msb) + "," +
                                                  std::to_string(p.lsb) + ") outside " +
                                                  std::to_string(container_width) + "-bit container");
    }
}

PrecisionProfile profile_from_widths(const std::vector<int>& widths, int lsb) {
    PrecisionProfile out;
    out.reserve(widths.size());
    for (int w : widths) {
        PrecisionWindow p{lsb + w - 1, lsb};
        validate(p);
        out.push_back(p);
    }
    return out;
}

namespace {

std::int32_t window_mask(int msb, int lsb) {
    if (msb < lsb) return 0;
    const std::uint32_t hi = (msb >= 31) ? ~0u : ((1u << (msb + 1)) - 1u);
    const std::uint32_t lo = (1u << lsb) - 1u;
    return static_cast<std::int32_t>(hi & ~lo);
}

}  // namespace

std::int32_t trim(std::int32_t v, PrecisionWindow p, bool is_signed) {
    validate(p);
    if (!is_signed) {
        if (v < 0) throw SimError(ErrorCode::NegativeTrim, "negative value " + std::to_string(v));
        return v & window_mask(p.msb, p.lsb);
    }
    const std::int32_t mag = (v < 0 ? -v : v) & window_mask(p.msb - 1, p.lsb);
    return v < 0 ? -mag : mag;
}

Tensor3 trim(const Tensor3& t, PrecisionWindow p, bool is_signed) {
    Tensor3 out = t;
    for (auto& v : out.values()) v = trim(v, p, is_signed);
    return out;
}

void validate(const QuantParams& q) {
    if (!(q.vmax > q.vmin) || !std::isfinite(q.vmin) || !std::isfinite(q.vmax)) {
        throw SimError(ErrorCode::DegenerateRange, "quantization range requires vmin < vmax");
    }
}

std::uint8_t quantize8(double x, const QuantParams& q) {
    validate(q);
    const double c = std::clamp(x, q.vmin, q.vmax);
    const double t = (c - q.vmin) * 255.0 / (q.vmax - q.vmin);
    // nearbyint honours the default round-to-nearest-even mode.
    const double r = std::nearbyint(t);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

double dequantize8(std::uint8_t code, const QuantParams& q) {
    return q.vmin + static_cast<double>(code) * (q.vmax - q.vmin) / 255.0;
}

std::int32_t activate(std::int64_t sum, Activation act, int out_shift) {
    std::int64_t y = sum;
    if (act == Activation::Relu && y < 0) y = 0;
    y >>= out_shift;
    return static_cast<std::int32_t>(std::clamp<std::int64_t>(y, kFixedMin, kFixedMax));
}

}  // namespace pragsim
