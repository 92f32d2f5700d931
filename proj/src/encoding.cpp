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

#include "pragsim/encoding.hpp"

#include <bit>
#include <string>

#include "pragsim/error.hpp"

namespace pragsim {

std::int64_t OneffsetStream::value() const noexcept {
    std::int64_t v = 0;
    for (int k = 0; k < count_; ++k) v += std::int64_t{1} << offsets_[static_cast<std::size_t>(k)];
    return neg_ ? -v : v;
}

OneffsetStream encode(std::int32_t v, const NeuronFormat& fmt) {
    if (v < 0 && !fmt.is_signed) {
        throw SimError(ErrorCode::NegativeUnsupported, "negative neuron " + std::to_string(v) + " in unsigned mode");
    }
    const auto mag = static_cast<std::uint32_t>(v < 0 ? -static_cast<std::int64_t>(v) : v);
    if (mag >> fmt.width != 0) {
        throw SimError(ErrorCode::OutOfRange, "magnitude of " + std::to_string(v) + " exceeds " +
                                                  std::to_string(fmt.width) + " bits");
    }
    OneffsetStream s;
    s.neg_ = v < 0;
    std::uint32_t rest = mag;
    while (rest != 0) {
        const int bit = std::countr_zero(rest);
        s.offsets_[static_cast<std::size_t>(s.count_++)] = static_cast<std::uint8_t>(bit);
        rest &= rest - 1;
    }
    return s;
}

std::vector<OneffsetSlot> to_wire(const OneffsetStream& s) {
    if (s.empty()) return {OneffsetSlot{0, true, true}};
    std::vector<OneffsetSlot> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    for (int k = s.size() - 1; k >= 0; --k) {
        out.push_back({static_cast<std::uint8_t>(s.offset(k)), k == 0, false});
    }
    return out;
}

int essential_count(std::int32_t v, int width) {
    const auto mag = static_cast<std::uint32_t>(v < 0 ? -static_cast<std::int64_t>(v) : v);
    const std::uint32_t mask = width >= 32 ? ~0u : ((1u << width) - 1u);
    return std::popcount(mag & mask);
}

BitStats stats(std::span<const std::int32_t> trace, int width) {
    if (trace.empty()) throw SimError(ErrorCode::EmptyTrace, "essential-bit statistics need a nonempty trace");
    std::int64_t bits = 0;
    std::int64_t zeros = 0;
    for (std::int32_t v : trace) {
        bits += essential_count(v, width);
        zeros += v == 0 ? 1 : 0;
    }
    const auto count = static_cast<double>(trace.size());
    BitStats st;
    st.mean_essential_frac_all = static_cast<double>(bits) / (count * width);
    st.zero_fraction = static_cast<double>(zeros) / count;
    const auto nonzero = static_cast<std::int64_t>(trace.size()) - zeros;
    if (nonzero > 0) st.mean_essential_frac_nonzero = static_cast<double>(bits) / (static_cast<double>(nonzero) * width);
    return st;
}

}  // namespace pragsim
