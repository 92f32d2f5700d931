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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pragsim/numerics.hpp"

namespace pragsim {

/// A neuron as the ascending list of its essential-bit positions (oneffsets).
/// An empty list is the value zero; it still costs one serial slot for the
/// end-of-neuron marker.
class OneffsetStream {
public:
    static constexpr int kMaxOffsets = 16;

    OneffsetStream() = default;

    [[nodiscard]] int size() const noexcept { return count_; }
    [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
    [[nodiscard]] bool negative() const noexcept { return neg_; }
    [[nodiscard]] int offset(int k) const noexcept { return offsets_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] int serial_slots() const noexcept { return count_ == 0 ? 1 : count_; }

    [[nodiscard]] std::span<const std::uint8_t> offsets() const noexcept {
        return {offsets_.data(), static_cast<std::size_t>(count_)};
    }

    // Sum of 2^offset, negated for sign-magnitude negatives.
    [[nodiscard]] std::int64_t value() const noexcept;

    bool operator==(const OneffsetStream&) const = default;

private:
    friend OneffsetStream encode(std::int32_t v, const NeuronFormat& fmt);

    std::array<std::uint8_t, kMaxOffsets> offsets_{};
    int count_ = 0;
    bool neg_ = false;
};

// Throws NegativeUnsupported for a negative value in an unsigned format and
// OutOfRange when the magnitude does not fit the container width.
OneffsetStream encode(std::int32_t v, const NeuronFormat& fmt);

/// One (pow, eon) slot as broadcast to the tiles. A zero neuron is a single
/// null slot carrying only the end marker.
struct OneffsetSlot {
    std::uint8_t pow = 0;  // 4-bit
    bool eon = false;
    bool null_term = false;

    bool operator==(const OneffsetSlot&) const = default;
};

// Wire order lists the most significant oneffset first, eon on the last slot.
std::vector<OneffsetSlot> to_wire(const OneffsetStream& s);

int essential_count(std::int32_t v, int width);

struct BitStats {
    double mean_essential_frac_all = 0.0;
    std::optional<double> mean_essential_frac_nonzero;  // absent for all-zero traces
    double zero_fraction = 0.0;
};

BitStats stats(std::span<const std::int32_t> trace, int width);

}  // namespace pragsim
