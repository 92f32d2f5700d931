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
#include <vector>

#include "pragsim/geometry.hpp"
#include "pragsim/numerics.hpp"
#include "pragsim/reference.hpp"

namespace pragsim::detail {

using BrickValues = std::array<std::int32_t, kBrickSize>;

// Synapse bricks indexed [step * n + filter].
inline std::vector<BrickValues> synapse_bricks(const FilterSet& filters, const std::vector<BrickStep>& steps) {
    std::vector<BrickValues> out(steps.size() * filters.filters.size());
    for (std::size_t j = 0; j < steps.size(); ++j) {
        for (std::size_t f = 0; f < filters.filters.size(); ++f) {
            auto& b = out[j * filters.filters.size() + f];
            for (int k = 0; k < kBrickSize; ++k) {
                b[static_cast<std::size_t>(k)] = filters.filters[f].at(steps[j].bx, steps[j].by, steps[j].i0 + k);
            }
        }
    }
    return out;
}

// Wide partial sums for every output neuron, (y, x, f) order like Tensor3.
class Accumulators {
public:
    Accumulators(const OutputDims& od) : od_(od), sums_(static_cast<std::size_t>(od.ox) * od.oy * od.oi, 0) {}

    std::int64_t& at(int x, int y, int f) {
        return sums_[(static_cast<std::size_t>(y) * od_.ox + static_cast<std::size_t>(x)) * od_.oi +
                     static_cast<std::size_t>(f)];
    }

    Tensor3 activate_all(const LayerSpec& spec) const {
        Tensor3 out(od_.ox, od_.oy, od_.oi);
        for (std::size_t k = 0; k < sums_.size(); ++k) out.values()[k] = activate(sums_[k], spec.act, spec.out_shift);
        return out;
    }

private:
    OutputDims od_;
    std::vector<std::int64_t> sums_;
};

}  // namespace pragsim::detail
