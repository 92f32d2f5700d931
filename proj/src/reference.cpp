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

#include "pragsim/reference.hpp"

#include "pragsim/encoding.hpp"
#include "pragsim/error.hpp"

namespace pragsim {

std::int64_t oracle_sum(const Tensor3& input, const Tensor3& filter, const LayerSpec& spec, int ox, int oy) {
    std::int64_t acc = 0;
    for (int y = 0; y < spec.fy; ++y) {
        const int iy = oy * spec.s + y - spec.pad;
        if (iy < 0 || iy >= spec.ny) continue;
        for (int x = 0; x < spec.fx; ++x) {
            const int ix = ox * spec.s + x - spec.pad;
            if (ix < 0 || ix >= spec.nx) continue;
            for (int i = 0; i < spec.i; ++i) {
                acc += static_cast<std::int64_t>(filter.at(x, y, i)) * input.at(ix, iy, i);
            }
        }
    }
    return acc;
}

Tensor3 conv_oracle(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec) {
    const OutputDims od = output_dims(spec);
    check_shapes(input, filters, spec);
    Tensor3 out(od.ox, od.oy, od.oi);
    for (int l = 0; l < od.oy; ++l)
        for (int k = 0; k < od.ox; ++k)
            for (int f = 0; f < spec.n; ++f) {
                const auto sum = oracle_sum(input, filters.filters[static_cast<std::size_t>(f)], spec, k, l);
                out.at(k, l, f) = activate(sum, spec.act, spec.out_shift);
            }
    return out;
}

std::int64_t dadn_cycles(const LayerSpec& spec) {
    const OutputDims od = output_dims(spec);
    return filter_groups(spec) * od.ox * od.oy * spec.fx * spec.fy * (spec.i / kBrickSize);
}

std::int64_t multiplications(const LayerSpec& spec) {
    const OutputDims od = output_dims(spec);
    return static_cast<std::int64_t>(spec.n) * od.ox * od.oy * spec.fx * spec.fy * spec.i;
}

std::int64_t dadn_terms(const LayerSpec& spec, int width) { return width * multiplications(spec); }

std::int64_t synapse_set_reads(const LayerSpec& spec) {
    return filter_groups(spec) * pallets_per_layer(spec) * spec.fx * spec.fy * (spec.i / kBrickSize);
}

std::int64_t sum_over_pairs(const Tensor3& input, const LayerSpec& spec,
                            const std::function<std::int64_t(std::int32_t)>& cost) {
    const OutputDims od = output_dims(spec);
    const std::int64_t zero_cost = cost(0);
    std::int64_t total = 0;
    for (int l = 0; l < od.oy; ++l)
        for (int k = 0; k < od.ox; ++k)
            for (int y = 0; y < spec.fy; ++y)
                for (int x = 0; x < spec.fx; ++x) {
                    const int ix = k * spec.s + x - spec.pad;
                    const int iy = l * spec.s + y - spec.pad;
                    if (ix < 0 || ix >= spec.nx || iy < 0 || iy >= spec.ny) {
                        total += zero_cost * spec.i;
                        continue;
                    }
                    for (int i = 0; i < spec.i; ++i) total += cost(input.at(ix, iy, i));
                }
    return total * spec.n;
}

EngineResult dadn_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                        const NeuronFormat& fmt) {
    validate(fmt);
    check_container(input, fmt);
    EngineResult r{conv_oracle(input, filters, spec), {}};
    r.report.compute_cycles = dadn_cycles(spec);
    r.report.sb_reads = synapse_set_reads(spec);
    r.report.total_terms = dadn_terms(spec, fmt.width);
    r.report.effectual_terms =
        sum_over_pairs(input, spec, [&](std::int32_t v) { return essential_count(v, fmt.width); });
    return r;
}

}  // namespace pragsim
