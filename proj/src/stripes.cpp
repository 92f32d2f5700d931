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

#include "pragsim/stripes.hpp"

#include <string>
#include <vector>

#include "engine_common.hpp"
#include "pragsim/dispatcher.hpp"
#include "pragsim/error.hpp"

namespace pragsim {

bool fits_window(std::int32_t v, PrecisionWindow p, bool is_signed) noexcept {
    const std::int64_t low = std::int64_t{1} << p.lsb;
    if (v % low != 0) return false;
    if (is_signed) {
        const std::int64_t half = std::int64_t{1} << p.msb;
        return v >= -half && v < half;
    }
    return v >= 0 && v < (std::int64_t{1} << (p.msb + 1));
}

int plane_bits(std::int32_t v, PrecisionWindow p) noexcept {
    int bits = 0;
    for (int b = p.lsb; b <= p.msb; ++b) bits += (v >> b) & 1;
    return bits;
}

std::int64_t sip_inner(std::span<const std::int32_t> neurons, std::span<const std::int32_t> synapses,
                       PrecisionWindow p, bool is_signed) {
    if (neurons.size() != synapses.size()) throw SimError(ErrorCode::ShapeMismatch, "lane count mismatch");
    for (std::int32_t n : neurons) {
        if (!fits_window(n, p, is_signed)) {
            throw SimError(ErrorCode::OutOfRange, "neuron " + std::to_string(n) + " outside precision window");
        }
    }
    std::int64_t acc = 0;
    for (int b = p.lsb; b <= p.msb; ++b) {
        std::int64_t plane = 0;
        for (std::size_t k = 0; k < neurons.size(); ++k) {
            if ((neurons[k] >> b) & 1) plane += synapses[k];
        }
        const std::int64_t term = plane * (std::int64_t{1} << b);
        acc += (is_signed && b == p.msb) ? -term : term;
    }
    return acc;
}

EngineResult stripes_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                           const std::optional<PrecisionWindow>& profile, const NeuronFormat& fmt) {
    if (!profile) throw SimError(ErrorCode::MissingProfile, "precision-serial engine needs a precision window");
    validate(fmt);
    validate(*profile, fmt.width);
    const OutputDims od = output_dims(spec);
    check_shapes(input, filters, spec);
    check_container(input, fmt);

    const PrecisionWindow p = *profile;
    const Tensor3 neurons = trim(input, p, fmt.is_signed);
    const auto steps = brick_steps(spec);
    const auto syn = detail::synapse_bricks(filters, steps);
    const auto n = static_cast<std::size_t>(spec.n);

    detail::Accumulators acc(od);
    for (int wy = 0; wy < od.oy; ++wy) {
        for (int base = 0; base < od.ox; base += kPalletWindows) {
            for (std::size_t j = 0; j < steps.size(); ++j) {
                const Pallet pal = build_pallet(neurons, spec, base, wy, steps[j].bx, steps[j].by, steps[j].i0);
                for (int w = 0; w < kPalletWindows; ++w) {
                    if (!pal.present[static_cast<std::size_t>(w)]) continue;
                    const auto& nb = pal.bricks[static_cast<std::size_t>(w)].values;
                    for (std::size_t f = 0; f < n; ++f) {
                        acc.at(base + w, wy, static_cast<int>(f)) += sip_inner(nb, syn[j * n + f], p, fmt.is_signed);
                    }
                }
            }
        }
    }

    const auto fetch = layer_fetch_sequence(spec);
    const std::vector<int> phase(fetch.size(), p.width());
    const PhaseTiming timing = pallet_sync_timing(phase, fetch, filter_groups(spec));

    EngineResult r{acc.activate_all(spec), {}};
    r.report.compute_cycles = timing.cycles;
    r.report.nm_fetch_cycles = timing.fetch_cycles;
    r.report.stall_cycles = timing.stall_cycles;
    r.report.sb_reads = synapse_set_reads(spec);
    r.report.total_terms = p.width() * multiplications(spec);
    r.report.effectual_terms = sum_over_pairs(neurons, spec, [&](std::int32_t v) { return plane_bits(v, p); });
    return r;
}

}  // namespace pragsim
