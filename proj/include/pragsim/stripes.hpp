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
#include <span>

#include "pragsim/numerics.hpp"
#include "pragsim/reference.hpp"

namespace pragsim {

/// Serial inner product over the bit planes of the neurons.
///
/// Plane b contributes 2^b times the sum of the synapses whose neuron has bit
/// b set, for b in [lsb, msb]. With signed neurons the msb plane carries the
/// two's-complement sign and is subtracted. Neurons must already lie inside
/// the window (OutOfRange otherwise).
std::int64_t sip_inner(std::span<const std::int32_t> neurons, std::span<const std::int32_t> synapses,
                       PrecisionWindow p, bool is_signed = false);

// True when v is exactly representable by the planes of the window.
bool fits_window(std::int32_t v, PrecisionWindow p, bool is_signed) noexcept;

// Neuron bits inside the window the serial engine actually sees as ones.
int plane_bits(std::int32_t v, PrecisionWindow p) noexcept;

/// Precision-serial engine: 16 windows in parallel, p cycles per pallet phase,
/// NM fetches overlapped with processing.
EngineResult stripes_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                           const std::optional<PrecisionWindow>& profile, const NeuronFormat& fmt = kUnsigned16);

}  // namespace pragsim
