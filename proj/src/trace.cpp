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

#include "pragsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "pragsim/error.hpp"

namespace pragsim {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double GaussianSource::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double GaussianSource::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
}

Tensor3 generate_trace(const LayerSpec& spec, double sigma, bool relu, std::uint64_t seed, const NeuronFormat& fmt) {
    validate(fmt);
    if (!(sigma > 0.0)) throw SimError(ErrorCode::OutOfRange, "sigma must be positive");
    const double lo = fmt.is_signed ? -std::ldexp(1.0, fmt.width - 1) : 0.0;
    const double hi = fmt.is_signed ? std::ldexp(1.0, fmt.width - 1) - 1.0 : std::ldexp(1.0, fmt.width) - 1.0;
    GaussianSource g(seed);
    Tensor3 t(spec.nx, spec.ny, spec.i);
    for (auto& v : t.values()) {
        double x = g.next() * sigma;
        if (relu) x = std::max(x, 0.0);
        v = static_cast<std::int32_t>(std::clamp(std::nearbyint(x), lo, hi));
    }
    return t;
}

QuantizedTrace generate_quantized_trace(const LayerSpec& spec, double sigma, bool relu, std::uint64_t seed,
                                        const std::optional<QuantParams>& q) {
    if (!(sigma > 0.0)) throw SimError(ErrorCode::OutOfRange, "sigma must be positive");
    GaussianSource g(seed);
    std::vector<double> real(static_cast<std::size_t>(spec.nx) * spec.ny * spec.i);
    for (auto& x : real) {
        x = g.next() * sigma;
        if (relu) x = std::max(x, 0.0);
    }
    QuantParams params;
    if (q) {
        params = *q;
    } else {
        const auto [mn, mx] = std::minmax_element(real.begin(), real.end());
        params = {*mn, *mx};
        if (!(params.vmax > params.vmin)) params.vmax = params.vmin + 1.0;
    }
    validate(params);
    QuantizedTrace out{Tensor3(spec.nx, spec.ny, spec.i), params};
    for (std::size_t k = 0; k < real.size(); ++k) out.codes.values()[k] = quantize8(real[k], params);
    return out;
}

FilterSet generate_filters(const LayerSpec& spec, double sigma, std::uint64_t seed, int width) {
    GaussianSource g(seed);
    FilterSet fs;
    fs.filters.reserve(static_cast<std::size_t>(spec.n));
    for (int f = 0; f < spec.n; ++f) {
        Tensor3 t(spec.fx, spec.fy, spec.i);
        for (auto& v : t.values()) {
            if (width == 8) {
                v = static_cast<std::int32_t>(g.bits() & 0xffu);
            } else {
                v = static_cast<std::int32_t>(std::clamp(std::nearbyint(g.next() * sigma), -32767.0, 32767.0));
            }
        }
        fs.filters.push_back(std::move(t));
    }
    return fs;
}

namespace {

void put_le(std::vector<unsigned char>& buf, std::uint64_t v, int bytes) {
    for (int k = 0; k < bytes; ++k) buf.push_back(static_cast<unsigned char>((v >> (8 * k)) & 0xffu));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int k = 0; k < bytes; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
    return v;
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& why) {
    throw SimError(ErrorCode::TraceIOError, path.string() + ": " + why);
}

}  // namespace

void write_trace(const std::filesystem::path& path, const Tensor3& t, TraceDtype dtype) {
    std::vector<unsigned char> buf;
    const std::size_t elem = dtype == TraceDtype::Int16 ? 2 : 1;
    buf.reserve(kTraceHeaderBytes + t.size() * elem);
    for (char c : {'P', 'R', 'G', 'T'}) buf.push_back(static_cast<unsigned char>(c));
    put_le(buf, kTraceVersion, 2);
    put_le(buf, static_cast<std::uint8_t>(dtype), 1);
    put_le(buf, 0, 1);
    put_le(buf, static_cast<std::uint32_t>(t.x()), 4);
    put_le(buf, static_cast<std::uint32_t>(t.y()), 4);
    put_le(buf, static_cast<std::uint32_t>(t.depth()), 4);
    for (std::int32_t v : t.values()) {
        if (dtype == TraceDtype::Int16) {
            if (v < -32768 || v > 32767) io_fail(path, "value " + std::to_string(v) + " does not fit int16");
            put_le(buf, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)), 2);
        } else {
            if (v < 0 || v > 255) io_fail(path, "value " + std::to_string(v) + " does not fit uint8");
            put_le(buf, static_cast<std::uint8_t>(v), 1);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) io_fail(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) io_fail(path, "write failed");
}

Tensor3 read_trace(const std::filesystem::path& path, TraceDtype* dtype_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < kTraceHeaderBytes) io_fail(path, "truncated header");
    if (buf[0] != 'P' || buf[1] != 'R' || buf[2] != 'G' || buf[3] != 'T') io_fail(path, "bad magic");
    if (get_le(&buf[4], 2) != kTraceVersion) io_fail(path, "unsupported version " + std::to_string(get_le(&buf[4], 2)));
    if (buf[6] > 1) io_fail(path, "unknown dtype " + std::to_string(buf[6]));
    const auto dtype = static_cast<TraceDtype>(buf[6]);
    const auto dx = get_le(&buf[8], 4);
    const auto dy = get_le(&buf[12], 4);
    const auto di = get_le(&buf[16], 4);
    if (dx > INT32_MAX || dy > INT32_MAX || di > INT32_MAX) io_fail(path, "dimension too large");
    const std::size_t elem = dtype == TraceDtype::Int16 ? 2 : 1;
    const std::uint64_t count = dx * dy * di;
    if (buf.size() - kTraceHeaderBytes != count * elem) {
        io_fail(path, "payload holds " + std::to_string(buf.size() - kTraceHeaderBytes) + " bytes, expected " +
                          std::to_string(count * elem));
    }
    std::vector<std::int32_t> values(count);
    const unsigned char* p = buf.data() + kTraceHeaderBytes;
    for (std::size_t k = 0; k < count; ++k, p += elem) {
        values[k] = elem == 2 ? static_cast<std::int16_t>(static_cast<std::uint16_t>(get_le(p, 2)))
                              : static_cast<std::int32_t>(*p);
    }
    if (dtype_out) *dtype_out = dtype;
    return Tensor3(static_cast<int>(dx), static_cast<int>(dy), static_cast<int>(di), std::move(values));
}

}  // namespace pragsim
