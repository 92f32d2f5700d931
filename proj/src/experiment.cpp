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

#include "pragsim/experiment.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "pragsim/error.hpp"
#include "pragsim/pragmatic.hpp"
#include "pragsim/reference.hpp"
#include "pragsim/stripes.hpp"
#include "pragsim/trace.hpp"

namespace pragsim {

namespace {

std::uint64_t neuron_stream(std::size_t layer) { return 2 * static_cast<std::uint64_t>(layer); }
std::uint64_t synapse_stream(std::size_t layer) { return 2 * static_cast<std::uint64_t>(layer) + 1; }

TraceDtype dtype_for(const NeuronFormat& fmt) { return fmt.width == 8 ? TraceDtype::UInt8 : TraceDtype::Int16; }

// Raw neurons as configured (depth not yet extended).
Tensor3 load_or_generate(const ExperimentConfig& cfg, std::size_t layer, const NeuronFormat& fmt,
                         std::optional<QuantParams>& quant) {
    const LayerConfig& lc = cfg.layers.at(layer);
    const LayerSpec& spec = lc.spec;
    if (const auto* st = std::get_if<SyntheticTrace>(&cfg.trace)) {
        const auto seed = derive_seed(cfg.seed, neuron_stream(layer));
        if (fmt.width == 8) {
            auto q = generate_quantized_trace(spec, st->sigma, st->relu, seed, lc.quant);
            quant = q.params;
            return std::move(q.codes);
        }
        return generate_trace(spec, st->sigma, st->relu, seed, fmt);
    }
    const auto& ft = std::get<FileTrace>(cfg.trace);
    const auto path = ft.dir / (lc.name + ".prgt");
    TraceDtype dtype{};
    Tensor3 t = read_trace(path, &dtype);
    if (dtype != dtype_for(fmt)) {
        throw SimError(ErrorCode::TraceIOError,
                       path.string() + ": dtype does not match the configured width " + std::to_string(fmt.width));
    }
    if (t.x() != spec.nx || t.y() != spec.ny || t.depth() != spec.i) {
        throw SimError(ErrorCode::TraceIOError,
                       path.string() + ": dims " + std::to_string(t.x()) + "x" + std::to_string(t.y()) + "x" +
                           std::to_string(t.depth()) + " do not match layer " + lc.name);
    }
    try {
        check_container(t, fmt);
    } catch (const SimError& e) {
        throw SimError(ErrorCode::TraceIOError, path.string() + ": " + e.what());
    }
    quant = lc.quant;
    return t;
}

TermTag tag_for(const EngineVariant& v) {
    switch (v.kind) {
        case EngineKind::DaDN: return TermTag::DaDN;
        case EngineKind::Stripes: return TermTag::STR;
        case EngineKind::Pragmatic: return v.prag.trim == TrimMode::Profile ? TermTag::PRA_red : TermTag::PRA_fp16;
    }
    return TermTag::DaDN;
}

void expect_equal(const Tensor3& want, const Tensor3& got, const std::string& layer, const std::string& engine) {
    if (want.values().size() != got.values().size()) {
        throw SimError(ErrorCode::OracleMismatch, layer + "/" + engine + ": output shape differs from the oracle");
    }
    for (int y = 0; y < want.y(); ++y) {
        for (int x = 0; x < want.x(); ++x) {
            for (int f = 0; f < want.depth(); ++f) {
                if (want.at(x, y, f) != got.at(x, y, f)) {
                    throw SimError(ErrorCode::OracleMismatch,
                                   layer + "/" + engine + ": output (" + std::to_string(x) + "," + std::to_string(y) +
                                       "," + std::to_string(f) + ") is " + std::to_string(got.at(x, y, f)) +
                                       ", oracle " + std::to_string(want.at(x, y, f)));
                }
            }
        }
    }
}

LayerRun base_run(const ExperimentConfig& cfg, std::size_t layer, const LayerInputs& in) {
    LayerRun run;
    run.layer = cfg.layers[layer].name;
    run.width = in.fmt.width;
    run.dadn_cycles = dadn_cycles(in.spec);
    run.terms = count_terms(in.input, in.spec, analysis_window(cfg, layer), in.fmt, cfg.layers[layer].first);
    run.stats = stats(in.input.values(), in.fmt.width);
    return run;
}

bool needs_profile(const EngineVariant& v) {
    return v.kind == EngineKind::Stripes || (v.kind == EngineKind::Pragmatic && v.prag.trim == TrimMode::Profile);
}

}  // namespace

LayerInputs build_layer_inputs(const ExperimentConfig& cfg, std::size_t layer) {
    const LayerConfig& lc = cfg.layers.at(layer);
    validate(with_brick_depth(lc.spec));
    const NeuronFormat fmt = neuron_format(cfg);
    LayerInputs in{with_brick_depth(lc.spec), Tensor3(0, 0, 0), {}, fmt, std::nullopt};
    const Tensor3 raw = load_or_generate(cfg, layer, fmt, in.quant);
    const FilterSet filters =
        generate_filters(lc.spec, cfg.synapse_sigma, derive_seed(cfg.seed, synapse_stream(layer)), fmt.width);
    in.input = zero_extend_depth(raw, in.spec.i);
    in.filters = zero_extend_depth(filters, in.spec.i);
    check_shapes(in.input, in.filters, in.spec);
    return in;
}

PrecisionWindow analysis_window(const ExperimentConfig& cfg, std::size_t layer) {
    const auto& p = cfg.layers.at(layer).precision;
    if (p) return *p;
    return PrecisionWindow{neuron_format(cfg).width - 1, 0};
}

LayerRun simulate_layer(const ExperimentConfig& cfg, std::size_t layer) {
    const LayerInputs in = build_layer_inputs(cfg, layer);
    const LayerConfig& lc = cfg.layers[layer];
    LayerRun run = base_run(cfg, layer, in);

    const Tensor3 want_raw = conv_oracle(in.input, in.filters, in.spec);
    std::optional<Tensor3> want_trimmed;
    const auto trimmed_oracle = [&]() -> const Tensor3& {
        if (!want_trimmed) {
            const PrecisionWindow p = analysis_window(cfg, layer);
            want_trimmed = conv_oracle(trim(in.input, p, in.fmt.is_signed), in.filters, in.spec);
        }
        return *want_trimmed;
    };

    for (const EngineVariant& v : cfg.engines) {
        EngineRun er;
        er.engine = v.label();
        er.terms = tag_for(v);
        const std::optional<PrecisionWindow> profile =
            needs_profile(v) ? std::optional(analysis_window(cfg, layer)) : lc.precision;
        EngineResult res{Tensor3(0, 0, 0), {}};
        switch (v.kind) {
            case EngineKind::DaDN:
                res = dadn_layer(in.input, in.filters, in.spec, in.fmt);
                break;
            case EngineKind::Stripes:
                res = stripes_layer(in.input, in.filters, in.spec, profile, in.fmt);
                break;
            case EngineKind::Pragmatic:
                res = prag_layer(in.input, in.filters, in.spec, profile, v.prag, in.fmt);
                break;
        }
        if (needs_profile(v)) {
            er.precision = profile->width();
            expect_equal(trimmed_oracle(), res.output, run.layer, er.engine);
        } else {
            expect_equal(want_raw, res.output, run.layer, er.engine);
        }
        er.report = res.report;
        run.engines.push_back(std::move(er));
    }
    return run;
}

LayerRun analyze_layer(const ExperimentConfig& cfg, std::size_t layer) {
    return base_run(cfg, layer, build_layer_inputs(cfg, layer));
}

std::vector<LayerRun> simulate(const ExperimentConfig& cfg, int jobs) {
    std::vector<LayerRun> runs(cfg.layers.size());
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t begin = 0; begin < runs.size(); begin += width) {
        const std::size_t end = std::min(runs.size(), begin + width);
        std::vector<std::future<LayerRun>> pending;
        for (std::size_t k = begin; k < end; ++k) {
            pending.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                         [&cfg, k] { return simulate_layer(cfg, k); }));
        }
        // get() in layer order so the first failing layer is the one reported
        for (std::size_t k = begin; k < end; ++k) runs[k] = pending[k - begin].get();
    }
    return runs;
}

std::vector<LayerRun> analyze(const ExperimentConfig& cfg) {
    std::vector<LayerRun> runs;
    runs.reserve(cfg.layers.size());
    for (std::size_t k = 0; k < cfg.layers.size(); ++k) runs.push_back(analyze_layer(cfg, k));
    return runs;
}

void generate_traces(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw SimError(ErrorCode::TraceIOError, dir.string() + ": " + ec.message());
    const NeuronFormat fmt = neuron_format(cfg);
    for (std::size_t k = 0; k < cfg.layers.size(); ++k) {
        std::optional<QuantParams> quant;
        const Tensor3 raw = load_or_generate(cfg, k, fmt, quant);
        write_trace(dir / (cfg.layers[k].name + ".prgt"), raw, dtype_for(fmt));
    }
}

void dry_run(const ExperimentConfig& cfg) {
    for (std::size_t k = 0; k < cfg.layers.size(); ++k) {
        const LayerInputs in = build_layer_inputs(cfg, k);
        check_container(in.input, in.fmt);
        const PrecisionWindow p = analysis_window(cfg, k);
        validate(p, in.fmt.width);
        for (const EngineVariant& v : cfg.engines) {
            if (v.kind == EngineKind::Pragmatic) validate(v.prag);
        }
    }
}

}  // namespace pragsim
