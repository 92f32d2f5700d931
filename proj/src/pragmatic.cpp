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

#include "pragsim/pragmatic.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "engine_common.hpp"
#include "pragsim/dispatcher.hpp"
#include "pragsim/error.hpp"

namespace pragsim {

void validate(const PragConfig& cfg) {
    if (cfg.l_bits < 0 || cfg.l_bits > kMaxLBits) throw SimError(ErrorCode::ConfigError, "l_bits must lie in 0..4");
    if (cfg.ssr_count && *cfg.ssr_count < 1) throw SimError(ErrorCode::ConfigError, "ssr_count must be >= 1");
    if (cfg.pallet_buffer && *cfg.pallet_buffer < 1) {
        throw SimError(ErrorCode::ConfigError, "pallet_buffer must be >= 1");
    }
}

std::string label(const PragConfig& cfg) {
    std::string s = "PRA-" + std::to_string(cfg.l_bits) + "b";
    if (cfg.sync == SyncMode::Pallet) {
        s += "-pallet";
    } else {
        s += "-col-" + (cfg.ssr_count ? std::to_string(*cfg.ssr_count) : std::string("inf")) + "R";
    }
    s += cfg.trim == TrimMode::None ? "-fp16" : "-red";
    return s;
}

StageDecision two_stage_step(std::span<const std::optional<int>> heads, int l_bits) {
    if (heads.size() > static_cast<std::size_t>(kPipLanes)) throw SimError(ErrorCode::OutOfRange, "more than 16 lanes");
    if (l_bits < 0 || l_bits > kMaxLBits) throw SimError(ErrorCode::OutOfRange, "l_bits must lie in 0..4");
    int c = std::numeric_limits<int>::max();
    for (const auto& h : heads)
        if (h) c = std::min(c, *h);
    if (c == std::numeric_limits<int>::max()) throw SimError(ErrorCode::AllDone, "no live lanes");

    StageDecision d;
    d.c = c;
    d.first_stage.fill(-1);
    const int reach = 1 << l_bits;
    for (std::size_t k = 0; k < heads.size(); ++k) {
        if (!heads[k]) continue;
        const int diff = *heads[k] - c;
        if (diff < reach) {
            d.advance = static_cast<LaneMask>(d.advance | (1u << k));
            d.first_stage[k] = static_cast<std::int8_t>(diff);
        }
    }
    return d;
}

LaneState::LaneState(std::span<const OneffsetStream> streams) : lanes_(streams.size()) {
    if (streams.size() > static_cast<std::size_t>(kPipLanes)) throw SimError(ErrorCode::OutOfRange, "more than 16 lanes");
    std::copy(streams.begin(), streams.end(), streams_.begin());
}

std::vector<std::optional<int>> LaneState::heads() const {
    std::vector<std::optional<int>> h(lanes_);
    for (std::size_t k = 0; k < lanes_; ++k) {
        if (pos_[k] < streams_[k].size()) h[k] = streams_[k].offset(pos_[k]);
    }
    return h;
}

bool LaneState::done() const noexcept {
    for (std::size_t k = 0; k < lanes_; ++k)
        if (pos_[k] < streams_[k].size()) return false;
    return true;
}

LaneState::Outcome LaneState::step(int l_bits) {
    std::array<std::optional<int>, kPipLanes> h;
    for (std::size_t k = 0; k < lanes_; ++k) {
        if (pos_[k] < streams_[k].size()) h[k] = streams_[k].offset(pos_[k]);
    }
    Outcome out{two_stage_step(std::span(h.data(), lanes_), l_bits), false};
    for (std::size_t k = 0; k < lanes_; ++k)
        if (out.decision.advance & (1u << k)) ++pos_[k];
    out.done = done();
    return out;
}

PipSchedule pip_schedule(std::span<const OneffsetStream> streams, int l_bits) {
    LaneState lanes(streams);
    PipSchedule s;
    while (!lanes.done()) s.steps.push_back(lanes.step(l_bits).decision);
    return s;
}

std::int64_t apply_schedule(const PipSchedule& schedule, std::span<const OneffsetStream> streams,
                            std::span<const std::int32_t> synapses) {
    if (streams.size() != synapses.size()) throw SimError(ErrorCode::ShapeMismatch, "lane count mismatch");
    std::int64_t acc = 0;
    for (const auto& d : schedule.steps) {
        std::int64_t tree = 0;  // adder tree output before the shared shifter
        for (std::size_t k = 0; k < streams.size(); ++k) {
            if (!(d.advance & (1u << k))) continue;
            const std::int64_t term = static_cast<std::int64_t>(synapses[k]) * (std::int64_t{1} << d.first_stage[k]);
            tree += streams[k].negative() ? -term : term;
        }
        acc += tree * (std::int64_t{1} << d.c);
    }
    return acc;
}

std::array<std::int64_t, kPipLanes> schedule_weights(const PipSchedule& schedule,
                                                     std::span<const OneffsetStream> streams) {
    if (streams.size() > static_cast<std::size_t>(kPipLanes)) throw SimError(ErrorCode::OutOfRange, "more than 16 lanes");
    std::array<std::int64_t, kPipLanes> w{};
    for (const auto& d : schedule.steps) {
        for (std::size_t k = 0; k < streams.size(); ++k) {
            if (d.advance & (1u << k)) w[k] += std::int64_t{1} << (d.c + d.first_stage[k]);
        }
    }
    for (std::size_t k = 0; k < streams.size(); ++k)
        if (streams[k].negative()) w[k] = -w[k];
    return w;
}

PipResult pip_inner(std::span<const OneffsetStream> streams, std::span<const std::int32_t> synapses, int l_bits) {
    const PipSchedule s = pip_schedule(streams, l_bits);
    return {apply_schedule(s, streams, synapses), s.cycles()};
}

int pallet_phase_cycles(const PalletStreams& streams, int l_bits) {
    int worst = 1;
    for (const auto& column : streams) worst = std::max(worst, pip_schedule(column, l_bits).cycles());
    return worst;
}

ColumnSyncResult simulate_column_sync(const ColumnSyncInput& in) {
    const int cols = in.columns;
    const auto sets = static_cast<int>(in.fetch.size());
    if (cols < 1) throw SimError(ErrorCode::OutOfRange, "need at least one column");
    if (in.cost.size() != static_cast<std::size_t>(sets) * static_cast<std::size_t>(cols)) {
        throw SimError(ErrorCode::ShapeMismatch, "cost matrix does not match set and column counts");
    }
    for (int c : in.cost)
        if (c < 1) throw SimError(ErrorCode::OutOfRange, "per-set column cost must be >= 1");
    if (in.ssr_count && *in.ssr_count < 1) throw SimError(ErrorCode::ConfigError, "ssr_count must be >= 1");
    if (in.pallet_buffer && *in.pallet_buffer < 1) throw SimError(ErrorCode::ConfigError, "pallet_buffer must be >= 1");

    ColumnSyncResult r;
    r.start.assign(in.cost.size(), -1);
    r.read_at.assign(static_cast<std::size_t>(sets), -1);
    if (sets == 0) return r;

    const auto idx = [cols](int set, int col) {
        return static_cast<std::size_t>(set) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col);
    };
    const auto su = [](int k) { return static_cast<std::size_t>(k); };

    struct Ssr {
        int set;
        int remaining;  // columns yet to copy the set
    };
    std::vector<Ssr> ssrs;

    std::vector<std::int64_t> fetch_end(su(sets), -1);
    std::vector<std::int64_t> release(su(sets), -1);
    std::vector<int> finished(su(sets), 0);
    fetch_end[0] = 0;
    r.fetch_cycles += in.fetch[0];
    int next_fetch = 1;
    std::int64_t dispatcher_free = 0;

    std::vector<int> next(su(cols), 0);
    std::vector<int> current(su(cols), -1);
    std::vector<std::int64_t> busy_until(su(cols), 0);

    const auto start = [&](int c, std::int64_t t) {
        const int k = next[su(c)];
        current[su(c)] = k;
        r.start[idx(k, c)] = t;
        busy_until[su(c)] = t + in.cost[idx(k, c)];
        ++next[su(c)];
    };
    const auto try_copy = [&](int c, std::int64_t t) {
        const int k = next[su(c)];
        auto it = std::find_if(ssrs.begin(), ssrs.end(), [k](const Ssr& s) { return s.set == k; });
        if (it == ssrs.end()) return false;
        if (--it->remaining == 0) ssrs.erase(it);
        start(c, t);
        return true;
    };

    std::int64_t t = 0;
    // Generous bound: every set could serialise every column plus its fetch.
    std::int64_t budget = 1;
    for (int c : in.cost) budget += c;
    for (int f : in.fetch) budget += f;
    budget = budget * 2 + static_cast<std::int64_t>(sets) * cols + 16;

    while (true) {
        for (int c = 0; c < cols; ++c) {
            const int k = current[su(c)];
            if (k >= 0 && busy_until[su(c)] <= t) {
                if (++finished[su(k)] == cols) release[su(k)] = t;
                current[su(c)] = -1;
            }
        }

        while (next_fetch < sets && dispatcher_free <= t) {
            if (in.pallet_buffer && next_fetch - *in.pallet_buffer >= 0 &&
                release[su(next_fetch - *in.pallet_buffer)] < 0) {
                break;
            }
            fetch_end[su(next_fetch)] = t + in.fetch[su(next_fetch)];
            dispatcher_free = fetch_end[su(next_fetch)];
            r.fetch_cycles += in.fetch[su(next_fetch)];
            ++next_fetch;
        }

        std::vector<int> requesters;
        for (int c = 0; c < cols; ++c) {
            if (current[su(c)] >= 0 || next[su(c)] >= sets) continue;
            const std::int64_t ready = fetch_end[su(next[su(c)])];
            if (ready < 0 || ready > t) continue;
            if (!try_copy(c, t)) requesters.push_back(c);
        }
        bool pending_request = false;
        if (!requesters.empty()) {
            if (!in.ssr_count || static_cast<int>(ssrs.size()) < *in.ssr_count) {
                const int k = next[su(requesters.front())];
                ssrs.push_back({k, cols});
                ++r.sb_reads;
                r.read_at[su(k)] = t;
                for (int c : requesters)
                    if (next[su(c)] == k) try_copy(c, t);
            }
            for (int c : requesters)
                if (current[su(c)] < 0) pending_request = true;
        }

        bool all_done = true;
        bool waiting = false;
        std::int64_t next_t = std::numeric_limits<std::int64_t>::max();
        for (int c = 0; c < cols; ++c) {
            if (current[su(c)] >= 0) {
                all_done = false;
                next_t = std::min(next_t, busy_until[su(c)]);
            } else if (next[su(c)] < sets) {
                all_done = false;
                waiting = true;
            }
        }
        if (all_done) break;
        if (dispatcher_free > t) next_t = std::min(next_t, dispatcher_free);
        if (pending_request && (!in.ssr_count || static_cast<int>(ssrs.size()) < *in.ssr_count)) {
            next_t = std::min(next_t, t + 1);
        }
        if (next_t == std::numeric_limits<std::int64_t>::max() || next_t > budget) {
            throw SimError(ErrorCode::DeadlockDetected, "column schedule stuck at cycle " + std::to_string(t));
        }
        if (waiting) r.stall_cycles += next_t - t;
        t = next_t;
    }
    r.cycles = t;
    return r;
}

namespace {

struct PragTrace {
    Tensor3 output;
    std::vector<int> cost;  // [set * 16 + window] for one filter group
    std::int64_t effectual_terms = 0;
};

PragTrace run_pip_array(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                        const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                        const NeuronFormat& fmt) {
    validate(cfg);
    validate(fmt);
    const OutputDims od = output_dims(spec);
    check_shapes(input, filters, spec);
    check_container(input, fmt);

    Tensor3 neurons = input;
    if (cfg.trim == TrimMode::Profile) {
        if (!profile) throw SimError(ErrorCode::MissingProfile, "trimmed configuration needs a precision window");
        validate(*profile, fmt.width);
        neurons = trim(input, *profile, fmt.is_signed);
    }

    const auto steps = brick_steps(spec);
    const auto syn = detail::synapse_bricks(filters, steps);
    const auto n = static_cast<std::size_t>(spec.n);

    detail::Accumulators acc(od);
    PragTrace tr;
    tr.cost.reserve(static_cast<std::size_t>(pallets_per_layer(spec)) * steps.size() * kPalletWindows);
    std::array<OneffsetStream, kPipLanes> lanes;
    for (int wy = 0; wy < od.oy; ++wy) {
        for (int base = 0; base < od.ox; base += kPalletWindows) {
            for (std::size_t j = 0; j < steps.size(); ++j) {
                const Pallet pal = build_pallet(neurons, spec, base, wy, steps[j].bx, steps[j].by, steps[j].i0);
                for (int w = 0; w < kPalletWindows; ++w) {
                    if (!pal.present[static_cast<std::size_t>(w)]) {
                        tr.cost.push_back(1);
                        continue;
                    }
                    const auto& nb = pal.bricks[static_cast<std::size_t>(w)].values;
                    for (std::size_t k = 0; k < lanes.size(); ++k) lanes[k] = encode(nb[k], fmt);
                    const PipSchedule sched = pip_schedule(lanes, cfg.l_bits);
                    tr.cost.push_back(sched.cycles());
                    const auto weight = schedule_weights(sched, lanes);
                    for (std::size_t f = 0; f < n; ++f) {
                        const auto& sb = syn[j * n + f];
                        std::int64_t sum = 0;
                        for (std::size_t k = 0; k < kPipLanes; ++k) sum += weight[k] * sb[k];
                        acc.at(base + w, wy, static_cast<int>(f)) += sum;
                    }
                }
            }
        }
    }
    tr.output = acc.activate_all(spec);
    tr.effectual_terms =
        sum_over_pairs(neurons, spec, [&](std::int32_t v) { return essential_count(v, fmt.width); });
    return tr;
}

CycleReport base_report(const LayerSpec& spec, const NeuronFormat& fmt, const PragTrace& tr) {
    CycleReport rep;
    rep.total_terms = fmt.width * multiplications(spec);
    rep.effectual_terms = tr.effectual_terms;
    return rep;
}

}  // namespace

EngineResult prag_layer_pallet(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                               const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                               const NeuronFormat& fmt) {
    if (cfg.sync != SyncMode::Pallet) throw SimError(ErrorCode::ConfigError, "expected pallet synchronisation");
    PragTrace tr = run_pip_array(input, filters, spec, profile, cfg, fmt);

    const auto fetch = layer_fetch_sequence(spec);
    std::vector<int> phase(fetch.size(), 1);
    for (std::size_t k = 0; k < phase.size(); ++k) {
        for (int w = 0; w < kPalletWindows; ++w) {
            phase[k] = std::max(phase[k], tr.cost[k * kPalletWindows + static_cast<std::size_t>(w)]);
        }
    }
    const PhaseTiming timing = pallet_sync_timing(phase, fetch, filter_groups(spec));

    EngineResult r{std::move(tr.output), base_report(spec, fmt, tr)};
    r.report.compute_cycles = timing.cycles;
    r.report.nm_fetch_cycles = timing.fetch_cycles;
    r.report.stall_cycles = timing.stall_cycles;
    r.report.sb_reads = synapse_set_reads(spec);
    return r;
}

EngineResult prag_layer_column(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                               const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                               const NeuronFormat& fmt) {
    if (cfg.sync != SyncMode::Column) throw SimError(ErrorCode::ConfigError, "expected column synchronisation");
    PragTrace tr = run_pip_array(input, filters, spec, profile, cfg, fmt);

    const auto fetch = layer_fetch_sequence(spec);
    const auto groups = static_cast<std::size_t>(filter_groups(spec));
    ColumnSyncInput in;
    in.columns = kPalletWindows;
    in.ssr_count = cfg.ssr_count;
    in.pallet_buffer = cfg.pallet_buffer;
    in.fetch.reserve(fetch.size() * groups);
    in.cost.reserve(tr.cost.size() * groups);
    for (std::size_t g = 0; g < groups; ++g) {
        in.fetch.insert(in.fetch.end(), fetch.begin(), fetch.end());
        in.cost.insert(in.cost.end(), tr.cost.begin(), tr.cost.end());
    }
    const ColumnSyncResult sim = simulate_column_sync(in);

    EngineResult r{std::move(tr.output), base_report(spec, fmt, tr)};
    r.report.compute_cycles = sim.cycles;
    r.report.nm_fetch_cycles = sim.fetch_cycles;
    r.report.stall_cycles = sim.stall_cycles;
    r.report.sb_reads = sim.sb_reads;
    return r;
}

EngineResult prag_layer(const Tensor3& input, const FilterSet& filters, const LayerSpec& spec,
                        const std::optional<PrecisionWindow>& profile, const PragConfig& cfg,
                        const NeuronFormat& fmt) {
    return cfg.sync == SyncMode::Pallet ? prag_layer_pallet(input, filters, spec, profile, cfg, fmt)
                                        : prag_layer_column(input, filters, spec, profile, cfg, fmt);
}

}  // namespace pragsim
