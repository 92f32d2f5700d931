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
#include <ostream>
#include <string>
#include <vector>

#include "pragsim/encoding.hpp"
#include "pragsim/reference.hpp"

namespace pragsim {

enum class TermTag { DaDN, ZN, CVN, STR, PRA_fp16, PRA_red };

std::string_view to_string(TermTag tag);

/// Terms (one-bit partial products) each design spends on a layer.
struct TermCounts {
    std::int64_t dadn = 0;
    std::int64_t zn = 0;        // skips zero neurons
    std::int64_t cvn = 0;       // skips zero neurons except in the first layer
    std::int64_t str = 0;       // precision bits per multiplication
    std::int64_t pra_fp16 = 0;  // essential bits of the raw neuron
    std::int64_t pra_red = 0;   // essential bits after trimming

    [[nodiscard]] std::int64_t get(TermTag tag) const noexcept;
    [[nodiscard]] double normalized(TermTag tag) const noexcept;

    TermCounts& operator+=(const TermCounts& o) noexcept;
};

// Per-multiplication costs summed over every window position (padding
// included) and every filter. Throws MissingProfile without a window.
TermCounts count_terms(const Tensor3& input, const LayerSpec& spec, const std::optional<PrecisionWindow>& profile,
                       const NeuronFormat& fmt, bool first_layer);

struct EngineRun {
    std::string engine;  // display label
    TermTag terms = TermTag::DaDN;
    std::optional<int> precision;
    CycleReport report;
};

struct LayerRun {
    std::string layer;
    int width = 16;
    std::int64_t dadn_cycles = 0;
    TermCounts terms;
    std::optional<BitStats> stats;
    std::vector<EngineRun> engines;
};

struct ReportRow {
    std::string layer;
    std::string engine;
    int width = 16;
    std::optional<int> precision;
    CycleReport report;
    std::int64_t dadn_cycles = 0;
    double speedup = 0.0;
    double normalized_terms = 0.0;
    std::optional<BitStats> stats;
};

struct AggregateRow {
    std::string engine;
    CycleReport report;          // counters summed over layers
    std::int64_t dadn_cycles = 0;
    double speedup = 0.0;        // total DaDN cycles / total engine cycles
    double geomean_speedup = 0.0;
    double normalized_terms = 0.0;
};

struct ReportDocument {
    std::vector<ReportRow> rows;
    std::vector<AggregateRow> aggregates;  // one per engine label, first-seen order
    std::vector<std::pair<std::string, TermCounts>> layer_terms;
};

ReportDocument report(const std::vector<LayerRun>& runs);

// Fixed column order; aggregates follow the per-layer rows as layer "ALL"
// (time-weighted) and "GEOMEAN" (per-layer geometric mean, speedup only).
void write_csv(std::ostream& os, const ReportDocument& doc);
void write_table(std::ostream& os, const ReportDocument& doc);

// Term-count CSV produced by the analysis-only command.
void write_terms_csv(std::ostream& os, const std::vector<LayerRun>& runs);
void write_terms_table(std::ostream& os, const std::vector<LayerRun>& runs);

inline constexpr const char* kReportCsvHeader =
    "layer,engine,width,precision,compute_cycles,nm_fetch_cycles,stall_cycles,sb_reads,total_terms,"
    "effectual_terms,dadn_cycles,speedup,normalized_terms,ess_frac_all,ess_frac_nz,zero_frac";

inline constexpr const char* kTermsCsvHeader =
    "layer,dadn,zn,cvn,str,pra_fp16,pra_red,norm_zn,norm_cvn,norm_str,norm_pra_fp16,norm_pra_red,"
    "ess_frac_all,ess_frac_nz,zero_frac";

}  // namespace pragsim
