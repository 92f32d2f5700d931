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

#include "pragsim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>

#include "pragsim/error.hpp"

namespace pragsim {

std::string_view to_string(TermTag tag) {
    switch (tag) {
        case TermTag::DaDN: return "DaDN";
        case TermTag::ZN: return "ZN";
        case TermTag::CVN: return "CVN";
        case TermTag::STR: return "STR";
        case TermTag::PRA_fp16: return "PRA-fp16";
        case TermTag::PRA_red: return "PRA-red";
    }
    return "?";
}

std::int64_t TermCounts::get(TermTag tag) const noexcept {
    switch (tag) {
        case TermTag::DaDN: return dadn;
        case TermTag::ZN: return zn;
        case TermTag::CVN: return cvn;
        case TermTag::STR: return str;
        case TermTag::PRA_fp16: return pra_fp16;
        case TermTag::PRA_red: return pra_red;
    }
    return 0;
}

double TermCounts::normalized(TermTag tag) const noexcept {
    return dadn == 0 ? 0.0 : static_cast<double>(get(tag)) / static_cast<double>(dadn);
}

TermCounts& TermCounts::operator+=(const TermCounts& o) noexcept {
    dadn += o.dadn;
    zn += o.zn;
    cvn += o.cvn;
    str += o.str;
    pra_fp16 += o.pra_fp16;
    pra_red += o.pra_red;
    return *this;
}

TermCounts count_terms(const Tensor3& input, const LayerSpec& spec, const std::optional<PrecisionWindow>& profile,
                       const NeuronFormat& fmt, bool first_layer) {
    if (!profile) throw SimError(ErrorCode::MissingProfile, "term counts for STR and PRA-red need a precision window");
    validate(fmt);
    validate(*profile, fmt.width);
    check_container(input, fmt);
    const int w = fmt.width;
    const PrecisionWindow p = *profile;

    TermCounts tc;
    tc.dadn = dadn_terms(spec, w);
    tc.zn = sum_over_pairs(input, spec, [w](std::int32_t v) -> std::int64_t { return v != 0 ? w : 0; });
    tc.cvn = first_layer ? tc.dadn : tc.zn;
    tc.str = static_cast<std::int64_t>(p.width()) * multiplications(spec);
    tc.pra_fp16 = sum_over_pairs(input, spec, [w](std::int32_t v) -> std::int64_t { return essential_count(v, w); });
    tc.pra_red = sum_over_pairs(input, spec, [&](std::int32_t v) -> std::int64_t {
        return essential_count(trim(v, p, fmt.is_signed), w);
    });
    return tc;
}

ReportDocument report(const std::vector<LayerRun>& runs) {
    ReportDocument doc;
    struct Acc {
        AggregateRow row;
        std::int64_t terms = 0;
        std::int64_t dadn_terms = 0;
        double log_speedup = 0.0;
        int layers = 0;
    };
    std::vector<Acc> accs;
    std::map<std::string, std::size_t> index;

    for (const auto& lr : runs) {
        doc.layer_terms.emplace_back(lr.layer, lr.terms);
        for (const auto& er : lr.engines) {
            ReportRow row;
            row.layer = lr.layer;
            row.engine = er.engine;
            row.width = lr.width;
            row.precision = er.precision;
            row.report = er.report;
            row.dadn_cycles = lr.dadn_cycles;
            row.speedup = er.report.compute_cycles == 0
                              ? 0.0
                              : static_cast<double>(lr.dadn_cycles) / static_cast<double>(er.report.compute_cycles);
            row.normalized_terms = lr.terms.normalized(er.terms);
            row.stats = lr.stats;
            doc.rows.push_back(row);

            auto [it, inserted] = index.try_emplace(er.engine, accs.size());
            if (inserted) {
                accs.emplace_back();
                accs.back().row.engine = er.engine;
            }
            Acc& a = accs[it->second];
            a.row.report.compute_cycles += er.report.compute_cycles;
            a.row.report.nm_fetch_cycles += er.report.nm_fetch_cycles;
            a.row.report.stall_cycles += er.report.stall_cycles;
            a.row.report.sb_reads += er.report.sb_reads;
            a.row.report.total_terms += er.report.total_terms;
            a.row.report.effectual_terms += er.report.effectual_terms;
            a.row.dadn_cycles += lr.dadn_cycles;
            a.terms += lr.terms.get(er.terms);
            a.dadn_terms += lr.terms.dadn;
            if (row.speedup > 0.0) a.log_speedup += std::log(row.speedup);
            ++a.layers;
        }
    }
    for (auto& a : accs) {
        AggregateRow r = a.row;
        r.speedup = r.report.compute_cycles == 0
                        ? 0.0
                        : static_cast<double>(r.dadn_cycles) / static_cast<double>(r.report.compute_cycles);
        r.geomean_speedup = a.layers == 0 ? 0.0 : std::exp(a.log_speedup / a.layers);
        r.normalized_terms = a.dadn_terms == 0 ? 0.0 : static_cast<double>(a.terms) / static_cast<double>(a.dadn_terms);
        doc.aggregates.push_back(r);
    }
    return doc;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

std::string fmt_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

void write_counters(std::ostream& os, const CycleReport& r) {
    os << r.compute_cycles << ',' << r.nm_fetch_cycles << ',' << r.stall_cycles << ',' << r.sb_reads << ','
       << r.total_terms << ',' << r.effectual_terms;
}

}  // namespace

void write_csv(std::ostream& os, const ReportDocument& doc) {
    os << kReportCsvHeader << '\n';
    for (const auto& r : doc.rows) {
        os << r.layer << ',' << r.engine << ',' << r.width << ',' << fmt_opt(r.precision) << ',';
        write_counters(os, r.report);
        os << ',' << r.dadn_cycles << ',' << fmt_double(r.speedup) << ',' << fmt_double(r.normalized_terms) << ',';
        if (r.stats) {
            os << fmt_double(r.stats->mean_essential_frac_all) << ',' << fmt_opt(r.stats->mean_essential_frac_nonzero)
               << ',' << fmt_double(r.stats->zero_fraction);
        } else {
            os << ",,";
        }
        os << '\n';
    }
    for (const auto& a : doc.aggregates) {
        os << "ALL," << a.engine << ",,,";
        write_counters(os, a.report);
        os << ',' << a.dadn_cycles << ',' << fmt_double(a.speedup) << ',' << fmt_double(a.normalized_terms)
           << ",,,\n";
    }
    for (const auto& a : doc.aggregates) {
        os << "GEOMEAN," << a.engine << ",,,,,,,,,," << fmt_double(a.geomean_speedup) << ",,,,\n";
    }
}

void write_table(std::ostream& os, const ReportDocument& doc) {
    const auto header = [&](const char* last) {
        os << std::left << std::setw(12) << "layer" << std::setw(24) << "engine" << std::right << std::setw(12)
           << "cycles" << std::setw(10) << "stalls" << std::setw(10) << "sb_reads" << std::setw(10) << "speedup"
           << std::setw(10) << "terms" << std::setw(10) << last << '\n';
    };
    const auto line = [&](const std::string& layer, const std::string& engine, const CycleReport& r, double speedup,
                          double terms) {
        os << std::left << std::setw(12) << layer << std::setw(24) << engine << std::right << std::setw(12)
           << r.compute_cycles << std::setw(10) << r.stall_cycles << std::setw(10) << r.sb_reads << std::setw(10)
           << std::fixed << std::setprecision(3) << speedup << std::setw(10) << terms;
    };
    header("");
    for (const auto& r : doc.rows) {
        line(r.layer, r.engine, r.report, r.speedup, r.normalized_terms);
        os << '\n';
    }
    if (!doc.aggregates.empty()) {
        os << '\n';
        header("geomean");
        for (const auto& a : doc.aggregates) {
            line("ALL", a.engine, a.report, a.speedup, a.normalized_terms);
            os << std::setw(10) << a.geomean_speedup << '\n';
        }
    }
    os.unsetf(std::ios::floatfield);
}

void write_terms_csv(std::ostream& os, const std::vector<LayerRun>& runs) {
    os << kTermsCsvHeader << '\n';
    const auto row = [&](const std::string& name, const TermCounts& t, const std::optional<BitStats>& st) {
        os << name << ',' << t.dadn << ',' << t.zn << ',' << t.cvn << ',' << t.str << ',' << t.pra_fp16 << ','
           << t.pra_red << ',' << fmt_double(t.normalized(TermTag::ZN)) << ','
           << fmt_double(t.normalized(TermTag::CVN)) << ',' << fmt_double(t.normalized(TermTag::STR)) << ','
           << fmt_double(t.normalized(TermTag::PRA_fp16)) << ',' << fmt_double(t.normalized(TermTag::PRA_red))
           << ',';
        if (st) {
            os << fmt_double(st->mean_essential_frac_all) << ',' << fmt_opt(st->mean_essential_frac_nonzero) << ','
               << fmt_double(st->zero_fraction);
        } else {
            os << ",,";
        }
        os << '\n';
    };
    TermCounts total;
    for (const auto& r : runs) {
        row(r.layer, r.terms, r.stats);
        total += r.terms;
    }
    if (!runs.empty()) row("ALL", total, std::nullopt);
}

void write_terms_table(std::ostream& os, const std::vector<LayerRun>& runs) {
    os << std::left << std::setw(12) << "layer" << std::right;
    for (auto tag : {TermTag::ZN, TermTag::CVN, TermTag::STR, TermTag::PRA_fp16, TermTag::PRA_red}) {
        os << std::setw(10) << to_string(tag);
    }
    os << std::setw(10) << "ess_all" << '\n';
    for (const auto& r : runs) {
        os << std::left << std::setw(12) << r.layer << std::right << std::fixed << std::setprecision(3);
        for (auto tag : {TermTag::ZN, TermTag::CVN, TermTag::STR, TermTag::PRA_fp16, TermTag::PRA_red}) {
            os << std::setw(10) << r.terms.normalized(tag);
        }
        os << std::setw(10) << (r.stats ? r.stats->mean_essential_frac_all : 0.0) << '\n';
    }
    os.unsetf(std::ios::floatfield);
}

}  // namespace pragsim
