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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pragsim/config.hpp"
#include "pragsim/encoding.hpp"
#include "pragsim/error.hpp"
#include "pragsim/experiment.hpp"
#include "pragsim/trace.hpp"

using namespace pragsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pragsim_test_" + std::to_string(::getpid())) / name;
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(PRAGSIM_CLI) + " " + args + " >" + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kSmall = R"({
  "seed": 7,
  "trace": {"kind": "synthetic", "sigma": 900, "relu": true},
  "layers": [
    {"name": "c1", "nx": 18, "ny": 4, "i": 16, "n": 8, "fx": 3, "pad": 0, "precision": {"msb": 11, "lsb": 0}},
    {"name": "c2", "nx": 9, "ny": 9, "i": 20, "n": 5, "fx": 3, "stride": 2, "pad": 1, "precision_bits": 9}
  ],
  "engines": [
    {"type": "dadn"},
    {"type": "stripes"},
    {"type": "pragmatic", "l_bits": [0, 1, 2, 3, 4], "trim": "profile"},
    {"type": "pragmatic", "l_bits": 2, "sync": "column", "ssrs": [1, "inf"]}
  ]
})";

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    if (at != std::string::npos) text.replace(at, from.size(), to);
    return text;
}

std::string error_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
        return e.what();
    }
    ADD_FAILURE() << "config accepted";
    return {};
}

}  // namespace

TEST(Config, GridExpansionOrder) {
    const auto cfg = parse_config(kSmall);
    ASSERT_EQ(cfg.engines.size(), 2u + 5u + 2u);
    EXPECT_EQ(cfg.engines[2].label(), "PRA-0b-pallet-red");
    EXPECT_EQ(cfg.engines[6].label(), "PRA-4b-pallet-red");
    EXPECT_EQ(cfg.engines[7].label(), "PRA-2b-col-1R-fp16");
    EXPECT_EQ(cfg.engines[8].label(), "PRA-2b-col-infR-fp16");
    EXPECT_TRUE(cfg.layers[0].first);
    EXPECT_FALSE(cfg.layers[1].first);
    EXPECT_EQ(cfg.layers[1].precision, (PrecisionWindow{8, 0}));
    EXPECT_EQ(cfg.layers[0].spec.fy, 3);
    EXPECT_EQ(neuron_format(cfg), kUnsigned16);
}

TEST(Config, ErrorsNameTheField) {
    std::string bad = kSmall;
    bad = replaced(bad, "\"stride\": 2", "\"stride\": 0");
    EXPECT_NE(error_of(bad).find("layers[1].stride"), std::string::npos);

    bad = kSmall;
    bad = replaced(bad, "\"nx\": 18", "\"nx\": \"x\"");
    EXPECT_NE(error_of(bad).find("layers[0].nx"), std::string::npos);

    bad = kSmall;
    bad = replaced(bad, "\"l_bits\": 2", "\"l_bits\": 7");
    EXPECT_NE(error_of(bad).find("engines[3].l_bits"), std::string::npos);

    bad = kSmall;
    bad = replaced(bad, "\"pad\": 0", "\"padding\": 0");
    EXPECT_NE(error_of(bad).find("layers[0].padding"), std::string::npos);

    bad = kSmall;
    bad = replaced(bad, ", \"precision_bits\": 9", "");
    EXPECT_NE(error_of(bad).find("layers[1].precision"), std::string::npos);

    EXPECT_NE(error_of("{").find("malformed"), std::string::npos);
    EXPECT_NE(error_of(R"({"trace": {"kind": "synthetic", "sigma": 1}, "layers": [], "engines": []})").find("layers"),
              std::string::npos);
}

TEST(Trace, GeneratorProperties) {
    const LayerSpec spec{100, 100, 16, 1, 1, 1};
    const Tensor3 a = generate_trace(spec, 1000.0, true, 99);
    EXPECT_EQ(a, generate_trace(spec, 1000.0, true, 99));
    EXPECT_NE(a, generate_trace(spec, 1000.0, true, 100));
    EXPECT_NEAR(stats(a.values(), 16).zero_fraction, 0.5, 0.05);
    const Tensor3 tiny = generate_trace(spec, 0.1, false, 3, kSigned16);
    for (auto v : tiny.values()) EXPECT_EQ(v, 0);
    EXPECT_THROW(generate_trace(spec, 0.0, true, 1), SimError);
}

TEST(Trace, FileRoundTrip) {
    std::mt19937_64 rng(51);
    const fs::path dir = scratch("roundtrip");
    const Tensor3 s16 = oracle::random_tensor(rng, 5, 3, 7, -32768, 32767);
    write_trace(dir / "a.prgt", s16, TraceDtype::Int16);
    TraceDtype dt{};
    EXPECT_EQ(read_trace(dir / "a.prgt", &dt), s16);
    EXPECT_EQ(dt, TraceDtype::Int16);
    EXPECT_EQ(fs::file_size(dir / "a.prgt"), kTraceHeaderBytes + 5 * 3 * 7 * 2);

    const Tensor3 u8 = oracle::random_tensor(rng, 4, 4, 16, 0, 255);
    write_trace(dir / "b.prgt", u8, TraceDtype::UInt8);
    EXPECT_EQ(read_trace(dir / "b.prgt", &dt), u8);
    EXPECT_EQ(dt, TraceDtype::UInt8);

    // header bytes are little-endian with the documented layout
    const std::string raw = read_text(dir / "a.prgt");
    EXPECT_EQ(raw.substr(0, 4), "PRGT");
    EXPECT_EQ(raw[4], 1);
    EXPECT_EQ(raw[5], 0);
    EXPECT_EQ(raw[8], 5);
    EXPECT_EQ(raw[12], 3);
    EXPECT_EQ(raw[16], 7);
    const auto v0 = static_cast<std::int16_t>(static_cast<unsigned char>(raw[20]) |
                                              (static_cast<unsigned char>(raw[21]) << 8));
    EXPECT_EQ(v0, s16.at(0, 0, 0));
}

TEST(Trace, FileErrors) {
    const fs::path dir = scratch("errors");
    const auto expect_io = [](const fs::path& p) {
        try {
            (void)read_trace(p);
            ADD_FAILURE() << p;
        } catch (const SimError& e) {
            EXPECT_EQ(e.code(), ErrorCode::TraceIOError);
        }
    };
    expect_io(dir / "missing.prgt");
    write_trace(dir / "ok.prgt", Tensor3(2, 2, 2), TraceDtype::Int16);
    std::string raw = read_text(dir / "ok.prgt");
    write_text(dir / "short.prgt", raw.substr(0, raw.size() - 1));
    expect_io(dir / "short.prgt");
    write_text(dir / "long.prgt", raw + "x");
    expect_io(dir / "long.prgt");
    std::string magic = raw;
    magic[0] = 'X';
    write_text(dir / "magic.prgt", magic);
    expect_io(dir / "magic.prgt");
    std::string version = raw;
    version[4] = 2;
    write_text(dir / "version.prgt", version);
    expect_io(dir / "version.prgt");
    write_text(dir / "header.prgt", raw.substr(0, 10));
    expect_io(dir / "header.prgt");
    EXPECT_THROW(write_trace(dir / "big.prgt", Tensor3(1, 1, 1, {40000}), TraceDtype::Int16), SimError);
}

TEST(Experiment, SimulateCrossChecksAndIsReproducible) {
    const auto cfg = parse_config(kSmall);
    const auto runs = simulate(cfg, 1);
    ASSERT_EQ(runs.size(), 2u);
    for (const auto& r : runs) {
        ASSERT_EQ(r.engines.size(), 9u);
        for (int l = 3; l <= 6; ++l) {
            EXPECT_LE(r.engines[static_cast<std::size_t>(l)].report.compute_cycles,
                      r.engines[static_cast<std::size_t>(l - 1)].report.compute_cycles);
        }
        for (const auto& e : r.engines) EXPECT_EQ(e.report.sb_reads, r.engines[0].report.sb_reads);
    }
    std::ostringstream a, b;
    write_csv(a, report(runs));
    write_csv(b, report(simulate(cfg, 4)));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, FileTraceMatchesSynthetic) {
    const fs::path dir = scratch("filetrace");
    auto cfg = parse_config(kSmall);
    generate_traces(cfg, dir / "traces");
    ASSERT_TRUE(fs::exists(dir / "traces" / "c1.prgt"));
    auto from_file = cfg;
    from_file.trace = FileTrace{dir / "traces"};
    from_file.signed_neurons = false;
    std::ostringstream a, b;
    write_csv(a, report(simulate(cfg)));
    write_csv(b, report(simulate(from_file)));
    EXPECT_EQ(a.str(), b.str());

    from_file.layers[0].spec.nx = 20;
    try {
        (void)simulate(from_file);
        FAIL();
    } catch (const SimError& e) {
        EXPECT_EQ(e.code(), ErrorCode::TraceIOError);
    }
}

TEST(Experiment, EightBitCodes) {
    std::string text = kSmall;
    text = replaced(text, "\"seed\": 7", "\"seed\": 7, \"width\": 8");
    text = replaced(text, "\"msb\": 11", "\"msb\": 6");
    text = replaced(text, "\"precision_bits\": 9", "\"precision_bits\": 5, \"quant\": {\"vmin\": 0, \"vmax\": 2000}");
    const auto cfg = parse_config(text);
    const auto runs = simulate(cfg);
    for (const auto& r : runs) {
        EXPECT_EQ(r.width, 8);
        EXPECT_LE(r.terms.pra_fp16, 8 * (r.terms.dadn / 8));
    }
}

TEST(Cli, ExitCodesAndOutputs) {
    const fs::path dir = scratch("cli");
    write_text(dir / "ok.json", kSmall);
    EXPECT_EQ(run_cli("simulate " + (dir / "ok.json").string() + " --csv " + (dir / "a.csv").string(), dir / "log"), 0);
    EXPECT_EQ(run_cli("simulate " + (dir / "ok.json").string() + " --csv " + (dir / "b.csv").string() + " -j 3",
                      dir / "log"),
              0);
    EXPECT_EQ(read_text(dir / "a.csv"), read_text(dir / "b.csv"));
    EXPECT_EQ(read_text(dir / "a.csv").rfind(kReportCsvHeader, 0), 0u);
    EXPECT_EQ(run_cli("simulate " + (dir / "ok.json").string() + " --seed 8 --csv " + (dir / "c.csv").string(),
                      dir / "log"),
              0);
    EXPECT_NE(read_text(dir / "a.csv"), read_text(dir / "c.csv"));

    EXPECT_EQ(run_cli("analyze " + (dir / "ok.json").string() + " --csv " + (dir / "t.csv").string(), dir / "log"), 0);
    EXPECT_EQ(read_text(dir / "t.csv").rfind(kTermsCsvHeader, 0), 0u);
    EXPECT_EQ(run_cli("validate " + (dir / "ok.json").string(), dir / "log"), 0);
    EXPECT_EQ(run_cli("gen-trace " + (dir / "ok.json").string() + " -o " + (dir / "tr").string(), dir / "log"), 0);
    EXPECT_TRUE(fs::exists(dir / "tr" / "c2.prgt"));

    std::string bad = kSmall;
    bad = replaced(bad, "\"stride\": 2", "\"stride\": -1");
    write_text(dir / "bad.json", bad);
    EXPECT_EQ(run_cli("simulate " + (dir / "bad.json").string(), dir / "log"), 1);
    EXPECT_NE(read_text(dir / "log").find("layers[1].stride"), std::string::npos);
    EXPECT_EQ(run_cli("simulate " + (dir / "nope.json").string(), dir / "log"), 1);
    EXPECT_EQ(run_cli("frobnicate", dir / "log"), 1);

    std::string file = kSmall;
    file = replaced(file, R"({"kind": "synthetic", "sigma": 900, "relu": true})", R"({"kind": "file", "path": "missing_dir"})");
    write_text(dir / "file.json", file);
    EXPECT_EQ(run_cli("simulate " + (dir / "file.json").string(), dir / "log"), 2);
}
