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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pragsim/analysis.hpp"
#include "pragsim/config.hpp"
#include "pragsim/error.hpp"
#include "pragsim/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitOracle = 3;

int exit_code(pragsim::ErrorCode code) {
    switch (code) {
        case pragsim::ErrorCode::TraceIOError: return kExitIo;
        case pragsim::ErrorCode::OracleMismatch: return kExitOracle;
        default: return kExitConfig;
    }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw pragsim::SimError(pragsim::ErrorCode::TraceIOError, path.string() + ": cannot open for writing");
    body(out);
    out.flush();
    if (!out) throw pragsim::SimError(pragsim::ErrorCode::TraceIOError, path.string() + ": write failed");
}

pragsim::ExperimentConfig load(const std::string& path, const std::optional<std::uint64_t>& seed) {
    auto cfg = pragsim::load_config(path);
    if (seed) cfg.seed = *seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cycle-level simulator for bit-parallel, bit-serial and essential-bit convolution engines"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> csv_path;
    std::string out_dir;
    int jobs = 1;

    auto* sim = app.add_subcommand("simulate", "Run every configured engine and report cycles and terms");
    sim->add_option("config", config_path, "Experiment config (JSON)")->required();
    sim->add_option("--seed", seed, "Override the config seed");
    sim->add_option("--csv", csv_path, "Write the report CSV here (overrides output.csv)");
    sim->add_option("-j,--jobs", jobs, "Layers simulated concurrently")->check(CLI::PositiveNumber);

    auto* ana = app.add_subcommand("analyze", "Term counts and bit statistics only");
    ana->add_option("config", config_path, "Experiment config (JSON)")->required();
    ana->add_option("--seed", seed, "Override the config seed");
    ana->add_option("--csv", csv_path, "Write the terms CSV here (overrides output.terms_csv)");

    auto* gen = app.add_subcommand("gen-trace", "Write the layer input traces as .prgt files");
    gen->add_option("config", config_path, "Experiment config (JSON)")->required();
    gen->add_option("-o,--output", out_dir, "Output directory")->required();
    gen->add_option("--seed", seed, "Override the config seed");

    auto* val = app.add_subcommand("validate", "Parse the config and check every layer input");
    val->add_option("config", config_path, "Experiment config (JSON)")->required();
    val->add_option("--seed", seed, "Override the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto cfg = load(config_path, seed);
        if (*sim) {
            const auto runs = pragsim::simulate(cfg, jobs);
            const auto doc = pragsim::report(runs);
            const auto path = csv_path ? std::optional<std::filesystem::path>(*csv_path) : cfg.csv_path;
            if (path) write_file(*path, [&](std::ostream& os) { pragsim::write_csv(os, doc); });
            pragsim::write_table(std::cout, doc);
        } else if (*ana) {
            const auto runs = pragsim::analyze(cfg);
            const auto path = csv_path ? std::optional<std::filesystem::path>(*csv_path) : cfg.terms_csv_path;
            if (path) write_file(*path, [&](std::ostream& os) { pragsim::write_terms_csv(os, runs); });
            pragsim::write_terms_table(std::cout, runs);
        } else if (*gen) {
            pragsim::generate_traces(cfg, out_dir);
            std::cout << "wrote " << cfg.layers.size() << " trace(s) to " << out_dir << "\n";
        } else if (*val) {
            pragsim::dry_run(cfg);
            std::cout << config_path << ": ok (" << cfg.layers.size() << " layer(s), " << cfg.engines.size()
                      << " engine variant(s))\n";
        }
    } catch (const pragsim::SimError& e) {
        std::cerr << "pragsim: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "pragsim: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
