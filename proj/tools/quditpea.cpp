// Copyright 2026 The quditpea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// quditpea <mode> --config <file> [--seed N] [--output <dir>] [--format csv|json]
// quditpea fit --input <csv> [--true-phase <val>] [--config <file>] ...

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "quditpea/cli.hpp"
#include "quditpea/kernels.hpp"

namespace {

using namespace quditpea::cli;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::string> input;
    std::optional<std::string> true_phase;
};

int run(Mode mode, const Options& opt) {
    RunConfig cfg;
    if (!opt.config.empty()) {
        cfg = parse_config(opt.config, mode);
    } else {
        cfg.mode = mode;
    }
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.format) cfg.format = *opt.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (opt.input) cfg.input_path = *opt.input;
    if (opt.true_phase) cfg.true_phases = parse_phase_list(*opt.true_phase);

    const RunResult result = execute(cfg);
    const auto dir = resolve_output_dir(cfg, opt.output);
    write_artifacts(dir, result.artifacts);

    std::cout << result.summary;
    for (const auto& a : result.artifacts) std::cout << "wrote " << (dir / a.filename).string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-control-qudit phase estimation: ideal circuit, photonic device model, "
                 "count fitting and iterative PEA"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "quditpea 1.0.0");
    bool show_isa = false;
    app.add_flag("--kernel-info", show_isa, "Print the selected SIMD kernel set");

    Options opt;
    std::optional<Mode> chosen;
    for (Mode mode : {Mode::Ideal, Mode::Photonic, Mode::Fit, Mode::Iterate, Mode::Curves}) {
        const std::string name(mode_name(mode));
        CLI::App* sub = nullptr;
        switch (mode) {
            case Mode::Ideal:
                sub = app.add_subcommand(name, "Exact circuit: control distribution per eigenstate");
                break;
            case Mode::Photonic:
                sub = app.add_subcommand(name, "Device model: simulated photon count table");
                break;
            case Mode::Fit:
                sub = app.add_subcommand(name, "Least-squares phase fit of count/normalized rows");
                break;
            case Mode::Iterate:
                sub = app.add_subcommand(name, "Iterative PEA, one digit per round");
                break;
            case Mode::Curves:
                sub = app.add_subcommand(name, "Sampled collapse-probability curves");
                break;
        }
        auto* config = sub->add_option("--config", opt.config, "JSON run configuration")->check(CLI::ExistingFile);
        if (mode != Mode::Fit) config->required();
        sub->add_option("--seed", opt.seed, "Master RNG seed (overrides config)");
        sub->add_option("--output", opt.output, "Output directory");
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        if (mode == Mode::Fit) {
            sub->add_option("--input", opt.input, "CSV of counts or normalized rows")->check(CLI::ExistingFile);
            sub->add_option("--true-phase", opt.true_phase,
                            "True phase(s), e.g. \"0, 0.351 pi, 1.045 pi\"");
        }
        sub->callback([&chosen, mode] { chosen = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (show_isa) {
        std::cerr << "kernels: " << quditpea::kernels::isa_name(quditpea::kernels::active_isa()) << "\n";
    }

    try {
        return run(*chosen, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CsvError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
