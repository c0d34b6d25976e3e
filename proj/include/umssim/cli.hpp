#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "umssim/config.hpp"
#include "umssim/engine.hpp"
#include "umssim/report.hpp"

namespace umssim {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Entry point of the `umssim` tool.
///
///   run --config <path> --out <dir> [--seed <u64>]
///   validate --config <path>
///   summarize --dir <dir>
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"UAV marketplace team-formation simulator", "umssim"};
    app.require_subcommand(1);

    std::string config_path, out_dir, csv_dir;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run all configured cycles and write CSV/log outputs");
    run->add_option("--config", config_path, "Configuration JSON")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override simulation.master_seed");

    auto* validate = app.add_subcommand("validate", "Check a configuration and list every problem");
    validate->add_option("--config", config_path, "Configuration JSON")->required();

    auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate exported strategy CSVs");
    summarize_cmd->add_option("--dir", csv_dir, "Directory holding <strategy>.csv files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitRuntime;
    }

    try {
        if (*validate) {
            load_config(config_path);
            out << "OK\n";
            return kExitOk;
        }
        if (*run) {
            ConfigFile cfg = load_config(config_path);
            if (seed) cfg.simulation.master_seed = *seed;
            const auto results = run_cycles(cfg.simulation, cfg.marketplace(), cfg.mission());
            write_run_outputs(results, cfg.simulation.strategies, out_dir);
            out << "wrote " << results.size() << " episodes to " << out_dir << "\n";
            return kExitOk;
        }
        if (*summarize_cmd) {
            const auto rows = summarize(csv_dir);
            write_summary(rows, csv_dir);
            out << summary_table(rows);
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        const bool invalid = e.kind() != ConfigErrorKind::MissingFile && e.kind() != ConfigErrorKind::Syntax;
        return invalid ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}

}  // namespace umssim
