#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgwc/runner.hpp"
#include "fgwc/scenario.hpp"

#ifndef FGWC_SCENARIO_DIR
#define FGWC_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::optional<std::size_t> grid_n;
    std::optional<double> inset;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::string out_dir;
    std::string format = "report";
    std::string scenario_dir = FGWC_SCENARIO_DIR;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--grid-n", f.grid_n, "Grid points per interval (overrides every grid)")->check(CLI::PositiveNumber);
    cmd->add_option("--inset", f.inset, "Absolute inset for open interval ends")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", f.tol, "Check tolerance (overrides every check)")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap (overrides every iteration)")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out_dir, "Directory for report and trace files");
    cmd->add_option("--format", f.format, "Output: the JSON report or the trace CSVs")
        ->check(CLI::IsMember({"report", "csv"}));
}

fs::path builtin_path(const Flags& f, const std::string& name) { return fs::path(f.scenario_dir) / (name + ".json"); }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

/// Runs the scenarios in order and returns the worst exit status.
int run_all(const std::vector<std::string>& paths, const Flags& f, fgwc::RunOptions opts) {
    opts.grid_n = f.grid_n;
    opts.inset = f.inset;
    opts.tol = f.tol;
    opts.max_iter = f.max_iter;
    if (!f.out_dir.empty()) fs::create_directories(f.out_dir);

    int status = 0;
    for (const auto& path : paths) {
        fgwc::Scenario s;
        try {
            s = fgwc::load_scenario(path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            status = std::max(status, 2);
            continue;
        }
        const auto result = fgwc::run_scenario(s, opts);
        if (f.out_dir.empty()) {
            if (f.format == "report") {
                std::cout << fgwc::report_text(result);
            } else {
                for (const auto& t : result.traces) std::cout << "# " << t.filename << '\n' << t.csv;
            }
        } else {
            if (f.format == "report") write_file(fs::path(f.out_dir) / (s.name + ".report.json"), fgwc::report_text(result));
            for (const auto& t : result.traces) write_file(fs::path(f.out_dir) / t.filename, t.csv);
        }
        const auto& diag = result.report["diagnostics"];
        std::cerr << s.name << ": " << (result.exit_status == 0 ? "ok" : "FAILED");
        if (!diag["first_unmet"].is_null()) std::cerr << " (first unmet: " << diag["first_unmet"].get<std::string>() << ")";
        for (const auto& e : diag["errors"]) std::cerr << " (error: " << e.get<std::string>() << ")";
        std::cerr << '\n';
        status = std::max(status, result.exit_status);
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid verification of weakly contractive maps, implicit iterations and invariant approximation"};
    app.require_subcommand(1);
    Flags flags;
    std::vector<std::string> files;
    std::string example_name;
    bool example_all = false;

    auto* run = app.add_subcommand("run", "Run scenario files");
    run->add_option("files", files, "Scenario files")->required()->check(CLI::ExistingFile);
    add_run_flags(run, flags);

    auto* check = app.add_subcommand("check", "Run only the checks of a scenario file");
    check->add_option("file", files, "Scenario file")->required()->expected(1)->check(CLI::ExistingFile);
    add_run_flags(check, flags);

    auto* iterate = app.add_subcommand("iterate", "Run only the iterations of a scenario file");
    iterate->add_option("file", files, "Scenario file")->required()->expected(1)->check(CLI::ExistingFile);
    add_run_flags(iterate, flags);

    auto* approx = app.add_subcommand("approx", "Run only the approximation battery of a scenario file");
    approx->add_option("file", files, "Scenario file")->required()->expected(1)->check(CLI::ExistingFile);
    add_run_flags(approx, flags);

    auto* example = app.add_subcommand("example", "Run a built-in scenario");
    auto* name_opt = example->add_option("name", example_name, "Built-in scenario name");
    auto* all_opt = example->add_flag("--all", example_all, "Run every built-in scenario");
    name_opt->excludes(all_opt);
    example->add_option("--scenarios", flags.scenario_dir, "Directory of built-in scenarios");
    add_run_flags(example, flags);

    auto* list = app.add_subcommand("list", "List built-in scenarios");
    list->add_option("--scenarios", flags.scenario_dir, "Directory of built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& name : fgwc::list_builtins(flags.scenario_dir)) std::cout << name << '\n';
            return 0;
        }
        fgwc::RunOptions opts;
        if (*check) opts = {{}, {}, {}, {}, true, false, false};
        if (*iterate) opts = {{}, {}, {}, {}, false, true, false};
        if (*approx) opts = {{}, {}, {}, {}, false, false, true};
        if (*example) {
            if (example_all) {
                for (const auto& name : fgwc::list_builtins(flags.scenario_dir)) {
                    files.push_back(builtin_path(flags, name).string());
                }
                if (files.empty()) {
                    std::cerr << "error: no built-in scenarios in '" << flags.scenario_dir << "'\n";
                    return 2;
                }
            } else if (!example_name.empty()) {
                const auto path = builtin_path(flags, example_name);
                if (!fs::exists(path)) {
                    std::cerr << "error: unknown built-in scenario '" << example_name << "'\n";
                    return 2;
                }
                files.push_back(path.string());
            } else {
                std::cerr << "error: give a scenario name or --all\n";
                return 2;
            }
        }
        return run_all(files, flags, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
