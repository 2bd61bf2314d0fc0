#include "predsync/predsync.h"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
    std::string scenario;
    std::string out;
    std::string metrics;
    std::string mode;
    std::optional<int> horizon;
    std::string format = "csv";
    std::vector<std::string> batch;
};

struct ScenarioDeleter {
    void operator()(psync_scenario* p) const { psync_scenario_free(p); }
};
struct ResultDeleter {
    void operator()(psync_sim_result* p) const { psync_sim_result_free(p); }
};
struct SirDeleter {
    void operator()(psync_sir_params* p) const { psync_sir_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { psync_string_free(p); }
};

using ScenarioPtr = std::unique_ptr<psync_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<psync_sim_result, ResultDeleter>;
using SirPtr = std::unique_ptr<psync_sir_params, SirDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

// Thrown with the process exit code already decided.
struct Failure {
    int code;
};

void check(psync_status st, const std::string& what) {
    if (st == PSYNC_OK) return;
    spdlog::error("{}: {} ({})", what, psync_last_error(), psync_status_name(st));
    throw Failure{psync_status_is_validation(st) ? kExitValidation : kExitRuntime};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text << '\n')) {
        spdlog::error("cannot write {}", path);
        throw Failure{kExitRuntime};
    }
    spdlog::info("wrote {}", path);
}

ScenarioPtr load(const std::string& path, const Options& opt) {
    psync_scenario* raw = nullptr;
    check(psync_scenario_load(path.c_str(), &raw), path);
    ScenarioPtr sc(raw);
    if (!opt.mode.empty()) check(psync_scenario_set_mode(sc.get(), opt.mode.c_str()), "--mode");
    if (opt.horizon) check(psync_scenario_set_horizon(sc.get(), *opt.horizon), "--horizon");
    return sc;
}

int cmd_check(const Options& opt) {
    ScenarioPtr sc = load(opt.scenario, opt);
    char* report = nullptr;
    int ok = 0;
    check(psync_scenario_check(sc.get(), &report, &ok), opt.scenario);
    CString guard(report);
    emit(report, opt.out);
    if (!ok) spdlog::error("{}: checks failed", opt.scenario);
    return ok ? kExitOk : kExitValidation;
}

std::string run_one(const std::string& path, const Options& opt, const std::string& trace_path) {
    ScenarioPtr sc = load(path, opt);
    psync_sim_result* raw = nullptr;
    check(psync_simulate(sc.get(), &raw), path);
    ResultPtr res(raw);
    spdlog::debug("{}: {} steps, {} agents", path, psync_sim_steps(res.get()), psync_sim_agent_count(res.get()));
    if (!trace_path.empty()) {
        check(psync_sim_write_trace(res.get(), trace_path.c_str(), opt.format.c_str()), trace_path);
        spdlog::info("wrote {}", trace_path);
    }
    char* metrics = nullptr;
    check(psync_sim_metrics_json(res.get(), &metrics), path);
    CString guard(metrics);
    return metrics;
}

int cmd_run(const Options& opt) {
    if (opt.batch.empty()) {
        if (opt.scenario.empty()) {
            spdlog::error("run needs --scenario or --batch");
            return kExitValidation;
        }
        emit(run_one(opt.scenario, opt, opt.out), opt.metrics);
        return kExitOk;
    }

    // Batch: one independent run per file; --out names a directory.
    const std::filesystem::path dir = opt.out.empty() ? "." : opt.out;
    std::filesystem::create_directories(dir);
    std::vector<std::future<int>> jobs;
    std::map<std::string, int> seen;
    for (const auto& path : opt.batch) {
        std::string stem = std::filesystem::path(path).stem().string();
        if (const int n = seen[stem]++; n > 0) stem += "_" + std::to_string(n);
        jobs.push_back(std::async(std::launch::async, [&, path, stem] {
            try {
                const std::string trace = (dir / (stem + "." + opt.format)).string();
                const std::string metrics = run_one(path, opt, trace);
                emit(metrics, (dir / (stem + ".metrics.json")).string());
                return kExitOk;
            } catch (const Failure& f) {
                return f.code;
            }
        }));
    }
    int worst = kExitOk;
    for (auto& j : jobs) worst = std::max(worst, j.get());
    return worst;
}

int cmd_sir(const Options& opt, const std::string& mode) {
    psync_sir_params* raw = nullptr;
    check(psync_sir_load(opt.scenario.c_str(), &raw), opt.scenario);
    SirPtr params(raw);
    char* report = nullptr;
    check(psync_sir_run(params.get(), mode.c_str(), opt.out.empty() ? nullptr : opt.out.c_str(), &report),
          opt.scenario);
    CString guard(report);
    if (!opt.out.empty()) spdlog::info("wrote {}", opt.out);
    emit(report, opt.metrics);
    return kExitOk;
}

int cmd_koopman_fit(const Options& opt) {
    psync_sir_params* raw = nullptr;
    check(psync_sir_load(opt.scenario.c_str(), &raw), opt.scenario);
    SirPtr params(raw);
    char* model = nullptr;
    check(psync_koopman_fit(params.get(), &model), opt.scenario);
    CString guard(model);
    emit(model, opt.out);
    return kExitOk;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("predsync");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("MAS_SIM_LOG");
    const std::string level = env == nullptr ? "info" : env;
    if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else {
        spdlog::set_level(spdlog::level::info);
        if (level != "info") spdlog::warn("MAS_SIM_LOG={} not recognised, using info", level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Delay-compensated output synchronization and delayed SIR experiments"};
    app.require_subcommand(1);
    Options opt;
    std::string sir_mode = "compare";

    auto* check_cmd = app.add_subcommand("check", "Validate a scenario and report graph and gain diagnostics");
    check_cmd->add_option("--scenario", opt.scenario, "Scenario file (.toml or .json)")->required();
    check_cmd->add_option("--out", opt.out, "Write the report here instead of stdout");
    check_cmd->add_option("--mode", opt.mode, "Override the scenario mode")
        ->check(CLI::IsMember({"state_feedback", "output_feedback", "no_compensation"}));

    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario, write the trace and print metrics");
    run_cmd->add_option("--scenario", opt.scenario, "Scenario file (.toml or .json)");
    run_cmd->add_option("--out", opt.out, "Trace file (directory with --batch)");
    run_cmd->add_option("--metrics", opt.metrics, "Write metrics JSON here instead of stdout");
    run_cmd->add_option("--mode", opt.mode, "Override the scenario mode")
        ->check(CLI::IsMember({"state_feedback", "output_feedback", "no_compensation"}));
    run_cmd->add_option("--horizon", opt.horizon, "Override the number of steps K")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--format", opt.format, "Trace format")->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--batch", opt.batch, "Run several scenario files in parallel")->expected(1, -1);
    run_cmd->get_option("--batch")->excludes("--scenario");

    auto* sir_cmd = app.add_subcommand("sir", "Fit the Koopman models and run the delayed SIR scenario");
    sir_cmd->add_option("--scenario", opt.scenario, "SIR parameter file")->required();
    sir_cmd->add_option("--mode", sir_mode, "baseline, compensated or compare")
        ->check(CLI::IsMember({"baseline", "compensated", "compare"}));
    sir_cmd->add_option("--out", opt.out, "Trace CSV");
    sir_cmd->add_option("--metrics", opt.metrics, "Write the peak report here instead of stdout");

    auto* fit_cmd = app.add_subcommand("koopman-fit", "Fit the Koopman models and print them as JSON");
    fit_cmd->add_option("--scenario", opt.scenario, "SIR parameter file")->required();
    fit_cmd->add_option("--out", opt.out, "Write the model here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*check_cmd) return cmd_check(opt);
        if (*run_cmd) return cmd_run(opt);
        if (*sir_cmd) return cmd_sir(opt, sir_mode);
        if (*fit_cmd) return cmd_koopman_fit(opt);
    } catch (const Failure& f) {
        return f.code;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
