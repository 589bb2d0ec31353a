#include "fogsim/config.hpp"
#include "fogsim/regression.hpp"
#include "fogsim/sim.hpp"
#include "fogsim/sweep.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace fogsim;

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_config = 1;
    constexpr int exit_run = 2;

    ScenarioConfig load_scenario(const std::string &path)
    {
        ScenarioConfig cfg = load_config(path);
        if (const char *dir = std::getenv("FOGSIM_TRACE_DIR"); dir != nullptr && *dir != '\0')
            cfg.trace_dir = dir;
        for (const auto &w : config_warnings(cfg))
            std::cerr << "warning: " << w << '\n';
        return cfg;
    }

    void write_file(const fs::path &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw RunError("cannot write " + path.string());
        out << text;
        if (!out)
            throw RunError("write failed: " + path.string());
    }

    void ensure_dir(const fs::path &dir)
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw RunError("cannot create " + dir.string() + ": " + ec.message());
    }

    int cmd_run(const std::string &config_path, const std::string &policy_name, std::uint64_t seed,
                const std::string &out_dir)
    {
        ScenarioConfig cfg;
        Policy policy;
        try
        {
            cfg = load_scenario(config_path);
            policy = policy_name.empty() ? cfg.policies.front() : parse_policy(policy_name);
        }
        catch (const Error &e)
        {
            std::cerr << "config error: " << e.what() << '\n';
            return exit_config;
        }

        try
        {
            const SimResult result = run(cfg, policy, seed);
            std::string report(report_csv_header);
            report += '\n';
            report += report_csv_row(to_string(policy), seed, cfg.n_devices, cfg.n_apps, result.report);
            report += '\n';

            if (out_dir.empty())
            {
                std::cout << report;
                return exit_ok;
            }
            const fs::path out(out_dir);
            ensure_dir(out);
            write_file(out / "report.csv", report);
            write_file(out / "decisions.csv", decision_log_csv(result));
            write_file(out / "telemetry.csv", telemetry_log_csv(result));
            std::vector<RegressionModel> models;
            for (const auto &m : result.model_snapshots)
            {
                models.push_back(m.exec_time);
                models.push_back(m.energy);
            }
            write_file(out / "models.csv", models_to_csv(models));
            std::cout << report;
        }
        catch (const std::exception &e)
        {
            std::cerr << "run error: " << e.what() << '\n';
            return exit_run;
        }
        return exit_ok;
    }

    int cmd_sweep(const std::string &preset_name, const std::string &config_path, const std::string &out_dir)
    {
        ScenarioConfig cfg;
        SweepPreset preset;
        try
        {
            preset = parse_preset(preset_name);
            cfg = load_scenario(config_path);
        }
        catch (const Error &e)
        {
            std::cerr << "config error: " << e.what() << '\n';
            return exit_config;
        }

        try
        {
            const auto rows = run_sweep(preset, cfg);
            const fs::path out(out_dir);
            ensure_dir(out);
            write_file(out / ("sweep_" + preset_name + ".csv"), sweep_csv(rows));
        }
        catch (const std::exception &e)
        {
            std::cerr << "run error: " << e.what() << '\n';
            return exit_run;
        }
        return exit_ok;
    }

    int cmd_summarize(const std::string &in_path)
    {
        std::ifstream in(in_path, std::ios::binary);
        if (!in)
        {
            std::cerr << "config error: cannot read " << in_path << '\n';
            return exit_config;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try
        {
            std::cout << format_summary(summarize(buf.str()));
        }
        catch (const std::exception &e)
        {
            std::cerr << "run error: " << e.what() << '\n';
            return exit_run;
        }
        return exit_ok;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Fog device task allocation simulator"};
    app.require_subcommand(1);

    std::string config_path, policy_name, out_dir, preset_name, in_path;
    std::uint64_t seed = 1;

    auto *run_cmd = app.add_subcommand("run", "Run one scenario with one policy");
    run_cmd->add_option("--config", config_path, "Scenario file")->required();
    run_cmd->add_option("--policy", policy_name, "DeadlineAware, EnergyAware, Hybrid or BaselinePowerMin");
    run_cmd->add_option("--seed", seed, "Random seed");
    run_cmd->add_option("--out", out_dir, "Directory for report and logs");

    auto *sweep_cmd = app.add_subcommand("sweep", "Run a sweep preset over all policies and seeds");
    sweep_cmd->add_option("--preset", preset_name, "app or device")->required();
    sweep_cmd->add_option("--config", config_path, "Scenario file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto *sum_cmd = app.add_subcommand("summarize", "Average a sweep CSV over seeds");
    sum_cmd->add_option("--in", in_path, "Sweep CSV")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    if (*run_cmd)
        return cmd_run(config_path, policy_name, seed, out_dir);
    if (*sweep_cmd)
        return cmd_sweep(preset_name, config_path, out_dir);
    return cmd_summarize(in_path);
}
