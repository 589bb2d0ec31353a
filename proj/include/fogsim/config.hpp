#pragma once

// Scenario configuration: flat `key = value` files with `#` comments.

#include "fogsim/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    struct ScenarioConfig
    {
        // Fleet
        std::size_t n_devices = 50;
        std::size_t n_servers = 0;
        double device_mips_min = 2000.0;
        double device_mips_max = 6000.0;
        double device_bandwidth_bps = 100000.0;
        double device_ram_mb = 2048.0;
        double server_mips = 10000.0;
        double server_bandwidth_bps = 1000000.0;
        double server_ram_mb = 302768.0;
        double distance_min_m = 5.0;
        double distance_max_m = 40.0;
        double battery_min = 0.20;
        double battery_max = 0.90;
        double battery_capacity_j = 20000.0;
        double power_idle_w = 1.0;
        double power_max_w = 5.0;

        // Workload
        std::size_t n_apps = 280;
        std::size_t tasks_per_app = 10;
        double task_length_mi = 3000.0;
        double subtask_length_mi = 500.0;
        double data_size_min_b = 5120.0;
        double data_size_max_b = 10240.0;
        double horizon_s = 3600.0;
        double deadline_slack_min = 0.10;
        double deadline_slack_max = 0.80;
        double min_deadline_slack_s = 4.0;

        // Execution dynamics
        double cpu_availability_min = 0.50;
        double cpu_availability_max = 1.30;
        double cpu_variation_min = 0.10;
        double cpu_variation_max = 0.40;

        // Policies and models
        std::vector<Policy> policies{Policy::DeadlineAware, Policy::EnergyAware, Policy::Hybrid,
                                     Policy::BaselinePowerMin};
        std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
        double hybrid_weight = 0.5;
        double safety_margin = 1.2;
        std::size_t training_window = 500;
        std::size_t retrain_every = 25;

        // SLA and pricing
        double sla_alpha = 1.0;
        double sla_beta = 0.5;
        double price_per_million_msgs = 1.65;
        double price_per_million_conn_min = 0.132;
        double messages_per_task = 2.0;

        // Traces: a directory of PlanetLab files, or synthetic when empty.
        std::string trace_dir;
        std::size_t synth_traces = 100;
        std::size_t synth_trace_length = 288;
        double synth_mean_min = 0.05;
        double synth_mean_max = 0.45;
        double synth_jitter = 0.10;

        // Harness
        std::uint64_t event_cap = 10'000'000;
        std::size_t app_sweep_devices = 50;
        std::size_t device_sweep_apps = 280;
        std::size_t jobs = 0; // 0: hardware concurrency

        bool operator==(const ScenarioConfig &) const = default;
    };

    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    class ParseError : public ConfigError
    {
    public:
        ParseError(std::size_t line, const std::string &what);
        std::size_t line;
    };

    class UnknownKey : public ConfigError
    {
    public:
        explicit UnknownKey(const std::string &key);
        std::string key;
    };

    class OutOfRange : public ConfigError
    {
    public:
        OutOfRange(const std::string &key, const std::string &why);
        std::string key;
    };

    ScenarioConfig parse_config(std::string_view text);
    ScenarioConfig load_config(const std::filesystem::path &path);

    /// Every key, one per line; parse_config(dump_config(c)) == c.
    std::string dump_config(const ScenarioConfig &config);

    /// Throws OutOfRange on the first violated constraint.
    void validate_config(const ScenarioConfig &config);

    /// Soft checks (e.g. prices outside the quoted AWS ranges). Never throws.
    std::vector<std::string> config_warnings(const ScenarioConfig &config);

} // namespace fogsim
