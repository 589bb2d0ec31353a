#pragma once

// Core entities shared by every fogsim module.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    /// Base for every error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A numeric argument outside its documented domain.
    class InvalidParameter : public Error
    {
    public:
        using Error::Error;
    };

    using DeviceId = std::uint32_t;
    using AppId = std::uint64_t;

    /// Application requirement; selects the branch of the allocation algorithm.
    enum class Requirement : std::uint8_t
    {
        DeadlineAware = 0,
        EnergyAware = 1,
        Hybrid = 2,
    };

    /// Placement policy of a run. The first three map 1:1 onto Requirement.
    enum class Policy : std::uint8_t
    {
        DeadlineAware = 0,
        EnergyAware = 1,
        Hybrid = 2,
        BaselinePowerMin = 3,
    };

    inline constexpr Policy all_policies[] = {Policy::DeadlineAware, Policy::EnergyAware, Policy::Hybrid,
                                              Policy::BaselinePowerMin};

    std::string_view to_string(Policy p);
    /// Throws Error on an unknown name.
    Policy parse_policy(std::string_view name);

    struct FogDevice
    {
        DeviceId id = 0;
        double mips_capacity = 0.0;
        double bandwidth_bps = 0.0;
        double ram_mb = 0.0;
        double distance_m = 0.0;
        double battery_pct = 0.0; // fraction in [0,1]
        double cpu_availability_factor = 1.0;
        std::size_t trace_id = 0;
        double power_idle_w = 1.0;
        double power_max_w = 5.0;
        double battery_capacity_j = 0.0;
        bool mains_powered = false; // FogServer rows

        double remaining_energy_j() const noexcept { return battery_capacity_j * battery_pct; }
    };

    struct Task
    {
        std::uint32_t task_id = 0;
        double length_mi = 0.0;
        double data_size_b = 0.0;
        std::vector<double> subtasks; // MI per subtask, executed sequentially on one device
    };

    struct ApplicationRequest
    {
        AppId app_id = 0;
        double submit_time_s = 0.0;
        std::vector<Task> tasks;
        double deadline_s = 0.0; // absolute
        Requirement requirement = Requirement::DeadlineAware;
    };

    /// One observed (predictors, outcomes) row for regression training.
    struct TelemetryRecord
    {
        DeviceId device_id = 0;
        double cpu_utilization = 0.0;
        double mobility_m = 0.0;
        double net_comm_s = 0.0;
        double response_time_s = 0.0;
        double power_available = 1.0; // 0 or 1
        double energy_usage_j = 0.0;
        double exec_time_s = 0.0;
        double energy_consumed_j = 0.0;
    };

    /// Parameter ranges a generated device must respect.
    struct DeviceLimits
    {
        double mips_min = 2000.0;
        double mips_max = 6000.0;
        double distance_min_m = 5.0;
        double distance_max_m = 40.0;
        double battery_min = 0.20;
        double battery_max = 0.90;
    };

    struct ValidationResult
    {
        std::vector<std::string> violations;

        bool ok() const noexcept { return violations.empty(); }
        bool has(std::string_view name) const;
    };

    /// Checks FogDevice invariants. Mains-powered nodes skip the battery and
    /// device-range checks.
    ValidationResult validate_device(const FogDevice &dev, const DeviceLimits &limits = {});

    /// Checks a telemetry row: finite, non-negative continuous fields, binary power flag.
    ValidationResult validate_telemetry(const TelemetryRecord &rec);

} // namespace fogsim
