#include "fogsim/domain.hpp"

#include <algorithm>
#include <cmath>

namespace fogsim
{
    std::string_view to_string(Policy p)
    {
        switch (p)
        {
        case Policy::DeadlineAware:
            return "DeadlineAware";
        case Policy::EnergyAware:
            return "EnergyAware";
        case Policy::Hybrid:
            return "Hybrid";
        case Policy::BaselinePowerMin:
            return "BaselinePowerMin";
        }
        return "Unknown";
    }

    Policy parse_policy(std::string_view name)
    {
        for (Policy p : all_policies)
        {
            if (to_string(p) == name)
                return p;
        }
        throw Error("unknown policy: " + std::string(name));
    }

    bool ValidationResult::has(std::string_view name) const
    {
        return std::find(violations.begin(), violations.end(), name) != violations.end();
    }

    ValidationResult validate_device(const FogDevice &dev, const DeviceLimits &limits)
    {
        ValidationResult r;
        auto check = [&](bool cond, const char *name) {
            if (!cond)
                r.violations.emplace_back(name);
        };

        check(std::isfinite(dev.power_idle_w) && dev.power_idle_w >= 0.0, "power idle non-negative");
        check(dev.power_idle_w < dev.power_max_w, "power ordering");
        check(dev.bandwidth_bps > 0.0, "bandwidth positive");
        check(dev.mips_capacity > 0.0, "mips positive");

        if (!dev.mains_powered)
        {
            check(dev.mips_capacity >= limits.mips_min && dev.mips_capacity <= limits.mips_max, "mips range");
            check(dev.distance_m >= limits.distance_min_m && dev.distance_m <= limits.distance_max_m,
                  "distance range");
            check(dev.battery_pct >= limits.battery_min && dev.battery_pct <= limits.battery_max,
                  "battery initial range");
            check(dev.battery_capacity_j > 0.0, "battery capacity positive");
        }
        return r;
    }

    ValidationResult validate_telemetry(const TelemetryRecord &rec)
    {
        ValidationResult r;
        const double continuous[] = {rec.cpu_utilization, rec.mobility_m,     rec.net_comm_s,
                                     rec.response_time_s, rec.energy_usage_j, rec.exec_time_s,
                                     rec.energy_consumed_j};
        for (double v : continuous)
        {
            if (!std::isfinite(v) || v < 0.0)
            {
                r.violations.emplace_back("non-negative finite fields");
                break;
            }
        }
        if (rec.cpu_utilization > 1.0)
            r.violations.emplace_back("cpu utilization range");
        if (rec.power_available != 0.0 && rec.power_available != 1.0)
            r.violations.emplace_back("power flag binary");
        return r;
    }

} // namespace fogsim
