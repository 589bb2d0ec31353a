#pragma once

// Utilization-driven power model, trace energy integration and battery bookkeeping.

#include "fogsim/domain.hpp"
#include "fogsim/trace.hpp"

namespace fogsim
{
    struct PowerModel
    {
        double power_idle_w = 1.0;
        double power_max_w = 5.0;

        /// Validating constructor; throws InvalidParameter unless 0 <= idle < max.
        static PowerModel make(double idle_w, double max_w);
        static PowerModel of(const FogDevice &dev) { return make(dev.power_idle_w, dev.power_max_w); }
    };

    class UtilizationOutOfRange : public Error
    {
    public:
        explicit UtilizationOutOfRange(double u);
    };

    class InvalidWindow : public Error
    {
    public:
        InvalidWindow(double t0, double t1);
    };

    inline constexpr double default_safety_margin = 1.2;

    /// Linear interpolation between idle and max draw.
    double power_at(const PowerModel &model, double utilization);

    /// Exact integral of power over [t0_s, t1_s] for a piecewise-constant trace.
    ///
    /// `extra_utilization` is added to every sample (capped at 1) and models
    /// the load of a task executing on top of the background trace.
    double energy_over(const PowerModel &model, const UtilizationTrace &trace, double t0_s, double t1_s,
                       double extra_utilization = 0.0);

    /// First time t >= t0_s at which energy_over(t0_s, t) reaches `budget_j`,
    /// or +inf if it never does.
    double depletion_time(const PowerModel &model, const UtilizationTrace &trace, double t0_s, double budget_j,
                          double extra_utilization = 0.0);

    struct DrainResult
    {
        double battery_pct = 0.0;
        bool depleted = false;
    };

    /// battery_pct <- max(0, battery_pct - joules / capacity). Mains nodes are untouched.
    DrainResult drain_battery(FogDevice &dev, double joules);

    /// 1 iff the remaining battery covers exec x power x margin. Mains nodes always return 1.
    int power_available(const FogDevice &dev, double predicted_exec_s, double predicted_power_w,
                        double safety_margin = default_safety_margin);

} // namespace fogsim
