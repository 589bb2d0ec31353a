#include "fogsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fogsim
{
    PowerModel PowerModel::make(double idle_w, double max_w)
    {
        if (!(idle_w >= 0.0) || !(idle_w < max_w) || !std::isfinite(max_w))
        {
            std::ostringstream msg;
            msg << "power model requires 0 <= idle < max, got idle=" << idle_w << " max=" << max_w;
            throw InvalidParameter(msg.str());
        }
        return PowerModel{idle_w, max_w};
    }

    UtilizationOutOfRange::UtilizationOutOfRange(double u)
        : Error("utilization out of [0,1]: " + std::to_string(u))
    {
    }

    InvalidWindow::InvalidWindow(double t0, double t1)
        : Error("invalid energy window [" + std::to_string(t0) + ", " + std::to_string(t1) + "]")
    {
    }

    double power_at(const PowerModel &model, double utilization)
    {
        if (!(utilization >= 0.0 && utilization <= 1.0))
            throw UtilizationOutOfRange(utilization);
        return model.power_idle_w + (model.power_max_w - model.power_idle_w) * utilization;
    }

    namespace
    {
        double loaded(const UtilizationTrace &trace, std::size_t slot, double extra)
        {
            return std::min(1.0, trace.samples[slot % trace.samples.size()] + extra);
        }
    } // namespace

    double energy_over(const PowerModel &model, const UtilizationTrace &trace, double t0_s, double t1_s,
                       double extra_utilization)
    {
        if (!(t0_s >= 0.0) || !(t1_s >= t0_s) || !std::isfinite(t1_s))
            throw InvalidWindow(t0_s, t1_s);

        const double iv = trace.sample_interval_s;
        auto slot = static_cast<std::size_t>(std::floor(t0_s / iv));
        double t = t0_s;
        double total = 0.0;
        while (t < t1_s)
        {
            const double seg_end = std::min(t1_s, static_cast<double>(slot + 1) * iv);
            if (seg_end > t)
                total += power_at(model, loaded(trace, slot, extra_utilization)) * (seg_end - t);
            t = std::max(t, seg_end);
            ++slot;
        }
        return total;
    }

    double depletion_time(const PowerModel &model, const UtilizationTrace &trace, double t0_s, double budget_j,
                          double extra_utilization)
    {
        if (!(t0_s >= 0.0))
            throw InvalidWindow(t0_s, t0_s);
        if (budget_j <= 0.0)
            return t0_s;

        // A full trace period drains a fixed amount; skip whole periods first.
        const double period_energy = energy_over(model, trace, 0.0, trace.period_s(), extra_utilization);
        if (period_energy <= 0.0)
            return std::numeric_limits<double>::infinity();

        const double iv = trace.sample_interval_s;
        auto slot = static_cast<std::size_t>(std::floor(t0_s / iv));
        double t = t0_s;
        double left = budget_j;
        const std::size_t max_steps = trace.samples.size() * 2 + 2;
        for (std::size_t step = 0;; ++step)
        {
            if (step == max_steps)
            {
                // Aligned to a slot boundary here; jump over whole periods.
                const double periods = std::floor(left / period_energy);
                if (periods >= 1.0)
                {
                    left -= periods * period_energy;
                    slot += static_cast<std::size_t>(periods) * trace.samples.size();
                    t = static_cast<double>(slot) * iv;
                }
            }
            const double seg_end = static_cast<double>(slot + 1) * iv;
            const double p = power_at(model, loaded(trace, slot, extra_utilization));
            const double seg_energy = p * (seg_end - t);
            if (seg_energy >= left && p > 0.0)
                return t + left / p;
            left -= seg_energy;
            t = seg_end;
            ++slot;
        }
    }

    DrainResult drain_battery(FogDevice &dev, double joules)
    {
        if (dev.mains_powered)
            return {dev.battery_pct, false};
        if (joules > 0.0)
            dev.battery_pct = std::max(0.0, dev.battery_pct - joules / dev.battery_capacity_j);
        return {dev.battery_pct, dev.battery_pct <= 0.0};
    }

    int power_available(const FogDevice &dev, double predicted_exec_s, double predicted_power_w,
                        double safety_margin)
    {
        if (dev.mains_powered)
            return 1;
        const double need = predicted_exec_s * predicted_power_w * safety_margin;
        return dev.remaining_energy_j() >= need ? 1 : 0;
    }

} // namespace fogsim
