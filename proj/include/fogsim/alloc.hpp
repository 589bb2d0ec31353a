#pragma once

// Regression-driven device selection and the power-minimizing baseline.

#include "fogsim/domain.hpp"
#include "fogsim/energy.hpp"
#include "fogsim/regression.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fogsim
{
    /// Snapshot of one candidate device at decision time.
    struct Candidate
    {
        FogDevice device;                 // battery_pct reflects the decision instant
        Features features;                // power_available / exec_time_s are filled in by allocate()
        double current_utilization = 0.0; // trace plus any executing load; read by the baseline
    };

    struct ModelSet
    {
        RegressionModel exec_time; // ExecTimeBase or ExecTimeFull
        RegressionModel energy;    // EnergyFull
        std::size_t snapshot_id = 0;
    };

    struct Score
    {
        DeviceId device_id = 0;
        double etp_s = 0.0;
        double eec_j = 0.0;
    };

    struct AllocationOptions
    {
        double hybrid_weight = 0.5;
        double safety_margin = default_safety_margin;
    };

    struct AllocationDecision
    {
        AppId app_id = 0;
        std::optional<DeviceId> chosen_device_id;
        Policy policy = Policy::DeadlineAware;
        double predicted_exec_s = 0.0;
        double predicted_energy_j = 0.0;
        double decided_at_s = 0.0;
        bool filtered_fallback = false;
        bool known_requirement = true; // false: the "no device" result for an unknown requirement

        bool operator==(const AllocationDecision &) const = default;
    };

    class NoDevices : public Error
    {
    public:
        NoDevices() : Error("no candidate devices") {}
    };

    /// ETP from the exec-time model, then EEC from the energy model with
    /// exec_time_s set to that device's ETP. One entry per candidate, input order.
    std::vector<Score> score_all(std::span<const Candidate> candidates, const ModelSet &models);

    /// argmin ETP, ties to the lowest device id.
    DeviceId select_deadline(std::span<const Score> scores);

    /// argmin EEC, ties to the lowest device id.
    DeviceId select_energy(std::span<const Score> scores);

    /// argmin of w * minmax(ETP) + (1 - w) * minmax(EEC). Constant columns
    /// normalize to 0; ties to the lowest device id.
    DeviceId select_hybrid(std::span<const Score> scores, double weight);

    /// Per-candidate power flag for the predicted load: the ETP evaluated with
    /// the flag set, at the device's current power draw.
    int predicted_power_available(const Candidate &c, const ModelSet &models, double safety_margin);

    /// Requirement dispatch. Candidates whose power flag is 0 are removed
    /// first; if that empties the set the unfiltered set is used and the
    /// decision is flagged. Unknown requirements yield a decision without device.
    AllocationDecision allocate(std::span<const Candidate> candidates, const ApplicationRequest &app,
                                const ModelSet &models, const AllocationOptions &options = {}, double now_s = 0.0);

    /// Proxy for a power-minimizing placement: argmin current power draw,
    /// ignoring deadlines and the regression models.
    AllocationDecision baseline_power_min(std::span<const Candidate> candidates, const ApplicationRequest &app,
                                          double now_s = 0.0);

} // namespace fogsim
