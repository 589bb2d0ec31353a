#pragma once

// Experiment sweeps over application and device counts, and their summary.

#include "fogsim/config.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/regression.hpp" // SchemaMismatch

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    enum class SweepPreset : std::uint8_t
    {
        App,    // n_apps 70..560 step 70 at app_sweep_devices devices
        Device, // n_devices 10..50 step 10 at device_sweep_apps applications
    };

    SweepPreset parse_preset(std::string_view name);
    std::vector<std::size_t> sweep_points(SweepPreset preset);

    struct SweepRow
    {
        Policy policy = Policy::DeadlineAware;
        std::uint64_t seed = 0;
        std::size_t n_devices = 0;
        std::size_t n_apps = 0;
        RunReport report;
    };

    /// One run per (point, policy, seed). Runs execute on `config.jobs`
    /// threads; rows come back sorted by (n_devices, n_apps, policy, seed).
    std::vector<SweepRow> run_sweep(SweepPreset preset, const ScenarioConfig &base);

    std::string sweep_csv(const std::vector<SweepRow> &rows);

    struct PolicySummary
    {
        std::string policy;
        std::size_t runs = 0;
        // Means over seeds, in report column order.
        double avg_delay_s = 0.0;
        double avg_proc_s = 0.0;
        double total_cost = 0.0;
        double sla_viol_pct = 0.0;
        double total_penalty = 0.0;
        double total_energy_j = 0.0;
        double completed = 0.0;
        double failed = 0.0;
        // Percentage improvement over BaselinePowerMin (positive = lower than baseline).
        std::optional<double> impr_avg_delay_pct;
        std::optional<double> impr_avg_proc_pct;
        std::optional<double> impr_total_cost_pct;
        std::optional<double> impr_sla_viol_pct;
        std::optional<double> impr_total_penalty_pct;
        std::optional<double> impr_total_energy_pct;
    };

    struct SummaryPoint
    {
        std::size_t n_devices = 0;
        std::size_t n_apps = 0;
        std::vector<PolicySummary> policies; // in first-seen order
    };

    struct SummaryTable
    {
        std::vector<SummaryPoint> points; // sorted by (n_devices, n_apps)
        bool has_improvements = false;
    };

    /// (baseline - value) / baseline x 100; empty when the baseline is 0.
    std::optional<double> improvement_pct(double baseline, double value);

    /// Parses a run_sweep CSV; throws SchemaMismatch on a wrong header or row width.
    SummaryTable summarize(std::string_view report_csv);

    std::string format_summary(const SummaryTable &table);

} // namespace fogsim
