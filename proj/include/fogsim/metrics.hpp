#pragma once

// Delay, processing time, processing cost and SLA penalty metrics.

#include "fogsim/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace fogsim
{
    class NegativeDelay : public Error
    {
    public:
        using Error::Error;
    };

    class NegativeDuration : public Error
    {
    public:
        using Error::Error;
    };

    struct SlaTerms
    {
        double alpha = 1.0;             // constant penalty
        double beta = 0.5;              // penalty per second of delay beyond agreement
        double agreed_response_s = 1.0; // must be > 0
    };

    struct Prices
    {
        double per_million_messages = 1.65;
        double per_million_connection_minutes = 0.132;
        double messages_per_task = 2.0;
    };

    struct SlaOutcome
    {
        bool violated = false;
        double penalty = 0.0;
    };

    /// exec_start - user_submit.
    double delay(double exec_start_s, double user_submit_s);

    /// p_end - p_start.
    double processing_time(double p_start_s, double p_end_s);

    /// messages / 1e6 x message price + connection minutes / 1e6 x connection price.
    double processing_cost(double message_count, double connection_minutes, double price_per_million_msgs,
                           double price_per_million_conn_min);

    /// DT = max(0, response - agreed); penalty alpha + beta x DT when DT > 0.
    SlaOutcome sla_penalty(const SlaTerms &terms, double response_s);

    /// One task execution as seen by the metrics. Failed attempts only
    /// contribute their energy.
    struct TaskRecord
    {
        AppId app_id = 0;
        std::uint32_t task_id = 0;
        DeviceId device_id = 0;
        double submit_s = 0.0;
        double start_s = 0.0;
        double end_s = 0.0;
        double agreed_response_s = 1.0;
        double energy_j = 0.0;
        bool completed = true;
    };

    struct RunReport
    {
        double avg_delay_s = 0.0;
        double avg_processing_s = 0.0;
        double total_processing_s = 0.0;
        double total_processing_cost = 0.0;
        std::size_t sla_violation_count = 0;
        double sla_violation_pct = 0.0;
        double total_penalty = 0.0;
        double total_energy_j = 0.0;
        std::size_t tasks_completed = 0;
        std::size_t tasks_failed = 0;

        bool operator==(const RunReport &) const = default;
    };

    struct PenaltyRates
    {
        double alpha = 1.0;
        double beta = 0.5;
    };

    /// Means over completed records, sums for cost/penalty/energy. Connection
    /// minutes per task are its start-to-end wall time; the SLA response runs
    /// from submit to end. `tasks_failed` is
    /// left for the caller, who knows how many tasks were abandoned.
    RunReport aggregate(std::span<const TaskRecord> records, const PenaltyRates &rates, const Prices &prices);

    inline constexpr std::string_view report_csv_header =
        "policy,seed,n_devices,n_apps,avg_delay_s,avg_proc_s,total_cost,sla_viol_pct,total_penalty,total_energy_j,"
        "completed,failed";

    std::string report_csv_row(std::string_view policy, std::uint64_t seed, std::size_t n_devices, std::size_t n_apps,
                               const RunReport &report);

} // namespace fogsim
