#include "fogsim/metrics.hpp"

#include "fogsim/csv.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace fogsim
{
    double delay(double exec_start_s, double user_submit_s)
    {
        if (exec_start_s < user_submit_s)
            throw NegativeDelay("execution started before submission");
        return exec_start_s - user_submit_s;
    }

    double processing_time(double p_start_s, double p_end_s)
    {
        if (p_end_s < p_start_s)
            throw NegativeDuration("processing ended before it started");
        return p_end_s - p_start_s;
    }

    double processing_cost(double message_count, double connection_minutes, double price_per_million_msgs,
                           double price_per_million_conn_min)
    {
        return message_count / 1e6 * price_per_million_msgs + connection_minutes / 1e6 * price_per_million_conn_min;
    }

    SlaOutcome sla_penalty(const SlaTerms &terms, double response_s)
    {
        const double dt = std::max(0.0, response_s - terms.agreed_response_s);
        if (dt > 0.0)
            return {true, terms.alpha + terms.beta * dt};
        return {};
    }

    RunReport aggregate(std::span<const TaskRecord> input, const PenaltyRates &rates, const Prices &prices)
    {
        // Canonical order makes the floating-point sums independent of input order.
        std::vector<TaskRecord> records(input.begin(), input.end());
        std::sort(records.begin(), records.end(), [](const TaskRecord &a, const TaskRecord &b) {
            return std::tie(a.app_id, a.task_id, a.start_s, a.end_s, a.submit_s, a.device_id, a.completed,
                            a.energy_j, a.agreed_response_s) < std::tie(b.app_id, b.task_id, b.start_s, b.end_s,
                                                                        b.submit_s, b.device_id, b.completed,
                                                                        b.energy_j, b.agreed_response_s);
        });

        RunReport r;
        double delay_sum = 0.0;
        for (const auto &rec : records)
        {
            r.total_energy_j += rec.energy_j;
            if (!rec.completed)
                continue;

            ++r.tasks_completed;
            delay_sum += delay(rec.start_s, rec.submit_s);
            const double busy = processing_time(rec.start_s, rec.end_s);
            r.total_processing_s += busy;
            r.total_processing_cost +=
                processing_cost(prices.messages_per_task, busy / 60.0, prices.per_million_messages,
                                prices.per_million_connection_minutes);

            const double response = rec.end_s - rec.submit_s;
            const auto sla = sla_penalty(SlaTerms{rates.alpha, rates.beta, rec.agreed_response_s}, response);
            if (sla.violated)
            {
                ++r.sla_violation_count;
                r.total_penalty += sla.penalty;
            }
        }
        if (r.tasks_completed > 0)
        {
            const double n = static_cast<double>(r.tasks_completed);
            r.avg_delay_s = delay_sum / n;
            r.avg_processing_s = r.total_processing_s / n;
            r.sla_violation_pct = 100.0 * static_cast<double>(r.sla_violation_count) / n;
        }
        return r;
    }

    std::string report_csv_row(std::string_view policy, std::uint64_t seed, std::size_t n_devices, std::size_t n_apps,
                               const RunReport &report)
    {
        std::string row(policy);
        auto add = [&row](const std::string &v) {
            row += ',';
            row += v;
        };
        add(std::to_string(seed));
        add(std::to_string(n_devices));
        add(std::to_string(n_apps));
        add(format_double(report.avg_delay_s));
        add(format_double(report.avg_processing_s));
        add(format_double(report.total_processing_cost));
        add(format_double(report.sla_violation_pct));
        add(format_double(report.total_penalty));
        add(format_double(report.total_energy_j));
        add(std::to_string(report.tasks_completed));
        add(std::to_string(report.tasks_failed));
        return row;
    }

} // namespace fogsim
