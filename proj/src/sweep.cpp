#include "fogsim/sweep.hpp"

#include "fogsim/csv.hpp"
#include "fogsim/regression.hpp"
#include "fogsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace fogsim
{
    SweepPreset parse_preset(std::string_view name)
    {
        if (name == "app")
            return SweepPreset::App;
        if (name == "device")
            return SweepPreset::Device;
        throw ConfigError("unknown sweep preset: " + std::string(name));
    }

    std::vector<std::size_t> sweep_points(SweepPreset preset)
    {
        std::vector<std::size_t> pts;
        if (preset == SweepPreset::App)
        {
            for (std::size_t n = 70; n <= 560; n += 70)
                pts.push_back(n);
        }
        else
        {
            for (std::size_t n = 10; n <= 50; n += 10)
                pts.push_back(n);
        }
        return pts;
    }

    std::vector<SweepRow> run_sweep(SweepPreset preset, const ScenarioConfig &base)
    {
        validate_config(base);

        struct Job
        {
            ScenarioConfig config;
            Policy policy;
            std::uint64_t seed;
        };
        std::vector<Job> jobs;
        for (std::size_t point : sweep_points(preset))
        {
            ScenarioConfig cfg = base;
            if (preset == SweepPreset::App)
            {
                cfg.n_apps = point;
                cfg.n_devices = base.app_sweep_devices;
            }
            else
            {
                cfg.n_devices = point;
                cfg.n_apps = base.device_sweep_apps;
            }
            for (Policy p : base.policies)
            {
                for (auto seed : base.seeds)
                    jobs.push_back(Job{cfg, p, seed});
            }
        }

        std::vector<SweepRow> rows(jobs.size());
        std::vector<std::exception_ptr> errors(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            const RunOptions quiet{false, false};
            for (std::size_t i = next++; i < jobs.size(); i = next++)
            {
                const auto &job = jobs[i];
                try
                {
                    const auto result = run(job.config, job.policy, job.seed, quiet);
                    rows[i] = SweepRow{job.policy, job.seed, job.config.n_devices, job.config.n_apps, result.report};
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };

        std::size_t threads = base.jobs != 0 ? base.jobs : std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, jobs.size());
        if (threads <= 1)
        {
            worker();
        }
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t)
                pool.emplace_back(worker);
        }

        for (std::size_t i = 0; i < jobs.size(); ++i)
        {
            if (!errors[i])
                continue;
            const auto &job = jobs[i];
            const std::string where = "run " + std::string(to_string(job.policy)) + " seed=" +
                                      std::to_string(job.seed) + " n_devices=" +
                                      std::to_string(job.config.n_devices) +
                                      " n_apps=" + std::to_string(job.config.n_apps);
            try
            {
                std::rethrow_exception(errors[i]);
            }
            catch (const std::exception &e)
            {
                throw RunError(where + ": " + e.what());
            }
        }

        std::sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
            return std::tie(a.n_devices, a.n_apps, a.policy, a.seed) <
                   std::tie(b.n_devices, b.n_apps, b.policy, b.seed);
        });
        return rows;
    }

    std::string sweep_csv(const std::vector<SweepRow> &rows)
    {
        std::string out(report_csv_header);
        out += '\n';
        for (const auto &r : rows)
        {
            out += report_csv_row(to_string(r.policy), r.seed, r.n_devices, r.n_apps, r.report);
            out += '\n';
        }
        return out;
    }

    std::optional<double> improvement_pct(double baseline, double value)
    {
        if (baseline == 0.0)
            return std::nullopt;
        return (baseline - value) / baseline * 100.0;
    }

    SummaryTable summarize(std::string_view csv)
    {
        constexpr std::size_t columns = 12;
        std::size_t pos = 0;
        auto next_line = [&](std::string_view &line) {
            if (pos >= csv.size())
                return false;
            const auto nl = csv.find('\n', pos);
            const auto end = nl == std::string_view::npos ? csv.size() : nl;
            line = csv.substr(pos, end - pos);
            pos = end + 1;
            return true;
        };

        std::string_view line;
        if (!next_line(line))
            throw SchemaMismatch("empty report");
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line != report_csv_header)
            throw SchemaMismatch("unexpected report header: " + std::string(line));

        struct Acc
        {
            std::size_t runs = 0;
            double sums[8] = {};
        };
        // (n_devices, n_apps) -> policies in first-seen order
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::string, Acc>>> groups;

        std::size_t line_no = 1;
        while (next_line(line))
        {
            ++line_no;
            if (line.empty() || line == "\r")
                continue;
            const auto cells = split_csv_line(line);
            if (cells.size() != columns)
                throw SchemaMismatch("report line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " columns");
            try
            {
                const auto key = std::make_pair(static_cast<std::size_t>(parse_double(cells[2])),
                                                static_cast<std::size_t>(parse_double(cells[3])));
                auto &pols = groups[key];
                auto it = std::find_if(pols.begin(), pols.end(), [&](const auto &p) { return p.first == cells[0]; });
                if (it == pols.end())
                {
                    pols.emplace_back(std::string(cells[0]), Acc{});
                    it = std::prev(pols.end());
                }
                ++it->second.runs;
                for (std::size_t j = 0; j < 8; ++j)
                    it->second.sums[j] += parse_double(cells[4 + j]);
            }
            catch (const SchemaMismatch &)
            {
                throw;
            }
            catch (const Error &e)
            {
                throw SchemaMismatch("report line " + std::to_string(line_no) + ": " + e.what());
            }
        }

        SummaryTable table;
        const std::string baseline_name(to_string(Policy::BaselinePowerMin));
        for (const auto &[key, pols] : groups)
        {
            SummaryPoint point;
            point.n_devices = key.first;
            point.n_apps = key.second;
            for (const auto &[name, acc] : pols)
            {
                PolicySummary s;
                s.policy = name;
                s.runs = acc.runs;
                const double n = static_cast<double>(acc.runs);
                s.avg_delay_s = acc.sums[0] / n;
                s.avg_proc_s = acc.sums[1] / n;
                s.total_cost = acc.sums[2] / n;
                s.sla_viol_pct = acc.sums[3] / n;
                s.total_penalty = acc.sums[4] / n;
                s.total_energy_j = acc.sums[5] / n;
                s.completed = acc.sums[6] / n;
                s.failed = acc.sums[7] / n;
                point.policies.push_back(s);
            }

            const auto base = std::find_if(point.policies.begin(), point.policies.end(),
                                           [&](const PolicySummary &p) { return p.policy == baseline_name; });
            if (base != point.policies.end() && point.policies.size() > 1)
            {
                table.has_improvements = true;
                const PolicySummary b = *base;
                for (auto &p : point.policies)
                {
                    if (p.policy == baseline_name)
                        continue;
                    p.impr_avg_delay_pct = improvement_pct(b.avg_delay_s, p.avg_delay_s);
                    p.impr_avg_proc_pct = improvement_pct(b.avg_proc_s, p.avg_proc_s);
                    p.impr_total_cost_pct = improvement_pct(b.total_cost, p.total_cost);
                    p.impr_sla_viol_pct = improvement_pct(b.sla_viol_pct, p.sla_viol_pct);
                    p.impr_total_penalty_pct = improvement_pct(b.total_penalty, p.total_penalty);
                    p.impr_total_energy_pct = improvement_pct(b.total_energy_j, p.total_energy_j);
                }
            }
            table.points.push_back(std::move(point));
        }
        return table;
    }

    std::string format_summary(const SummaryTable &table)
    {
        std::string out =
            "n_devices,n_apps,policy,runs,avg_delay_s,avg_proc_s,total_cost,sla_viol_pct,total_penalty,"
            "total_energy_j,completed,failed";
        if (table.has_improvements)
            out += ",impr_avg_delay_pct,impr_avg_proc_pct,impr_total_cost_pct,impr_sla_viol_pct,"
                   "impr_total_penalty_pct,impr_total_energy_pct";
        out += '\n';

        auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string(); };
        for (const auto &pt : table.points)
        {
            for (const auto &p : pt.policies)
            {
                out += std::to_string(pt.n_devices) + ',' + std::to_string(pt.n_apps) + ',' + p.policy + ',' +
                       std::to_string(p.runs) + ',' + format_double(p.avg_delay_s) + ',' +
                       format_double(p.avg_proc_s) + ',' + format_double(p.total_cost) + ',' +
                       format_double(p.sla_viol_pct) + ',' + format_double(p.total_penalty) + ',' +
                       format_double(p.total_energy_j) + ',' + format_double(p.completed) + ',' +
                       format_double(p.failed);
                if (table.has_improvements)
                {
                    out += ',' + opt(p.impr_avg_delay_pct) + ',' + opt(p.impr_avg_proc_pct) + ',' +
                           opt(p.impr_total_cost_pct) + ',' + opt(p.impr_sla_viol_pct) + ',' +
                           opt(p.impr_total_penalty_pct) + ',' + opt(p.impr_total_energy_pct);
                }
                out += '\n';
            }
        }
        return out;
    }

} // namespace fogsim
