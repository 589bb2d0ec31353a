#include "fogsim/sim.hpp"

#include "fogsim/csv.hpp"
#include "fogsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace fogsim
{
    namespace
    {
        // Independent random streams derived from the run seed. Fleet,
        // traces and workload do not depend on the policy, so every policy
        // sees the same scenario for a given seed.
        enum Stream : std::uint64_t
        {
            kFleet = 1,
            kTraces = 2,
            kAssign = 3,
            kWorkload = 4,
            kExecution = 5,
        };

        constexpr int max_attempts = 2;
    } // namespace

    ExecutionDraw draw_execution(Rng &rng, const ScenarioConfig &config)
    {
        ExecutionDraw d;
        d.availability = rng.uniform(config.cpu_availability_min, config.cpu_availability_max);
        d.variation = rng.uniform(config.cpu_variation_min, config.cpu_variation_max);
        return d;
    }

    double effective_mips(const FogDevice &dev, const ExecutionDraw &draw)
    {
        const double utilization = std::min(1.0, draw.background + draw.variation);
        return dev.mips_capacity * dev.cpu_availability_factor * draw.availability *
               std::max(min_cpu_share, 1.0 - utilization);
    }

    double task_service_time(const Task &task, const FogDevice &dev, const ExecutionDraw &draw)
    {
        const double mips = effective_mips(dev, draw);
        double compute = 0.0;
        for (double mi : task.subtasks)
            compute += mi / mips;
        return compute + task.data_size_b * 8.0 / dev.bandwidth_bps;
    }

    double nominal_service_time(const Task &task, const FogDevice &dev)
    {
        return task_service_time(task, dev, ExecutionDraw{});
    }

    void EventQueue::schedule(double time_s, EventKind kind, std::uint64_t subject, std::uint64_t version)
    {
        if (!(time_s >= now_))
            throw RunError("event scheduled in the past");
        heap_.push(Event{time_s, next_seq_++, kind, subject, version});
    }

    Event EventQueue::pop()
    {
        Event e = heap_.top();
        heap_.pop();
        now_ = e.time_s;
        return e;
    }

    std::vector<FogDevice> build_fleet(const ScenarioConfig &config, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, kFleet));
        std::vector<FogDevice> fleet;
        fleet.reserve(config.n_devices + config.n_servers);
        for (std::size_t i = 0; i < config.n_devices; ++i)
        {
            FogDevice d;
            d.id = static_cast<DeviceId>(i);
            d.mips_capacity = rng.uniform(config.device_mips_min, config.device_mips_max);
            d.distance_m = rng.uniform(config.distance_min_m, config.distance_max_m);
            d.battery_pct = rng.uniform(config.battery_min, config.battery_max);
            d.bandwidth_bps = config.device_bandwidth_bps;
            d.ram_mb = config.device_ram_mb;
            d.power_idle_w = config.power_idle_w;
            d.power_max_w = config.power_max_w;
            d.battery_capacity_j = config.battery_capacity_j;
            fleet.push_back(d);
        }
        for (std::size_t i = 0; i < config.n_servers; ++i)
        {
            FogDevice s;
            s.id = static_cast<DeviceId>(config.n_devices + i);
            s.mips_capacity = config.server_mips;
            s.bandwidth_bps = config.server_bandwidth_bps;
            s.ram_mb = config.server_ram_mb;
            s.distance_m = rng.uniform(config.distance_min_m, config.distance_max_m);
            s.battery_pct = 1.0;
            s.power_idle_w = config.power_idle_w;
            s.power_max_w = config.power_max_w;
            s.mains_powered = true;
            fleet.push_back(s);
        }
        return fleet;
    }

    std::vector<ApplicationRequest> build_workload(const ScenarioConfig &config, std::uint64_t seed,
                                                   std::span<const FogDevice> fleet, Requirement requirement)
    {
        double mean_mips = 0.0;
        double mean_bw = 0.0;
        for (const auto &d : fleet)
        {
            mean_mips += d.mips_capacity;
            mean_bw += d.bandwidth_bps;
        }
        if (!fleet.empty())
        {
            mean_mips /= static_cast<double>(fleet.size());
            mean_bw /= static_cast<double>(fleet.size());
        }

        std::vector<ApplicationRequest> apps;
        apps.reserve(config.n_apps);
        // One stream per application: a larger workload extends a smaller one
        // with the same seed instead of reshuffling it.
        for (std::size_t a = 0; a < config.n_apps; ++a)
        {
            Rng rng(derive_seed(seed, kWorkload, a));
            ApplicationRequest app;
            app.app_id = a;
            app.submit_time_s = rng.uniform(0.0, config.horizon_s);
            app.requirement = requirement;

            double estimate = 0.0;
            for (std::size_t k = 0; k < config.tasks_per_app; ++k)
            {
                Task t;
                t.task_id = static_cast<std::uint32_t>(k);
                t.length_mi = config.task_length_mi;
                t.data_size_b = std::floor(rng.uniform(config.data_size_min_b, config.data_size_max_b));
                double left = config.task_length_mi;
                while (left > 0.0)
                {
                    const double chunk = std::min(left, config.subtask_length_mi);
                    t.subtasks.push_back(chunk);
                    left -= chunk;
                }
                if (!fleet.empty())
                    estimate += t.length_mi / mean_mips + t.data_size_b * 8.0 / mean_bw;
                app.tasks.push_back(std::move(t));
            }

            const double slack = rng.uniform(config.deadline_slack_min, config.deadline_slack_max);
            app.deadline_s = app.submit_time_s + estimate + std::max(slack * estimate, config.min_deadline_slack_s);
            apps.push_back(std::move(app));
        }
        return apps;
    }

    std::vector<UtilizationTrace> build_traces(const ScenarioConfig &config, std::uint64_t seed)
    {
        if (!config.trace_dir.empty())
            return load_trace_dir(config.trace_dir);

        Rng rng(derive_seed(seed, kTraces));
        std::vector<UtilizationTrace> traces;
        traces.reserve(config.synth_traces);
        for (std::size_t i = 0; i < config.synth_traces; ++i)
        {
            const double mean = rng.uniform(config.synth_mean_min, config.synth_mean_max);
            traces.push_back(synth_trace(derive_seed(seed, kTraces, i + 1), config.synth_trace_length, mean,
                                         config.synth_jitter, i));
        }
        return traces;
    }

    namespace
    {
        struct Running
        {
            std::size_t task = 0;
            double start_s = 0.0;
            double end_s = 0.0;
            ExecutionDraw draw;
        };

        struct DeviceState
        {
            FogDevice dev;
            FogDevice initial;
            const UtilizationTrace *trace = nullptr;
            PowerModel power;
            std::deque<std::size_t> queue;
            double queued_nominal_s = 0.0;
            std::optional<Running> running;
            double accounted_until = 0.0;
            std::uint64_t version = 0;
            bool depleted = false;
            double depleted_at = 0.0;
            double idle_energy = 0.0;
            double task_energy = 0.0;

            double extra_utilization() const { return running ? running->draw.variation : 0.0; }
        };

        struct TaskState
        {
            std::size_t app = 0;
            std::size_t index = 0;
            double submit_s = 0.0;
            double alloc_s = 0.0;
            double budget_s = 0.0;
            int attempts = 0;
            Features decision_features;
            DeviceId device = 0;
        };

        class Simulation
        {
        public:
            Simulation(const ScenarioConfig &config, Policy policy, std::uint64_t seed,
                       std::span<const UtilizationTrace> traces, const RunOptions &options)
                : config_(config), policy_(policy), seed_(seed), options_(options), window_(config.training_window)
            {
                result_.policy = policy;
                result_.seed = seed;
                result_.traces.assign(traces.begin(), traces.end());

                auto fleet = build_fleet(config, seed);
                const auto mapping = assign_traces(fleet, result_.traces, derive_seed(seed, kAssign));
                for (auto &d : fleet)
                {
                    d.trace_id = mapping.at(d.id);
                    DeviceState s;
                    s.dev = d;
                    s.initial = d;
                    s.trace = &result_.traces[d.trace_id];
                    s.power = PowerModel::of(d);
                    devices_.push_back(std::move(s));
                }

                const Requirement req = policy == Policy::BaselinePowerMin ? Requirement::DeadlineAware
                                                                           : static_cast<Requirement>(policy);
                apps_ = build_workload(config, seed, fleet, req);

                // Delay and response are measured from the user's submission. Task k
                // must finish by its milestone: the application deadline scaled by the
                // nominal work of tasks 0..k.
                double mean_mips = 0.0, mean_bw = 0.0;
                for (const auto &d : fleet)
                {
                    mean_mips += d.mips_capacity;
                    mean_bw += d.bandwidth_bps;
                }
                mean_mips /= static_cast<double>(std::max<std::size_t>(1, fleet.size()));
                mean_bw /= static_cast<double>(std::max<std::size_t>(1, fleet.size()));
                for (std::size_t a = 0; a < apps_.size(); ++a)
                {
                    const auto &app = apps_[a];
                    double estimate = 0.0;
                    std::vector<double> per_task;
                    for (const auto &t : app.tasks)
                    {
                        per_task.push_back(t.length_mi / mean_mips + t.data_size_b * 8.0 / mean_bw);
                        estimate += per_task.back();
                    }
                    const double allowed = app.deadline_s - app.submit_time_s;
                    double done = 0.0;
                    for (std::size_t k = 0; k < app.tasks.size(); ++k)
                    {
                        done += per_task[k];
                        TaskState ts;
                        ts.app = a;
                        ts.index = k;
                        ts.submit_s = app.submit_time_s;
                        ts.budget_s = k + 1 == app.tasks.size() || estimate <= 0.0 ? allowed : done * allowed / estimate;
                        tasks_.push_back(ts);
                    }
                }
                result_.tasks_total = tasks_.size();

                models_.exec_time = cold_start_model(Schema::ExecTimeFull, fleet, config.task_length_mi);
                models_.energy = cold_start_model(Schema::EnergyFull, fleet, config.task_length_mi);
                models_.snapshot_id = 0;
                result_.model_snapshots.push_back(models_);

                alloc_options_.hybrid_weight = config.hybrid_weight;
                alloc_options_.safety_margin = config.safety_margin;
            }

            SimResult finish()
            {
                for (std::size_t a = 0; a < apps_.size(); ++a)
                {
                    if (!apps_[a].tasks.empty())
                        queue_.schedule(apps_[a].submit_time_s, EventKind::AppArrival, a);
                }

                double last_time = 0.0;
                while (!queue_.empty())
                {
                    if (resolved_ == tasks_.size() && queue_.top().time_s > config_.horizon_s)
                        break;
                    const Event ev = queue_.pop();
                    if (++result_.events_processed > config_.event_cap)
                        throw DiagnosticAbort("event cap of " + std::to_string(config_.event_cap) + " exceeded at t=" +
                                              format_double(ev.time_s));
                    last_time = ev.time_s;
                    handle(ev);
                }

                const double end = std::max(config_.horizon_s, last_time);
                result_.end_time_s = end;
                for (auto &d : devices_)
                {
                    if (!d.depleted && d.accounted_until < end)
                        d.idle_energy += settle(d, end);
                    DeviceSummary s;
                    s.initial = d.initial;
                    s.final_state = d.dev;
                    s.depleted = d.depleted;
                    s.depleted_at_s = d.depleted_at;
                    s.accounted_until_s = d.depleted ? d.depleted_at : std::max(end, d.accounted_until);
                    s.idle_energy_j = d.idle_energy;
                    s.task_energy_j = d.task_energy;
                    result_.devices.push_back(s);
                }

                result_.tasks_in_flight = tasks_.size() - result_.tasks_completed - result_.tasks_failed;
                result_.report =
                    aggregate(records_, PenaltyRates{config_.sla_alpha, config_.sla_beta},
                              Prices{config_.price_per_million_msgs, config_.price_per_million_conn_min,
                                     config_.messages_per_task});
                result_.report.tasks_failed = result_.tasks_failed;
                if (options_.record_logs)
                    result_.task_records = std::move(records_);
                return std::move(result_);
            }

        private:
            void handle(const Event &ev)
            {
                const double now = ev.time_s;
                switch (ev.kind)
                {
                case EventKind::AppArrival: {
                    dispatch(task_index(ev.subject, 0), now);
                    break;
                }
                case EventKind::TaskStart: {
                    auto &d = devices_[ev.subject];
                    if (!d.depleted && !d.running && !d.queue.empty())
                        start_next(d, now);
                    break;
                }
                case EventKind::TaskComplete: {
                    auto &d = devices_[ev.subject];
                    if (ev.version == d.version)
                        complete(d, now);
                    break;
                }
                case EventKind::DeviceDepleted: {
                    auto &d = devices_[ev.subject];
                    if (ev.version == d.version && !d.depleted)
                        deplete(d, now);
                    break;
                }
                case EventKind::RetrainModels:
                    retrain();
                    break;
                }
            }

            std::size_t task_index(std::size_t app, std::size_t k) const { return app * config_.tasks_per_app + k; }

            const Task &task_of(std::size_t t) const { return apps_[tasks_[t].app].tasks[tasks_[t].index]; }

            double settle(DeviceState &d, double now)
            {
                const double e = energy_over(d.power, *d.trace, d.accounted_until, now, d.extra_utilization());
                drain_battery(d.dev, e);
                d.accounted_until = now;
                return e;
            }

            void schedule_depletion(DeviceState &d, double now)
            {
                if (d.dev.mains_powered || d.depleted)
                    return;
                const double t = depletion_time(d.power, *d.trace, d.accounted_until, d.dev.remaining_energy_j(),
                                                d.extra_utilization());
                if (!std::isfinite(t))
                    return;
                if (d.running && t >= d.running->end_s)
                    return; // re-evaluated when the task completes
                queue_.schedule(std::max(t, now), EventKind::DeviceDepleted, d.dev.id, d.version);
            }

            Candidate candidate_for(const DeviceState &d, const Task &task, double now) const
            {
                Candidate c;
                c.device = d.dev;
                if (!d.dev.mains_powered)
                {
                    const double pending =
                        energy_over(d.power, *d.trace, d.accounted_until, now, d.extra_utilization());
                    c.device.battery_pct = std::max(0.0, d.dev.battery_pct - pending / d.dev.battery_capacity_j);
                }

                const double u = sample_utilization(*d.trace, now);
                c.current_utilization = d.running ? std::min(1.0, u + d.running->draw.variation) : u;

                const double nominal = nominal_service_time(task, d.dev);
                double backlog = d.queued_nominal_s;
                if (d.running)
                    backlog += std::max(0.0, d.running->end_s - now);

                c.features.cpu_utilization = c.current_utilization;
                c.features.mobility_m = d.dev.distance_m;
                c.features.net_comm_s = task.data_size_b * 8.0 / d.dev.bandwidth_bps;
                c.features.response_time_s = backlog;
                c.features.energy_usage_j = power_at(d.power, c.current_utilization) * nominal;
                return c;
            }

            void dispatch(std::size_t t, double now)
            {
                auto &ts = tasks_[t];
                const auto &app = apps_[ts.app];
                const auto &task = task_of(t);

                std::vector<Candidate> candidates;
                candidates.reserve(devices_.size());
                for (const auto &d : devices_)
                {
                    if (!d.depleted)
                        candidates.push_back(candidate_for(d, task, now));
                }
                if (candidates.empty())
                {
                    fail_permanently(t, now);
                    return;
                }

                const AllocationDecision decision = policy_ == Policy::BaselinePowerMin
                                                        ? baseline_power_min(candidates, app, now)
                                                        : allocate(candidates, app, models_, alloc_options_, now);
                if (!decision.chosen_device_id)
                {
                    fail_permanently(t, now);
                    return;
                }

                const DeviceId chosen = *decision.chosen_device_id;
                const auto it = std::find_if(candidates.begin(), candidates.end(),
                                             [chosen](const Candidate &c) { return c.device.id == chosen; });
                Features features = it->features;
                features.power_available =
                    predicted_power_available(*it, models_, alloc_options_.safety_margin);

                if (options_.record_logs)
                {
                    DecisionLogEntry entry;
                    entry.decision = decision;
                    entry.requirement = app.requirement;
                    entry.task_id = task.task_id;
                    entry.model_snapshot = models_.snapshot_id;
                    if (options_.record_candidates)
                        entry.candidates = std::move(candidates);
                    result_.decisions.push_back(std::move(entry));
                }

                ts.alloc_s = now;
                ts.decision_features = features;
                ts.device = chosen;

                auto &d = devices_[chosen];
                d.queue.push_back(t);
                d.queued_nominal_s += nominal_service_time(task, d.dev);
                if (!d.running)
                    queue_.schedule(now, EventKind::TaskStart, chosen);
            }

            void start_next(DeviceState &d, double now)
            {
                d.idle_energy += settle(d, now);

                const std::size_t t = d.queue.front();
                d.queue.pop_front();
                const auto &task = task_of(t);
                d.queued_nominal_s = d.queue.empty() ? 0.0 : d.queued_nominal_s - nominal_service_time(task, d.dev);

                auto &ts = tasks_[t];
                Rng rng(derive_seed(seed_, kExecution, t * max_attempts + static_cast<std::size_t>(ts.attempts)));
                ExecutionDraw draw = draw_execution(rng, config_);
                draw.background = sample_utilization(*d.trace, now);
                const double service = task_service_time(task, d.dev, draw);

                d.running = Running{t, now, now + service, draw};
                ++d.version;
                queue_.schedule(now + service, EventKind::TaskComplete, d.dev.id, d.version);
                schedule_depletion(d, now);
            }

            void complete(DeviceState &d, double now)
            {
                const double energy = settle(d, now);
                d.task_energy += energy;
                const Running run = *d.running;
                d.running.reset();
                ++d.version;

                auto &ts = tasks_[run.task];
                const auto &app = apps_[ts.app];
                const auto &task = task_of(run.task);

                TaskRecord rec;
                rec.app_id = app.app_id;
                rec.task_id = task.task_id;
                rec.device_id = d.dev.id;
                rec.submit_s = ts.submit_s;
                rec.start_s = run.start_s;
                rec.end_s = now;
                rec.agreed_response_s = ts.budget_s;
                rec.energy_j = energy;
                rec.completed = true;
                records_.push_back(rec);

                TelemetryRecord tel;
                tel.device_id = d.dev.id;
                tel.cpu_utilization = std::min(1.0, sample_utilization(*d.trace, ts.alloc_s) + run.draw.variation);
                tel.mobility_m = ts.decision_features.mobility_m;
                tel.net_comm_s = ts.decision_features.net_comm_s;
                tel.response_time_s = ts.decision_features.response_time_s;
                tel.power_available = ts.decision_features.power_available;
                tel.energy_usage_j = ts.decision_features.energy_usage_j;
                tel.exec_time_s = now - ts.alloc_s;
                tel.energy_consumed_j = energy;
                window_.push(tel);

                if (options_.record_logs)
                {
                    result_.executions.push_back(
                        ExecutionRecord{app.app_id, task.task_id, d.dev.id, run.start_s, now, run.draw, energy, true});
                    result_.telemetry.push_back(TelemetryRow{now, tel});
                }

                ++result_.tasks_completed;
                ++completions_;
                if (completions_ % config_.retrain_every == 0)
                    queue_.schedule(now, EventKind::RetrainModels);

                if (!d.queue.empty())
                    start_next(d, now);
                else
                    schedule_depletion(d, now);

                resolve(run.task, now);
            }

            void deplete(DeviceState &d, double now)
            {
                const double energy = settle(d, now);
                d.dev.battery_pct = 0.0;
                d.depleted = true;
                d.depleted_at = now;
                ++d.version;

                std::vector<std::size_t> redispatch;
                if (d.running)
                {
                    d.task_energy += energy;
                    const Running run = *d.running;
                    d.running.reset();
                    auto &ts = tasks_[run.task];
                    const auto &task = task_of(run.task);
                    ++result_.failed_attempts;

                    TaskRecord rec;
                    rec.app_id = apps_[ts.app].app_id;
                    rec.task_id = task.task_id;
                    rec.device_id = d.dev.id;
                    rec.submit_s = ts.submit_s;
                    rec.start_s = run.start_s;
                    rec.end_s = now;
                    rec.agreed_response_s = ts.budget_s;
                    rec.energy_j = energy;
                    rec.completed = false;
                    records_.push_back(rec);
                    if (options_.record_logs)
                        result_.executions.push_back(ExecutionRecord{rec.app_id, rec.task_id, d.dev.id, run.start_s,
                                                                     now, run.draw, energy, false});

                    if (++ts.attempts < max_attempts)
                        redispatch.push_back(run.task);
                    else
                        fail_permanently(run.task, now);
                }
                else
                {
                    d.idle_energy += energy;
                }

                // Queued tasks never started here; they go back to the allocator as they are.
                redispatch.insert(redispatch.end(), d.queue.begin(), d.queue.end());
                d.queue.clear();
                d.queued_nominal_s = 0.0;
                for (std::size_t t : redispatch)
                    dispatch(t, now);
            }

            void fail_permanently(std::size_t t, double now)
            {
                ++result_.tasks_failed;
                resolve(t, now);
            }

            // Marks task t finished (either way) and releases its successor.
            void resolve(std::size_t t, double now)
            {
                ++resolved_;
                const auto &ts = tasks_[t];
                if (ts.index + 1 < config_.tasks_per_app)
                {
                    dispatch(t + 1, now);
                }
            }

            void retrain()
            {
                const FitOptions opts{1e-10, true};
                try
                {
                    models_.exec_time = fit(window_, Schema::ExecTimeFull, opts);
                }
                catch (const InsufficientData &)
                {
                }
                catch (const RankDeficient &)
                {
                }
                try
                {
                    models_.energy = fit(window_, Schema::EnergyFull, opts);
                }
                catch (const InsufficientData &)
                {
                }
                catch (const RankDeficient &)
                {
                }
                ++models_.snapshot_id;
                result_.model_snapshots.push_back(models_);
            }

            const ScenarioConfig &config_;
            Policy policy_;
            std::uint64_t seed_;
            RunOptions options_;
            AllocationOptions alloc_options_;

            SimResult result_;
            std::vector<DeviceState> devices_;
            std::vector<ApplicationRequest> apps_;
            std::vector<TaskState> tasks_;
            std::vector<TaskRecord> records_;
            EventQueue queue_;
            TrainingWindow window_;
            ModelSet models_;
            std::size_t resolved_ = 0;
            std::size_t completions_ = 0;
        };
    } // namespace

    SimResult run(const ScenarioConfig &config, Policy policy, std::uint64_t seed,
                  std::span<const UtilizationTrace> traces, const RunOptions &options)
    {
        validate_config(config);
        if (traces.empty())
            throw EmptyTraceSet();
        Simulation sim(config, policy, seed, traces, options);
        return sim.finish();
    }

    SimResult run(const ScenarioConfig &config, Policy policy, std::uint64_t seed, const RunOptions &options)
    {
        validate_config(config);
        const auto traces = build_traces(config, seed);
        return run(config, policy, seed, traces, options);
    }

    std::string decision_log_csv(const SimResult &result)
    {
        std::string out = "time_s,app_id,policy,device_id,etp_s,eec_j,filtered_fallback\n";
        for (const auto &e : result.decisions)
        {
            const auto &d = e.decision;
            out += format_double(d.decided_at_s) + ',' + std::to_string(d.app_id) + ',' +
                   std::string(to_string(d.policy)) + ',' +
                   (d.chosen_device_id ? std::to_string(*d.chosen_device_id) : std::string()) + ',' +
                   format_double(d.predicted_exec_s) + ',' + format_double(d.predicted_energy_j) + ',' +
                   (d.filtered_fallback ? "1" : "0") + '\n';
        }
        return out;
    }

    std::string telemetry_log_csv(const SimResult &result)
    {
        std::string out = "time_s,device_id,cpu_util,mobility_m,netcomm_s,resptime_s,power_avail,energy_j,exec_s\n";
        for (const auto &row : result.telemetry)
        {
            const auto &r = row.record;
            out += format_double(row.time_s) + ',' + std::to_string(r.device_id) + ',' +
                   format_double(r.cpu_utilization) + ',' + format_double(r.mobility_m) + ',' +
                   format_double(r.net_comm_s) + ',' + format_double(r.response_time_s) + ',' +
                   format_double(r.power_available) + ',' + format_double(r.energy_consumed_j) + ',' +
                   format_double(r.exec_time_s) + '\n';
        }
        return out;
    }

} // namespace fogsim
