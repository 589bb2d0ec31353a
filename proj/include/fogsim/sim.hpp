#pragma once

// Deterministic discrete-event simulation of a battery-powered Fog fleet.
//
// Applications arrive uniformly over the horizon. Their tasks run as a chain:
// each task is placed by the active policy when its predecessor finishes and
// then waits in the chosen device's FIFO queue. Devices draw power from a
// trace-driven utilization profile; battery devices that run dry fail their
// running task (one retry) and hand their queue back to the allocator.

#include "fogsim/alloc.hpp"
#include "fogsim/config.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/regression.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace fogsim
{
    class RunError : public Error
    {
    public:
        using Error::Error;
    };

    /// Raised when a run exceeds its event cap.
    class DiagnosticAbort : public RunError
    {
    public:
        using RunError::RunError;
    };

    /// Per-execution random draws.
    struct ExecutionDraw
    {
        double availability = 1.0; // CPU availability multiplier
        double variation = 0.0;    // utilization increase while the task runs
        double background = 0.0;   // trace utilization when the task starts
    };

    ExecutionDraw draw_execution(Rng &rng, const ScenarioConfig &config);

    /// Smallest share of a device's cycles a task can get, however loaded the device is.
    inline constexpr double min_cpu_share = 0.05;

    /// mips x availability x (1 - utilization), where utilization is the trace
    /// load plus the execution variation, capped at 1. The share never drops
    /// below min_cpu_share.
    double effective_mips(const FogDevice &dev, const ExecutionDraw &draw);

    /// Sum of subtask MI over effective MIPS, plus data transfer time.
    double task_service_time(const Task &task, const FogDevice &dev, const ExecutionDraw &draw);

    /// Service time on an unloaded device with no fluctuation.
    double nominal_service_time(const Task &task, const FogDevice &dev);

    enum class EventKind : std::uint8_t
    {
        AppArrival,
        TaskStart,
        TaskComplete,
        DeviceDepleted,
        RetrainModels,
    };

    struct Event
    {
        double time_s = 0.0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::AppArrival;
        std::uint64_t subject = 0; // app index, device index or task index depending on kind
        std::uint64_t version = 0; // device state version for invalidation
    };

    /// Min-queue on (time_s, seq). Scheduling into the past throws.
    class EventQueue
    {
    public:
        void schedule(double time_s, EventKind kind, std::uint64_t subject = 0, std::uint64_t version = 0);
        const Event &top() const { return heap_.top(); }
        Event pop();
        bool empty() const noexcept { return heap_.empty(); }
        std::size_t size() const noexcept { return heap_.size(); }
        double now() const noexcept { return now_; }

    private:
        struct Later
        {
            bool operator()(const Event &a, const Event &b) const
            {
                return a.time_s > b.time_s || (a.time_s == b.time_s && a.seq > b.seq);
            }
        };
        std::priority_queue<Event, std::vector<Event>, Later> heap_;
        std::uint64_t next_seq_ = 0;
        double now_ = 0.0;
    };

    std::vector<FogDevice> build_fleet(const ScenarioConfig &config, std::uint64_t seed);

    /// Deadline = submit + estimate + max(slack x estimate, min_deadline_slack_s),
    /// where the estimate uses fleet-mean MIPS and bandwidth.
    std::vector<ApplicationRequest> build_workload(const ScenarioConfig &config, std::uint64_t seed,
                                                   std::span<const FogDevice> fleet, Requirement requirement);

    /// Traces from config.trace_dir, or synthetic ones derived from `seed`.
    std::vector<UtilizationTrace> build_traces(const ScenarioConfig &config, std::uint64_t seed);

    struct DecisionLogEntry
    {
        AllocationDecision decision;
        Requirement requirement = Requirement::DeadlineAware;
        std::uint32_t task_id = 0;
        std::size_t model_snapshot = 0;
        std::vector<Candidate> candidates; // filled only with RunOptions::record_candidates
    };

    struct TelemetryRow
    {
        double time_s = 0.0;
        TelemetryRecord record;
    };

    struct ExecutionRecord
    {
        AppId app_id = 0;
        std::uint32_t task_id = 0;
        DeviceId device_id = 0;
        double start_s = 0.0;
        double end_s = 0.0;
        ExecutionDraw draw;
        double energy_j = 0.0;
        bool completed = true;
    };

    struct DeviceSummary
    {
        FogDevice initial;
        FogDevice final_state;
        bool depleted = false;
        double depleted_at_s = 0.0;
        double accounted_until_s = 0.0; // energy is accounted over [0, accounted_until_s]
        double idle_energy_j = 0.0;
        double task_energy_j = 0.0;
    };

    struct RunOptions
    {
        bool record_logs = true;         // decisions, telemetry, executions, task records
        bool record_candidates = false;  // full candidate snapshots for replay
    };

    struct SimResult
    {
        RunReport report;
        Policy policy = Policy::DeadlineAware;
        std::uint64_t seed = 0;
        std::size_t tasks_total = 0;
        std::size_t tasks_completed = 0;
        std::size_t tasks_failed = 0;
        std::size_t tasks_in_flight = 0;
        std::size_t failed_attempts = 0;
        double end_time_s = 0.0;
        std::uint64_t events_processed = 0;

        std::vector<TaskRecord> task_records;
        std::vector<DecisionLogEntry> decisions;
        std::vector<TelemetryRow> telemetry;
        std::vector<ExecutionRecord> executions;
        std::vector<ModelSet> model_snapshots;
        std::vector<DeviceSummary> devices;
        std::vector<UtilizationTrace> traces;
    };

    SimResult run(const ScenarioConfig &config, Policy policy, std::uint64_t seed, const RunOptions &options = {});
    SimResult run(const ScenarioConfig &config, Policy policy, std::uint64_t seed,
                  std::span<const UtilizationTrace> traces, const RunOptions &options = {});

    std::string decision_log_csv(const SimResult &result);
    std::string telemetry_log_csv(const SimResult &result);

} // namespace fogsim
