#include "fogsim/alloc.hpp"
#include "fogsim/config.hpp"
#include "fogsim/energy.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/regression.hpp"
#include "fogsim/sim.hpp"
#include "fogsim/sweep.hpp"
#include "fogsim/trace.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fogsim;

#define FIELD(cls, name) def_readwrite(#name, &cls::name)

PYBIND11_MODULE(_fogsim, m)
{
    m.doc() = "Energy and deadline aware task allocation on simulated fog devices.";

    py::register_exception<Error>(m, "FogsimError", PyExc_ValueError);

    py::enum_<Policy>(m, "Policy")
        .value("DeadlineAware", Policy::DeadlineAware)
        .value("EnergyAware", Policy::EnergyAware)
        .value("Hybrid", Policy::Hybrid)
        .value("BaselinePowerMin", Policy::BaselinePowerMin);
    m.def("parse_policy", [](const std::string &name) { return parse_policy(name); });

    py::enum_<Requirement>(m, "Requirement")
        .value("DeadlineAware", Requirement::DeadlineAware)
        .value("EnergyAware", Requirement::EnergyAware)
        .value("Hybrid", Requirement::Hybrid);

    py::enum_<Schema>(m, "Schema")
        .value("ExecTimeBase", Schema::ExecTimeBase)
        .value("ExecTimeFull", Schema::ExecTimeFull)
        .value("EnergyFull", Schema::EnergyFull);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .FIELD(ScenarioConfig, n_devices)
        .FIELD(ScenarioConfig, n_servers)
        .FIELD(ScenarioConfig, n_apps)
        .FIELD(ScenarioConfig, tasks_per_app)
        .FIELD(ScenarioConfig, task_length_mi)
        .FIELD(ScenarioConfig, horizon_s)
        .FIELD(ScenarioConfig, battery_capacity_j)
        .FIELD(ScenarioConfig, policies)
        .FIELD(ScenarioConfig, seeds)
        .FIELD(ScenarioConfig, hybrid_weight)
        .FIELD(ScenarioConfig, safety_margin)
        .FIELD(ScenarioConfig, retrain_every)
        .FIELD(ScenarioConfig, trace_dir)
        .FIELD(ScenarioConfig, synth_traces)
        .FIELD(ScenarioConfig, synth_trace_length)
        .FIELD(ScenarioConfig, app_sweep_devices)
        .FIELD(ScenarioConfig, device_sweep_apps)
        .FIELD(ScenarioConfig, jobs)
        .def("dump", [](const ScenarioConfig &c) { return dump_config(c); })
        .def("__eq__", [](const ScenarioConfig &a, const ScenarioConfig &b) { return a == b; });
    m.def("parse_config", [](const std::string &text) { return parse_config(text); });
    m.def("load_config", [](const std::string &path) { return load_config(path); });

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("avg_delay_s", &RunReport::avg_delay_s)
        .def_readonly("avg_processing_s", &RunReport::avg_processing_s)
        .def_readonly("total_processing_s", &RunReport::total_processing_s)
        .def_readonly("total_processing_cost", &RunReport::total_processing_cost)
        .def_readonly("sla_violation_count", &RunReport::sla_violation_count)
        .def_readonly("sla_violation_pct", &RunReport::sla_violation_pct)
        .def_readonly("total_penalty", &RunReport::total_penalty)
        .def_readonly("total_energy_j", &RunReport::total_energy_j)
        .def_readonly("tasks_completed", &RunReport::tasks_completed)
        .def_readonly("tasks_failed", &RunReport::tasks_failed)
        .def("__eq__", [](const RunReport &a, const RunReport &b) { return a == b; });

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("report", &SimResult::report)
        .def_readonly("tasks_total", &SimResult::tasks_total)
        .def_readonly("tasks_completed", &SimResult::tasks_completed)
        .def_readonly("tasks_failed", &SimResult::tasks_failed)
        .def_readonly("tasks_in_flight", &SimResult::tasks_in_flight)
        .def_readonly("end_time_s", &SimResult::end_time_s)
        .def("decision_log_csv", [](const SimResult &r) { return decision_log_csv(r); })
        .def("telemetry_log_csv", [](const SimResult &r) { return telemetry_log_csv(r); });

    m.def(
        "run",
        [](const ScenarioConfig &config, Policy policy, std::uint64_t seed) {
            py::gil_scoped_release release;
            return run(config, policy, seed);
        },
        py::arg("config"), py::arg("policy"), py::arg("seed") = 1);

    m.def(
        "run_sweep",
        [](const std::string &preset, const ScenarioConfig &config) {
            const auto p = parse_preset(preset);
            py::gil_scoped_release release;
            return sweep_csv(run_sweep(p, config));
        },
        py::arg("preset"), py::arg("config"), "Runs a sweep preset and returns the report CSV.");
    m.def(
        "summarize", [](const std::string &csv) { return format_summary(summarize(csv)); }, py::arg("csv"));

    py::class_<TelemetryRecord>(m, "TelemetryRecord")
        .def(py::init<>())
        .FIELD(TelemetryRecord, device_id)
        .FIELD(TelemetryRecord, cpu_utilization)
        .FIELD(TelemetryRecord, mobility_m)
        .FIELD(TelemetryRecord, net_comm_s)
        .FIELD(TelemetryRecord, response_time_s)
        .FIELD(TelemetryRecord, power_available)
        .FIELD(TelemetryRecord, energy_usage_j)
        .FIELD(TelemetryRecord, exec_time_s)
        .FIELD(TelemetryRecord, energy_consumed_j);

    py::class_<Features>(m, "Features")
        .def(py::init<>())
        .FIELD(Features, cpu_utilization)
        .FIELD(Features, mobility_m)
        .FIELD(Features, net_comm_s)
        .FIELD(Features, response_time_s)
        .FIELD(Features, power_available)
        .FIELD(Features, energy_usage_j)
        .FIELD(Features, exec_time_s);

    py::class_<RegressionModel>(m, "RegressionModel")
        .def_readonly("schema", &RegressionModel::schema)
        .def_readonly("intercept", &RegressionModel::intercept)
        .def_readonly("coefficients", &RegressionModel::coefficients)
        .def_readonly("residual_rmse", &RegressionModel::residual_rmse)
        .def_readonly("n_observations", &RegressionModel::n_observations);

    m.def(
        "fit",
        [](const std::vector<TelemetryRecord> &records, Schema schema) { return fit(records, schema); },
        py::arg("records"), py::arg("schema"));
    m.def("predict_exec_time", &predict_exec_time, py::arg("model"), py::arg("features"));
    m.def("predict_energy", &predict_energy, py::arg("model"), py::arg("features"));

    py::class_<PowerModel>(m, "PowerModel")
        .def(py::init(&PowerModel::make), py::arg("idle_w"), py::arg("max_w"))
        .def_readonly("power_idle_w", &PowerModel::power_idle_w)
        .def_readonly("power_max_w", &PowerModel::power_max_w);
    m.def("power_at", &power_at, py::arg("model"), py::arg("utilization"));

    py::class_<UtilizationTrace>(m, "UtilizationTrace")
        .def_readonly("samples", &UtilizationTrace::samples)
        .def_readonly("sample_interval_s", &UtilizationTrace::sample_interval_s);
    m.def(
        "parse_trace", [](const std::string &text) { return parse_trace(text); }, py::arg("text"));
    m.def("sample_utilization", &sample_utilization, py::arg("trace"), py::arg("t_s"));
    m.def("energy_over", &energy_over, py::arg("model"), py::arg("trace"), py::arg("t0_s"), py::arg("t1_s"),
          py::arg("extra_utilization") = 0.0);

    py::class_<Score>(m, "Score")
        .def(py::init([](DeviceId id, double etp, double eec) { return Score{id, etp, eec}; }), py::arg("device_id"),
             py::arg("etp_s"), py::arg("eec_j"))
        .def_readonly("device_id", &Score::device_id)
        .def_readonly("etp_s", &Score::etp_s)
        .def_readonly("eec_j", &Score::eec_j);
    m.def(
        "select_deadline", [](const std::vector<Score> &s) { return select_deadline(s); }, py::arg("scores"));
    m.def(
        "select_energy", [](const std::vector<Score> &s) { return select_energy(s); }, py::arg("scores"));
    m.def(
        "select_hybrid", [](const std::vector<Score> &s, double w) { return select_hybrid(s, w); },
        py::arg("scores"), py::arg("weight") = 0.5);

    m.def(
        "sla_penalty",
        [](double response_s, double agreed_s, double alpha, double beta) {
            const auto o = sla_penalty(SlaTerms{alpha, beta, agreed_s}, response_s);
            return py::make_tuple(o.violated, o.penalty);
        },
        py::arg("response_s"), py::arg("agreed_response_s"), py::arg("alpha") = 1.0, py::arg("beta") = 0.5);
    m.def("processing_cost", &processing_cost, py::arg("message_count"), py::arg("connection_minutes"),
          py::arg("price_per_million_msgs") = 1.65, py::arg("price_per_million_conn_min") = 0.132);
}
