import math

import pytest

import fogsim


def small(**extra):
    base = dict(n_devices=6, n_apps=20, tasks_per_app=3, synth_traces=4, synth_trace_length=12)
    base.update(extra)
    return fogsim.config(**base)


def test_defaults_round_trip():
    c = fogsim.ScenarioConfig()
    assert c.n_devices == 50
    assert c.task_length_mi == 3000
    assert fogsim.parse_config(c.dump()) == c


def test_bad_config_raises():
    with pytest.raises(fogsim.FogsimError):
        fogsim.parse_config("n_apps = banana")
    with pytest.raises(ValueError):
        fogsim.config(n_ap=3)


def test_run_is_deterministic():
    c = small()
    a = fogsim.run(c, fogsim.Policy.Hybrid, 7)
    b = fogsim.run(c, fogsim.Policy.Hybrid, 7)
    assert a.report == b.report
    assert a.tasks_completed + a.tasks_failed + a.tasks_in_flight == a.tasks_total == 60
    assert a.decision_log_csv().startswith("time_s,app_id,policy")


def test_sweep_and_summary():
    c = small(policies=[fogsim.Policy.EnergyAware, fogsim.Policy.BaselinePowerMin], seeds=[1])
    csv = fogsim.run_sweep("device", c)
    assert len(csv.strip().splitlines()) == 1 + 5 * 2
    table = fogsim.summarize(csv)
    assert "impr_total_energy_pct" in table.splitlines()[0]


def test_regression_recovers_line():
    recs = []
    for i in range(8):
        r = fogsim.TelemetryRecord()
        r.cpu_utilization = 0.1 * (i + 1)
        r.mobility_m = [5, 9, 14, 22, 30, 35, 7, 18][i]
        r.net_comm_s = [0.4, 0.1, 0.9, 0.3, 0.7, 0.2, 0.8, 0.5][i]
        r.response_time_s = [3, 1, 4, 1, 5, 9, 2, 6][i]
        r.exec_time_s = 2 + 3 * r.cpu_utilization
        recs.append(r)
    m = fogsim.fit(recs, fogsim.Schema.ExecTimeBase)
    assert m.intercept == pytest.approx(2.0, abs=1e-9)
    assert m.coefficients[0] == pytest.approx(3.0, abs=1e-9)
    f = fogsim.Features()
    f.cpu_utilization = 2.0
    assert fogsim.predict_exec_time(m, f) == pytest.approx(8.0)


def test_energy_and_metrics():
    model = fogsim.PowerModel(1.0, 5.0)
    assert fogsim.power_at(model, 0.5) == 3.0
    trace = fogsim.parse_trace("0\n100\n")
    assert fogsim.energy_over(model, trace, 0.0, 600.0) == 1800.0
    assert fogsim.sla_penalty(14, 10) == (True, 3.0)
    assert math.isclose(fogsim.processing_cost(2_000_000, 1_000_000), 3.432)


def test_selection():
    scores = [fogsim.Score(0, 5, 10), fogsim.Score(1, 3, 2), fogsim.Score(2, 7, 8)]
    assert fogsim.select_deadline(scores) == 1
    assert fogsim.select_energy(scores) == 1
    assert fogsim.select_hybrid([fogsim.Score(0, 1, 2), fogsim.Score(1, 2, 1)], 0.5) == 0
