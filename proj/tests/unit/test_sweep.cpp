#include "fogsim/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <tuple>

using namespace fogsim;

namespace
{
    // Small scenario so a full preset finishes in well under a second per run.
    ScenarioConfig light()
    {
        ScenarioConfig c;
        c.tasks_per_app = 2;
        c.app_sweep_devices = 6;
        c.device_sweep_apps = 20;
        c.synth_traces = 5;
        c.synth_trace_length = 24;
        return c;
    }

    const char *const fixture_csv =
        "policy,seed,n_devices,n_apps,avg_delay_s,avg_proc_s,total_cost,sla_viol_pct,total_penalty,total_energy_j,"
        "completed,failed\n"
        "BaselinePowerMin,1,50,70,10,4,2,30,12,1000,700,0\n"
        "BaselinePowerMin,2,50,70,10,6,4,10,8,1400,698,2\n"
        "EnergyAware,1,50,70,7,3,2,20,6,900,700,0\n"
        "EnergyAware,2,50,70,9,5,2,10,6,700,700,0\n"
        "EnergyAware,1,50,140,1,1,1,0,0,1,1400,0\n"
        "BaselinePowerMin,1,50,140,0,2,1,0,0,2,1400,0\n";
} // namespace

TEST_CASE("presets")
{
    CHECK(parse_preset("app") == SweepPreset::App);
    CHECK(parse_preset("device") == SweepPreset::Device);
    CHECK_THROWS_AS(parse_preset("apps"), ConfigError);
    CHECK(sweep_points(SweepPreset::App) == std::vector<std::size_t>{70, 140, 210, 280, 350, 420, 490, 560});
    CHECK(sweep_points(SweepPreset::Device) == std::vector<std::size_t>{10, 20, 30, 40, 50});
}

TEST_CASE("app sweep row count and order")
{
    auto c = light();
    c.seeds = {1, 2, 3};
    const auto rows = run_sweep(SweepPreset::App, c);
    CHECK(rows.size() == 8 * 4 * 3);
    for (const auto &r : rows)
        CHECK(r.n_devices == 6);
    CHECK(std::is_sorted(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.n_devices, a.n_apps, a.policy, a.seed) < std::tie(b.n_devices, b.n_apps, b.policy, b.seed);
    }));
    const auto csv = sweep_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 96);
}

TEST_CASE("device sweep with one policy and one seed")
{
    auto c = light();
    c.policies = {Policy::Hybrid};
    c.seeds = {4};
    const auto rows = run_sweep(SweepPreset::Device, c);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(rows[i].n_devices == 10 * (i + 1));
        CHECK(rows[i].n_apps == 20);
        CHECK(rows[i].policy == Policy::Hybrid);
    }
}

TEST_CASE("sweeps are reproducible regardless of thread count")
{
    auto c = light();
    c.seeds = {1, 2};
    c.jobs = 1;
    const auto serial = sweep_csv(run_sweep(SweepPreset::Device, c));
    c.jobs = 4;
    CHECK(sweep_csv(run_sweep(SweepPreset::Device, c)) == serial);
}

TEST_CASE("run errors name the failing combination")
{
    auto c = light();
    c.event_cap = 10;
    c.policies = {Policy::EnergyAware};
    c.seeds = {1};
    try
    {
        run_sweep(SweepPreset::Device, c);
        FAIL("expected RunError");
    }
    catch (const Error &e)
    {
        const std::string what = e.what();
        CHECK(what.find("EnergyAware") != std::string::npos);
        CHECK(what.find("n_devices=10") != std::string::npos);
    }
}

TEST_CASE("improvement percentage")
{
    CHECK(*improvement_pct(10, 8) == doctest::Approx(20.0));
    CHECK(*improvement_pct(10, 12) == doctest::Approx(-20.0));
    CHECK_FALSE(improvement_pct(0, 3).has_value());
}

TEST_CASE("summary of the fixture")
{
    const auto t = summarize(fixture_csv);
    CHECK(t.has_improvements);
    REQUIRE(t.points.size() == 2);

    const auto &p70 = t.points[0];
    CHECK(p70.n_apps == 70);
    REQUIRE(p70.policies.size() == 2);
    const auto &base = p70.policies[0];
    const auto &energy = p70.policies[1];
    CHECK(base.policy == "BaselinePowerMin");
    CHECK(base.runs == 2);
    CHECK(base.avg_delay_s == 10);
    CHECK(base.avg_proc_s == 5);
    CHECK(base.total_cost == 3);
    CHECK(base.sla_viol_pct == 20);
    CHECK(base.total_penalty == 10);
    CHECK(base.total_energy_j == 1200);
    CHECK(base.completed == 699);
    CHECK(base.failed == 1);
    CHECK_FALSE(base.impr_avg_delay_pct.has_value());

    CHECK(energy.avg_delay_s == 8);
    CHECK(energy.total_energy_j == 800);
    CHECK(*energy.impr_avg_delay_pct == doctest::Approx(20.0));
    CHECK(*energy.impr_avg_proc_pct == doctest::Approx(20.0));
    CHECK(*energy.impr_total_cost_pct == doctest::Approx(100.0 / 3.0));
    CHECK(*energy.impr_sla_viol_pct == doctest::Approx(25.0));
    CHECK(*energy.impr_total_penalty_pct == doctest::Approx(40.0));
    CHECK(*energy.impr_total_energy_pct == doctest::Approx(100.0 / 3.0));

    // Zero baseline delay leaves that improvement undefined.
    const auto &p140 = t.points[1];
    CHECK(p140.policies[0].policy == "EnergyAware");
    CHECK_FALSE(p140.policies[0].impr_avg_delay_pct.has_value());
    CHECK(*p140.policies[0].impr_avg_proc_pct == doctest::Approx(50.0));

    const auto text = format_summary(t);
    CHECK(text.find("impr_avg_delay_pct") != std::string::npos);
    CHECK(text.find("50,70,EnergyAware,2,8,4,2,15,6,800,700,0,20,20,") != std::string::npos);
    CHECK(text.find("50,140,EnergyAware,1,1,1,1,0,0,1,1400,0,,50,") != std::string::npos);
}

TEST_CASE("single policy input has no improvement columns")
{
    const std::string csv = std::string(report_csv_header) + "\nHybrid,1,10,280,3,4,5,6,7,8,9,0\n";
    const auto t = summarize(csv);
    CHECK_FALSE(t.has_improvements);
    const auto text = format_summary(t);
    CHECK(text.find("impr_") == std::string::npos);
    CHECK(text.find("10,280,Hybrid,1,3,4,5,6,7,8,9,0\n") != std::string::npos);
}

TEST_CASE("malformed reports")
{
    CHECK_THROWS_AS(summarize(""), SchemaMismatch);
    CHECK_THROWS_AS(summarize("policy,seed\nHybrid,1\n"), SchemaMismatch);
    const std::string header(report_csv_header);
    CHECK_THROWS_AS(summarize(header + "\nHybrid,1,10,280,3\n"), SchemaMismatch);
    CHECK_THROWS_AS(summarize(header + "\nHybrid,1,10,280,x,4,5,6,7,8,9,0\n"), SchemaMismatch);
}
