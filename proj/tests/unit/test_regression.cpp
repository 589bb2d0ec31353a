#include "fogsim/energy.hpp"
#include "fogsim/regression.hpp"
#include "fogsim/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fogsim;

namespace
{
    TelemetryRecord record(double cpu, double mob, double net, double resp, double pow, double usage, double exec,
                           double energy)
    {
        TelemetryRecord r;
        r.cpu_utilization = cpu;
        r.mobility_m = mob;
        r.net_comm_s = net;
        r.response_time_s = resp;
        r.power_available = pow;
        r.energy_usage_j = usage;
        r.exec_time_s = exec;
        r.energy_consumed_j = energy;
        return r;
    }

    std::vector<TelemetryRecord> random_records(Rng &rng, std::size_t n, double noise)
    {
        std::vector<TelemetryRecord> recs;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double cpu = rng.uniform(0.0, 1.0);
            const double mob = rng.uniform(5.0, 40.0);
            const double net = rng.uniform(0.0, 3.0);
            const double resp = rng.uniform(0.0, 20.0);
            const double pow = rng.below(2) == 0 ? 0.0 : 1.0;
            const double usage = rng.uniform(0.0, 30.0);
            const double exec = 0.5 + 2.0 * cpu + 0.01 * mob + 0.3 * net + 0.1 * resp - 0.2 * pow + 0.05 * usage +
                                noise * rng.uniform(-1.0, 1.0);
            const double energy = 0.3 + 0.5 * cpu + 0.02 * mob + 0.1 * net + 0.01 * resp + 0.4 * pow + 3.0 * exec +
                                  noise * rng.uniform(-1.0, 1.0);
            recs.push_back(record(cpu, mob, net, resp, pow, usage, exec, energy));
        }
        return recs;
    }
} // namespace

TEST_CASE("schema arity and names")
{
    CHECK(arity(Schema::ExecTimeBase) == 4);
    CHECK(arity(Schema::ExecTimeFull) == 6);
    CHECK(arity(Schema::EnergyFull) == 6);
    for (Schema s : {Schema::ExecTimeBase, Schema::ExecTimeFull, Schema::EnergyFull})
        CHECK(parse_schema(to_string(s)) == s);
    CHECK_THROWS_AS(parse_schema("Quadratic"), SchemaMismatch);
}

TEST_CASE("exact linear data is recovered")
{
    Rng rng(1);
    std::vector<TelemetryRecord> recs;
    for (int i = 0; i < 8; ++i)
    {
        const double x1 = 0.1 * (i + 1);
        recs.push_back(record(x1, rng.uniform(5, 40), rng.uniform(0, 2), rng.uniform(0, 10), 1, 0, 2 + 3 * x1, 0));
    }
    const auto m = fit(recs, Schema::ExecTimeBase);
    CHECK(std::fabs(m.intercept - 2.0) < 1e-9);
    CHECK(std::fabs(m.coefficients[0] - 3.0) < 1e-9);
    for (std::size_t j = 1; j < 4; ++j)
        CHECK(std::fabs(m.coefficients[j]) < 1e-9);
    CHECK(m.residual_rmse < 1e-9);
    CHECK(m.n_observations == 8);

    Features f;
    f.cpu_utilization = 2.0;
    CHECK(predict_exec_time(m, f) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("noise-free random models are recovered to 1e-9")
{
    Rng rng(21);
    for (int round = 0; round < 20; ++round)
    {
        const auto recs = random_records(rng, 30 + rng.below(100), 0.0);
        const auto t = fit(recs, Schema::ExecTimeFull);
        const std::vector<double> expected{2.0, 0.01, 0.3, 0.1, -0.2, 0.05};
        CHECK(std::fabs(t.intercept - 0.5) < 1e-9);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::fabs(t.coefficients[j] - expected[j]) < 1e-9);

        const auto e = fit(recs, Schema::EnergyFull);
        const std::vector<double> expected_e{0.5, 0.02, 0.1, 0.01, 0.4, 3.0};
        CHECK(std::fabs(e.intercept - 0.3) < 1e-9);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(std::fabs(e.coefficients[j] - expected_e[j]) < 1e-9);
    }
}

TEST_CASE("fit agrees with the normal-equations oracle")
{
    Rng rng(77);
    for (int round = 0; round < 50; ++round)
    {
        const auto recs = random_records(rng, 8 + rng.below(193), 0.5);
        for (Schema s : {Schema::ExecTimeBase, Schema::ExecTimeFull, Schema::EnergyFull})
        {
            const auto m = fit(recs, s);
            const auto ref = oracle::normal_equations(s, recs);
            CHECK(m.intercept == doctest::Approx(ref[0]).epsilon(1e-6));
            for (std::size_t j = 0; j < m.coefficients.size(); ++j)
                CHECK(m.coefficients[j] == doctest::Approx(ref[j + 1]).epsilon(1e-6));

            // Residual summary from the oracle coefficients.
            double sse = 0.0;
            for (const auto &r : recs)
            {
                const auto x = oracle::predictors(s, r);
                double pred = ref[0];
                for (std::size_t j = 0; j < x.size(); ++j)
                    pred += ref[j + 1] * x[j];
                const double y = oracle::target(s, r);
                sse += (y - pred) * (y - pred);
            }
            const double dof = static_cast<double>(recs.size() - arity(s) - 1);
            CHECK(m.residual_rmse == doctest::Approx(std::sqrt(sse / dof)).epsilon(1e-6));
        }
    }
}

TEST_CASE("degenerate windows")
{
    const auto r = record(0.3, 10, 1, 2, 1, 5, 1.5, 4);
    const std::vector<TelemetryRecord> same(20, r);
    CHECK_THROWS_AS(fit(same, Schema::ExecTimeFull), RankDeficient);

    CHECK_THROWS_AS(fit(std::vector<TelemetryRecord>(6, r), Schema::ExecTimeFull), InsufficientData);
    CHECK_THROWS_AS(fit(std::vector<TelemetryRecord>{}, Schema::ExecTimeBase), InsufficientData);

    // Two identical columns.
    Rng rng(4);
    std::vector<TelemetryRecord> collinear;
    for (int i = 0; i < 30; ++i)
    {
        const double v = rng.uniform(0, 1);
        collinear.push_back(record(v, v, rng.uniform(0, 1), rng.uniform(0, 1), 1, 0, rng.uniform(0, 1), 0));
    }
    CHECK_THROWS_AS(fit(collinear, Schema::ExecTimeBase), RankDeficient);
}

TEST_CASE("constant columns can be pinned to zero")
{
    Rng rng(9);
    std::vector<TelemetryRecord> recs;
    for (int i = 0; i < 40; ++i)
    {
        const double cpu = rng.uniform(0, 1);
        const double net = rng.uniform(0, 2);
        recs.push_back(record(cpu, 20.0, net, rng.uniform(0, 5), 1.0, 0.0, 1 + 2 * cpu + net, 0));
    }
    CHECK_THROWS_AS(fit(recs, Schema::ExecTimeFull), RankDeficient);

    FitOptions opt;
    opt.pin_constant_columns = true;
    const auto m = fit(recs, Schema::ExecTimeFull, opt);
    CHECK(m.pinned_mask == ((1u << 1) | (1u << 4) | (1u << 5)));
    CHECK(m.coefficients[1] == 0.0);
    CHECK(m.coefficients[4] == 0.0);
    CHECK(m.coefficients[5] == 0.0);
    CHECK(std::fabs(m.coefficients[0] - 2.0) < 1e-9);
    CHECK(std::fabs(m.coefficients[2] - 1.0) < 1e-9);
    CHECK(std::fabs(m.intercept - 1.0) < 1e-9);
}

TEST_CASE("prediction examples")
{
    RegressionModel m;
    m.schema = Schema::ExecTimeFull;
    m.intercept = 1.0;
    m.coefficients = {2, 0, 0, 0, 0, 0};
    Features f;
    f.cpu_utilization = 0.5;
    CHECK(predict_exec_time(m, f) == 2.0);

    RegressionModel zero;
    zero.schema = Schema::ExecTimeFull;
    zero.coefficients.assign(6, 0.0);
    CHECK(predict_exec_time(zero, f) == epsilon_time_s);

    RegressionModel e;
    e.schema = Schema::EnergyFull;
    e.coefficients = {0, 0, 0, 0, 0, 3};
    Features g;
    g.exec_time_s = 10;
    CHECK(predict_energy(e, g) == 30.0);

    RegressionModel ez;
    ez.schema = Schema::EnergyFull;
    ez.coefficients.assign(6, 0.0);
    CHECK(predict_energy(ez, g) == epsilon_energy_j);

    CHECK_THROWS_AS(predict_energy(m, f), SchemaMismatch);
    CHECK_THROWS_AS(predict_exec_time(e, f), SchemaMismatch);
    RegressionModel short_model = m;
    short_model.coefficients.pop_back();
    CHECK_THROWS_AS(predict_exec_time(short_model, f), SchemaMismatch);
}

TEST_CASE("energy model tracks power times time on held-out rows")
{
    const PowerModel pm = PowerModel::make(1.2, 4.8);
    const double u = 0.35;
    Rng rng(31);
    auto make = [&](int n) {
        std::vector<TelemetryRecord> recs;
        for (int i = 0; i < n; ++i)
        {
            const double exec = rng.uniform(0.2, 12.0);
            recs.push_back(record(u, rng.uniform(5, 40), rng.uniform(0, 2), rng.uniform(0, 10), 1, 0, exec,
                                  power_at(pm, u) * exec));
        }
        return recs;
    };
    FitOptions opt;
    opt.pin_constant_columns = true;
    const auto m = fit(make(60), Schema::EnergyFull, opt);
    for (const auto &r : make(40))
    {
        const double predicted = predict_energy(m, features_of(r));
        CHECK(std::fabs(predicted - r.energy_consumed_j) <= 0.05 * r.energy_consumed_j);
    }
}

TEST_CASE("predictions are affine in each feature")
{
    Rng rng(12);
    const auto m = fit(random_records(rng, 100, 0.3), Schema::ExecTimeFull);
    for (int round = 0; round < 200; ++round)
    {
        Features f;
        f.cpu_utilization = rng.uniform(0, 1);
        f.mobility_m = rng.uniform(5, 40);
        f.net_comm_s = rng.uniform(0, 3);
        f.response_time_s = rng.uniform(0, 20);
        f.power_available = 1;
        f.energy_usage_j = rng.uniform(0, 30);
        const double base = evaluate(m, f);
        const double delta = rng.uniform(-0.5, 0.5);
        Features g = f;
        g.net_comm_s += delta;
        CHECK(evaluate(m, g) - base == doctest::Approx(m.coefficients[2] * delta).epsilon(1e-9).scale(1e-9));
        g = f;
        g.response_time_s += delta;
        CHECK(evaluate(m, g) - base == doctest::Approx(m.coefficients[3] * delta).epsilon(1e-9).scale(1e-9));
    }
}

TEST_CASE("refitting the same window is idempotent")
{
    Rng rng(5);
    TrainingWindow w(50);
    for (const auto &r : random_records(rng, 80, 0.2))
        w.push(r);
    CHECK(w.size() == 50);
    CHECK(fit(w, Schema::EnergyFull) == fit(w, Schema::EnergyFull));
    CHECK_THROWS_AS(TrainingWindow(0), InvalidParameter);
}

TEST_CASE("window keeps the most recent records")
{
    TrainingWindow w(3);
    for (int i = 0; i < 5; ++i)
        w.push(record(0, 0, 0, 0, 1, 0, i, 0));
    REQUIRE(w.size() == 3);
    CHECK(w.records().front().exec_time_s == 2);
    CHECK(w.records().back().exec_time_s == 4);
}

TEST_CASE("cold start")
{
    std::vector<FogDevice> devs(2);
    devs[0].mips_capacity = 3000;
    devs[1].mips_capacity = 5000;
    devs[0].power_idle_w = 0.5;
    devs[1].power_idle_w = 1.5;

    const auto t = cold_start_model(Schema::ExecTimeFull, devs, 3000);
    Features f;
    f.cpu_utilization = 1.0;
    CHECK(predict_exec_time(t, f) == doctest::Approx(0.75));
    CHECK(t.residual_rmse == 0.0);

    const auto e = cold_start_model(Schema::EnergyFull, devs, 3000);
    Features g;
    g.exec_time_s = 10;
    CHECK(predict_energy(e, g) == doctest::Approx(10.0));

    CHECK(cold_start_model(Schema::ExecTimeFull, devs, 3000) == t);
}

TEST_CASE("model dump")
{
    RegressionModel m;
    m.schema = Schema::ExecTimeBase;
    m.intercept = 1.5;
    m.coefficients = {1, 2, 3, 4};
    m.n_observations = 9;
    const std::vector<RegressionModel> ms{m};
    const auto csv = models_to_csv(ms);
    CHECK(csv.rfind("schema,beta0,beta1,beta2,beta3,beta4,beta5,beta6,rmse,n\n", 0) == 0);
    CHECK(csv.find("ExecTimeBase,1.5,1,2,3,4,,,0,9\n") != std::string::npos);
}
