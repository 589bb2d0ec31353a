#include "fogsim/rng.hpp"
#include "fogsim/trace.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

using namespace fogsim;

TEST_CASE("parse scales percents and keeps file order")
{
    const auto t = parse_trace("0\n50\n100");
    REQUIRE(t.samples.size() == 3);
    CHECK(t.samples[0] == 0.0);
    CHECK(t.samples[1] == 0.5);
    CHECK(t.samples[2] == 1.0);
    CHECK(t.sample_interval_s == 300.0);
}

TEST_CASE("constant trace")
{
    const auto t = parse_trace("30\n30\n30\n");
    CHECK(t.samples == std::vector<double>{0.30, 0.30, 0.30});
}

TEST_CASE("malformed lines report their 1-based number")
{
    try
    {
        parse_trace("150");
        FAIL("expected MalformedLine");
    }
    catch (const MalformedLine &e)
    {
        CHECK(e.line_no == 1);
    }

    try
    {
        parse_trace("10\n20\nabc\n");
        FAIL("expected MalformedLine");
    }
    catch (const MalformedLine &e)
    {
        CHECK(e.line_no == 3);
    }

    CHECK_THROWS_AS(parse_trace("-1"), MalformedLine);
    CHECK_THROWS_AS(parse_trace("12.5"), MalformedLine);
    CHECK_THROWS_AS(parse_trace("7x"), MalformedLine);
}

TEST_CASE("blank lines are skipped but still counted")
{
    const auto t = parse_trace("10\n\n20\n");
    CHECK(t.samples.size() == 2);
    try
    {
        parse_trace("10\n\n101\n");
        FAIL("expected MalformedLine");
    }
    catch (const MalformedLine &e)
    {
        CHECK(e.line_no == 3);
    }
}

TEST_CASE("empty input")
{
    CHECK_THROWS_AS(parse_trace(""), EmptyTrace);
    CHECK_THROWS_AS(parse_trace("\n\n"), EmptyTrace);
}

TEST_CASE("serialize then parse is the identity")
{
    Rng rng(11);
    for (int round = 0; round < 50; ++round)
    {
        UtilizationTrace t;
        const auto n = 1 + rng.below(300);
        for (std::uint64_t i = 0; i < n; ++i)
            t.samples.push_back(static_cast<double>(rng.below(101)) / 100.0);
        const auto back = parse_trace(serialize_trace(t));
        CHECK(back.samples == t.samples);
    }
}

TEST_CASE("zero-order hold with wraparound")
{
    UtilizationTrace t;
    t.samples = {0.2, 0.8};
    CHECK(sample_utilization(t, 0.0) == 0.2);
    CHECK(sample_utilization(t, 299.9) == 0.2);
    CHECK(sample_utilization(t, 300.0) == 0.8);
    CHECK(sample_utilization(t, 600.0) == 0.2);
}

TEST_CASE("replay is periodic with period len x interval")
{
    const auto t = synth_trace(5, 7, 0.4, 0.3);
    Rng rng(3);
    for (int i = 0; i < 500; ++i)
    {
        const double x = rng.uniform(0.0, 5000.0);
        const auto k = static_cast<double>(rng.below(5));
        CHECK(sample_utilization(t, x) == sample_utilization(t, x + k * t.period_s()));
        // Constant within one sample interval.
        const double slot_start = std::floor(x / 300.0) * 300.0;
        CHECK(sample_utilization(t, x) == sample_utilization(t, slot_start));
    }
}

TEST_CASE("trace assignment")
{
    std::vector<UtilizationTrace> one(1);
    one[0].samples = {0.1};
    std::vector<FogDevice> dev(1);
    CHECK(assign_traces(dev, one, 123).at(0) == 0);

    std::vector<FogDevice> four(4);
    for (std::size_t i = 0; i < 4; ++i)
        four[i].id = static_cast<DeviceId>(i);
    std::vector<UtilizationTrace> two(2, one[0]);
    CHECK(assign_traces(four, two, 42) == assign_traces(four, two, 42));

    CHECK_THROWS_AS(assign_traces(four, std::vector<UtilizationTrace>{}, 1), EmptyTraceSet);
}

TEST_CASE("assignment covers every trace in almost every seed")
{
    std::vector<FogDevice> devices(100);
    for (std::size_t i = 0; i < devices.size(); ++i)
        devices[i].id = static_cast<DeviceId>(i);
    std::vector<UtilizationTrace> traces(10);
    for (auto &t : traces)
        t.samples = {0.5};

    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        std::set<std::size_t> used;
        for (const auto &[dev, trace] : assign_traces(devices, traces, seed))
            used.insert(trace);
        covered += used.size() == traces.size() ? 1 : 0;
    }

    // P(all 10 used by 100 uniform draws) by inclusion-exclusion.
    double p_all = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= 10; ++k)
    {
        if (k > 0)
            binom = binom * (10 - k + 1) / k;
        p_all += (k % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(1.0 - k / 10.0, 100);
    }
    CHECK(p_all > 0.999);
    CHECK(covered >= 95);
}

TEST_CASE("synthetic traces")
{
    const auto flat = synth_trace(99, 5, 0.4, 0.0);
    CHECK(flat.samples == std::vector<double>(5, 0.4));

    const auto high = synth_trace(1, 1000, 1.0, 0.5);
    for (double s : high.samples)
    {
        CHECK(s <= 1.0);
        CHECK(s >= 0.5);
    }

    CHECK(synth_trace(7, 100, 0.3, 0.2).samples == synth_trace(7, 100, 0.3, 0.2).samples);
    CHECK(synth_trace(7, 100, 0.3, 0.2).samples != synth_trace(8, 100, 0.3, 0.2).samples);

    CHECK_THROWS_AS(synth_trace(1, 0, 0.3, 0.1), InvalidParameter);
    CHECK_THROWS_AS(synth_trace(1, 5, 1.3, 0.1), InvalidParameter);
    CHECK_THROWS_AS(synth_trace(1, 5, 0.3, -0.1), InvalidParameter);
}

TEST_CASE("trace directory loads in file-name order")
{
    const auto dir = std::filesystem::temp_directory_path() / "fogsim_trace_dir_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "b_host") << "20\n40\n";
    std::ofstream(dir / "a_host") << "10\n";

    const auto traces = load_trace_dir(dir);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].samples == std::vector<double>{0.10});
    CHECK(traces[1].samples == std::vector<double>{0.20, 0.40});
    CHECK(traces[0].trace_id == 0);
    CHECK(traces[1].trace_id == 1);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(load_trace_file(dir / "missing"), Error);
}
