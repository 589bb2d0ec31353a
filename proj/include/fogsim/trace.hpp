#pragma once

// PlanetLab-style CPU utilization traces: parsing, replay and synthesis.

#include "fogsim/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    inline constexpr double planetlab_interval_s = 300.0;

    struct UtilizationTrace
    {
        std::size_t trace_id = 0;
        std::vector<double> samples; // fractions in [0,1]
        double sample_interval_s = planetlab_interval_s;

        double period_s() const noexcept { return sample_interval_s * static_cast<double>(samples.size()); }
    };

    class MalformedLine : public Error
    {
    public:
        explicit MalformedLine(std::size_t line_no);
        std::size_t line_no;
    };

    class EmptyTrace : public Error
    {
    public:
        EmptyTrace() : Error("trace has no samples") {}
    };

    class EmptyTraceSet : public Error
    {
    public:
        EmptyTraceSet() : Error("no traces available") {}
    };

    /// One integer percent (0..100) per non-empty line. Line numbers are 1-based.
    UtilizationTrace parse_trace(std::string_view text, std::size_t trace_id = 0);

    /// Inverse of parse_trace for traces whose samples are whole percents.
    std::string serialize_trace(const UtilizationTrace &trace);

    UtilizationTrace load_trace_file(const std::filesystem::path &path, std::size_t trace_id = 0);

    /// Loads every regular file in `dir`, sorted by file name; trace ids follow that order.
    std::vector<UtilizationTrace> load_trace_dir(const std::filesystem::path &dir);

    /// Zero-order hold with wraparound: samples[floor(t / interval) mod len].
    double sample_utilization(const UtilizationTrace &trace, double t_s);

    /// Uniform seeded device -> trace index mapping. Devices may share traces.
    std::map<DeviceId, std::size_t> assign_traces(std::span<const FogDevice> devices,
                                                  std::span<const UtilizationTrace> traces, std::uint64_t seed);

    /// samples[i] = clamp(mean + U(-jitter, +jitter), 0, 1).
    UtilizationTrace synth_trace(std::uint64_t seed, std::size_t length, double mean, double jitter,
                                 std::size_t trace_id = 0);

} // namespace fogsim
