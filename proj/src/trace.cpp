#include "fogsim/trace.hpp"

#include "fogsim/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fogsim
{
    MalformedLine::MalformedLine(std::size_t line) : Error("malformed trace line " + std::to_string(line)), line_no(line)
    {
    }

    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }
    } // namespace

    UtilizationTrace parse_trace(std::string_view text, std::size_t trace_id)
    {
        UtilizationTrace trace;
        trace.trace_id = trace_id;

        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto nl = text.find('\n', pos);
            const auto end = nl == std::string_view::npos ? text.size() : nl;
            ++line_no;
            const auto token = trim(text.substr(pos, end - pos));
            if (!token.empty())
            {
                int value = -1;
                const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
                if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0 || value > 100)
                    throw MalformedLine(line_no);
                trace.samples.push_back(static_cast<double>(value) / 100.0);
            }
            if (nl == std::string_view::npos)
                break;
            pos = nl + 1;
        }

        if (trace.samples.empty())
            throw EmptyTrace();
        return trace;
    }

    std::string serialize_trace(const UtilizationTrace &trace)
    {
        std::string out;
        out.reserve(trace.samples.size() * 4);
        for (double s : trace.samples)
        {
            out += std::to_string(static_cast<int>(std::lround(s * 100.0)));
            out += '\n';
        }
        return out;
    }

    UtilizationTrace load_trace_file(const std::filesystem::path &path, std::size_t trace_id)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error("cannot open trace file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_trace(buf.str(), trace_id);
    }

    std::vector<UtilizationTrace> load_trace_dir(const std::filesystem::path &dir)
    {
        std::vector<std::filesystem::path> files;
        for (const auto &entry : std::filesystem::directory_iterator(dir))
        {
            if (entry.is_regular_file())
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());

        std::vector<UtilizationTrace> traces;
        traces.reserve(files.size());
        for (const auto &f : files)
            traces.push_back(load_trace_file(f, traces.size()));
        if (traces.empty())
            throw EmptyTraceSet();
        return traces;
    }

    double sample_utilization(const UtilizationTrace &trace, double t_s)
    {
        const auto n = trace.samples.size();
        const auto slot = static_cast<std::uint64_t>(std::floor(std::max(0.0, t_s) / trace.sample_interval_s));
        return trace.samples[static_cast<std::size_t>(slot % n)];
    }

    std::map<DeviceId, std::size_t> assign_traces(std::span<const FogDevice> devices,
                                                  std::span<const UtilizationTrace> traces, std::uint64_t seed)
    {
        if (traces.empty())
            throw EmptyTraceSet();
        Rng rng(seed);
        std::map<DeviceId, std::size_t> mapping;
        for (const auto &dev : devices)
            mapping[dev.id] = static_cast<std::size_t>(rng.below(traces.size()));
        return mapping;
    }

    UtilizationTrace synth_trace(std::uint64_t seed, std::size_t length, double mean, double jitter,
                                 std::size_t trace_id)
    {
        if (length < 1)
            throw InvalidParameter("synthetic trace length must be >= 1");
        if (!(mean >= 0.0 && mean <= 1.0))
            throw InvalidParameter("synthetic trace mean must lie in [0,1]");
        if (!(jitter >= 0.0) || !std::isfinite(jitter))
            throw InvalidParameter("synthetic trace jitter must be >= 0");

        Rng rng(seed);
        UtilizationTrace trace;
        trace.trace_id = trace_id;
        trace.samples.reserve(length);
        for (std::size_t i = 0; i < length; ++i)
        {
            const double noise = jitter > 0.0 ? rng.uniform(-jitter, jitter) : 0.0;
            trace.samples.push_back(std::clamp(mean + noise, 0.0, 1.0));
        }
        return trace;
    }

} // namespace fogsim
