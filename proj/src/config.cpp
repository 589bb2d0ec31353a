#include "fogsim/config.hpp"

#include "fogsim/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace fogsim
{
    ParseError::ParseError(std::size_t l, const std::string &what)
        : ConfigError("config line " + std::to_string(l) + ": " + what), line(l)
    {
    }

    UnknownKey::UnknownKey(const std::string &k) : ConfigError("unknown config key: " + k), key(k) {}

    OutOfRange::OutOfRange(const std::string &k, const std::string &why)
        : ConfigError("config key " + k + " out of range: " + why), key(k)
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

        template <typename T>
        T parse_unsigned(std::string_view v)
        {
            T out{};
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
                throw Error("expected a non-negative integer, got '" + std::string(v) + "'");
            return out;
        }

        double parse_real(std::string_view v)
        {
            const double d = parse_double(v);
            if (!std::isfinite(d))
                throw Error("expected a finite number");
            return d;
        }

        std::vector<std::string_view> split_list(std::string_view v)
        {
            std::vector<std::string_view> out;
            for (auto item : split_csv_line(v))
            {
                item = trim(item);
                if (!item.empty())
                    out.push_back(item);
            }
            return out;
        }

        struct Field
        {
            const char *key;
            std::function<void(ScenarioConfig &, std::string_view)> set;
            std::function<std::string(const ScenarioConfig &)> get;
        };

        Field real(const char *key, double ScenarioConfig::*m)
        {
            return {key, [m](ScenarioConfig &c, std::string_view v) { c.*m = parse_real(v); },
                    [m](const ScenarioConfig &c) { return format_double(c.*m); }};
        }

        Field count(const char *key, std::size_t ScenarioConfig::*m)
        {
            return {key, [m](ScenarioConfig &c, std::string_view v) { c.*m = parse_unsigned<std::size_t>(v); },
                    [m](const ScenarioConfig &c) { return std::to_string(c.*m); }};
        }

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = {
                count("n_devices", &ScenarioConfig::n_devices),
                count("n_servers", &ScenarioConfig::n_servers),
                real("device_mips_min", &ScenarioConfig::device_mips_min),
                real("device_mips_max", &ScenarioConfig::device_mips_max),
                real("device_bandwidth_bps", &ScenarioConfig::device_bandwidth_bps),
                real("device_ram_mb", &ScenarioConfig::device_ram_mb),
                real("server_mips", &ScenarioConfig::server_mips),
                real("server_bandwidth_bps", &ScenarioConfig::server_bandwidth_bps),
                real("server_ram_mb", &ScenarioConfig::server_ram_mb),
                real("distance_min_m", &ScenarioConfig::distance_min_m),
                real("distance_max_m", &ScenarioConfig::distance_max_m),
                real("battery_min", &ScenarioConfig::battery_min),
                real("battery_max", &ScenarioConfig::battery_max),
                real("battery_capacity_j", &ScenarioConfig::battery_capacity_j),
                real("power_idle_w", &ScenarioConfig::power_idle_w),
                real("power_max_w", &ScenarioConfig::power_max_w),
                count("n_apps", &ScenarioConfig::n_apps),
                count("tasks_per_app", &ScenarioConfig::tasks_per_app),
                real("task_length_mi", &ScenarioConfig::task_length_mi),
                real("subtask_length_mi", &ScenarioConfig::subtask_length_mi),
                real("data_size_min_b", &ScenarioConfig::data_size_min_b),
                real("data_size_max_b", &ScenarioConfig::data_size_max_b),
                real("horizon_s", &ScenarioConfig::horizon_s),
                real("deadline_slack_min", &ScenarioConfig::deadline_slack_min),
                real("deadline_slack_max", &ScenarioConfig::deadline_slack_max),
                real("min_deadline_slack_s", &ScenarioConfig::min_deadline_slack_s),
                real("cpu_availability_min", &ScenarioConfig::cpu_availability_min),
                real("cpu_availability_max", &ScenarioConfig::cpu_availability_max),
                real("cpu_variation_min", &ScenarioConfig::cpu_variation_min),
                real("cpu_variation_max", &ScenarioConfig::cpu_variation_max),
                {"policies",
                 [](ScenarioConfig &c, std::string_view v) {
                     c.policies.clear();
                     for (auto item : split_list(v))
                         c.policies.push_back(parse_policy(item));
                 },
                 [](const ScenarioConfig &c) {
                     std::string out;
                     for (Policy p : c.policies)
                         out += (out.empty() ? "" : ",") + std::string(to_string(p));
                     return out;
                 }},
                {"seeds",
                 [](ScenarioConfig &c, std::string_view v) {
                     c.seeds.clear();
                     for (auto item : split_list(v))
                         c.seeds.push_back(parse_unsigned<std::uint64_t>(item));
                 },
                 [](const ScenarioConfig &c) {
                     std::string out;
                     for (auto s : c.seeds)
                         out += (out.empty() ? "" : ",") + std::to_string(s);
                     return out;
                 }},
                real("hybrid_weight", &ScenarioConfig::hybrid_weight),
                real("safety_margin", &ScenarioConfig::safety_margin),
                count("training_window", &ScenarioConfig::training_window),
                count("retrain_every", &ScenarioConfig::retrain_every),
                real("sla_alpha", &ScenarioConfig::sla_alpha),
                real("sla_beta", &ScenarioConfig::sla_beta),
                real("price_per_million_msgs", &ScenarioConfig::price_per_million_msgs),
                real("price_per_million_conn_min", &ScenarioConfig::price_per_million_conn_min),
                real("messages_per_task", &ScenarioConfig::messages_per_task),
                {"trace_dir", [](ScenarioConfig &c, std::string_view v) { c.trace_dir = std::string(v); },
                 [](const ScenarioConfig &c) { return c.trace_dir; }},
                count("synth_traces", &ScenarioConfig::synth_traces),
                count("synth_trace_length", &ScenarioConfig::synth_trace_length),
                real("synth_mean_min", &ScenarioConfig::synth_mean_min),
                real("synth_mean_max", &ScenarioConfig::synth_mean_max),
                real("synth_jitter", &ScenarioConfig::synth_jitter),
                {"event_cap",
                 [](ScenarioConfig &c, std::string_view v) { c.event_cap = parse_unsigned<std::uint64_t>(v); },
                 [](const ScenarioConfig &c) { return std::to_string(c.event_cap); }},
                count("app_sweep_devices", &ScenarioConfig::app_sweep_devices),
                count("device_sweep_apps", &ScenarioConfig::device_sweep_apps),
                count("jobs", &ScenarioConfig::jobs),
            };
            return table;
        }
    } // namespace

    ScenarioConfig parse_config(std::string_view text)
    {
        ScenarioConfig config;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto nl = text.find('\n', pos);
            const auto end = nl == std::string_view::npos ? text.size() : nl;
            ++line_no;
            auto line = text.substr(pos, end - pos);
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);

            if (!line.empty())
            {
                const auto eq = line.find('=');
                if (eq == std::string_view::npos)
                    throw ParseError(line_no, "expected 'key = value'");
                const auto key = std::string(trim(line.substr(0, eq)));
                const auto value = trim(line.substr(eq + 1));
                if (key.empty())
                    throw ParseError(line_no, "empty key");

                const auto &table = fields();
                const auto it =
                    std::find_if(table.begin(), table.end(), [&](const Field &f) { return key == f.key; });
                if (it == table.end())
                    throw UnknownKey(key);
                try
                {
                    it->set(config, value);
                }
                catch (const Error &e)
                {
                    throw ParseError(line_no, key + ": " + e.what());
                }
            }
            if (nl == std::string_view::npos)
                break;
            pos = nl + 1;
        }
        validate_config(config);
        return config;
    }

    ScenarioConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config file: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }

    std::string dump_config(const ScenarioConfig &config)
    {
        std::string out;
        for (const auto &f : fields())
        {
            out += f.key;
            out += " = ";
            out += f.get(config);
            out += '\n';
        }
        return out;
    }

    void validate_config(const ScenarioConfig &c)
    {
        auto require = [](bool cond, const char *key, const char *why) {
            if (!cond)
                throw OutOfRange(key, why);
        };
        auto ordered = [&](double lo, double hi, const char *key) { require(lo <= hi, key, "min exceeds max"); };

        require(c.device_mips_min > 0.0, "device_mips_min", "must be > 0");
        ordered(c.device_mips_min, c.device_mips_max, "device_mips_max");
        require(c.device_bandwidth_bps > 0.0, "device_bandwidth_bps", "must be > 0");
        require(c.server_mips > 0.0, "server_mips", "must be > 0");
        require(c.server_bandwidth_bps > 0.0, "server_bandwidth_bps", "must be > 0");
        require(c.distance_min_m >= 0.0, "distance_min_m", "must be >= 0");
        ordered(c.distance_min_m, c.distance_max_m, "distance_max_m");
        require(c.battery_min >= 0.0 && c.battery_max <= 1.0, "battery_min", "battery fractions must lie in [0,1]");
        ordered(c.battery_min, c.battery_max, "battery_max");
        require(c.battery_capacity_j > 0.0, "battery_capacity_j", "must be > 0");
        require(c.power_idle_w >= 0.0 && c.power_idle_w < c.power_max_w, "power_idle_w", "need 0 <= idle < max");
        require(c.tasks_per_app >= 1, "tasks_per_app", "must be >= 1");
        require(c.task_length_mi >= 0.0, "task_length_mi", "must be >= 0");
        require(c.subtask_length_mi > 0.0, "subtask_length_mi", "must be > 0");
        require(c.data_size_min_b >= 0.0, "data_size_min_b", "must be >= 0");
        ordered(c.data_size_min_b, c.data_size_max_b, "data_size_max_b");
        require(c.horizon_s > 0.0, "horizon_s", "must be > 0");
        require(c.deadline_slack_min >= 0.0, "deadline_slack_min", "must be >= 0");
        ordered(c.deadline_slack_min, c.deadline_slack_max, "deadline_slack_max");
        require(c.min_deadline_slack_s >= 0.0, "min_deadline_slack_s", "must be >= 0");
        require(c.cpu_availability_min > 0.0, "cpu_availability_min", "must be > 0");
        ordered(c.cpu_availability_min, c.cpu_availability_max, "cpu_availability_max");
        require(c.cpu_variation_min >= 0.0 && c.cpu_variation_max < 1.0, "cpu_variation_min",
                "variation must lie in [0,1)");
        ordered(c.cpu_variation_min, c.cpu_variation_max, "cpu_variation_max");
        require(!c.policies.empty(), "policies", "at least one policy");
        require(!c.seeds.empty(), "seeds", "at least one seed");
        require(c.hybrid_weight >= 0.0 && c.hybrid_weight <= 1.0, "hybrid_weight", "must lie in [0,1]");
        require(c.safety_margin >= 0.0, "safety_margin", "must be >= 0");
        require(c.training_window >= 7, "training_window", "must hold at least 7 records");
        require(c.retrain_every >= 1, "retrain_every", "must be >= 1");
        require(c.sla_alpha >= 0.0, "sla_alpha", "must be >= 0");
        require(c.sla_beta >= 0.0, "sla_beta", "must be >= 0");
        require(c.price_per_million_msgs >= 0.0, "price_per_million_msgs", "must be >= 0");
        require(c.price_per_million_conn_min >= 0.0, "price_per_million_conn_min", "must be >= 0");
        require(c.messages_per_task >= 0.0, "messages_per_task", "must be >= 0");
        require(c.synth_traces >= 1, "synth_traces", "must be >= 1");
        require(c.synth_trace_length >= 1, "synth_trace_length", "must be >= 1");
        require(c.synth_mean_min >= 0.0 && c.synth_mean_max <= 1.0, "synth_mean_min", "means must lie in [0,1]");
        ordered(c.synth_mean_min, c.synth_mean_max, "synth_mean_max");
        require(c.synth_jitter >= 0.0, "synth_jitter", "must be >= 0");
        require(c.event_cap >= 1, "event_cap", "must be >= 1");
    }

    std::vector<std::string> config_warnings(const ScenarioConfig &c)
    {
        std::vector<std::string> out;
        if (c.price_per_million_msgs < 1.0 || c.price_per_million_msgs > 1.65)
            out.emplace_back("price_per_million_msgs outside the quoted 1.00-1.65 range");
        if (c.price_per_million_conn_min < 0.08 || c.price_per_million_conn_min > 0.132)
            out.emplace_back("price_per_million_conn_min outside the quoted 0.08-0.132 range");
        return out;
    }

} // namespace fogsim
