#include "fogsim/csv.hpp"

#include "fogsim/domain.hpp"

#include <charconv>
#include <cmath>

namespace fogsim
{
    std::string format_double(double v)
    {
        if (v == 0.0)
            return "0"; // folds -0
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        if (ec != std::errc{})
            throw Error("cannot format value");
        return std::string(buf, ptr);
    }

    std::vector<std::string_view> split_csv_line(std::string_view line)
    {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::vector<std::string_view> out;
        std::size_t pos = 0;
        while (true)
        {
            const auto comma = line.find(',', pos);
            if (comma == std::string_view::npos)
            {
                out.push_back(line.substr(pos));
                break;
            }
            out.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        return out;
    }

    double parse_double(std::string_view token)
    {
        while (!token.empty() && (token.front() == ' ' || token.front() == '\t'))
            token.remove_prefix(1);
        while (!token.empty() && (token.back() == ' ' || token.back() == '\t'))
            token.remove_suffix(1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
            throw Error("not a number: '" + std::string(token) + "'");
        return v;
    }

} // namespace fogsim
