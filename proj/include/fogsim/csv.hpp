#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fogsim
{
    /// Shortest round-trip decimal form; identical across runs and platforms.
    std::string format_double(double v);

    /// Splits one CSV line on commas. No quoting support; fogsim never emits quotes.
    std::vector<std::string_view> split_csv_line(std::string_view line);

    /// Parses a whole-token double; throws fogsim::Error on garbage.
    double parse_double(std::string_view token);

} // namespace fogsim
