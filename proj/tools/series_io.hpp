// Time-series CSV plumbing shared by the CLI subcommands.
#pragma once

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chaostk/time_series.hpp"

namespace chaostk_cli {

inline constexpr const char* kSeriesCsvHeader = "t,value";

inline void write_series_csv(std::ostream& os, const chaostk::TimeSeries& series) {
    os << kSeriesCsvHeader << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < series.samples.size(); ++i)
        os << series.t0 + series.dt * static_cast<double>(i) << ',' << series.samples[i] << '\n';
}

inline chaostk::TimeSeries read_series_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSeriesCsvHeader)
        throw std::runtime_error("series csv: missing 't,value' header");
    chaostk::TimeSeries series;
    double t_first = 0.0, t_second = 0.0;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("series csv: malformed row: " + line);
        const double t = std::stod(line.substr(0, comma));
        series.samples.push_back(std::stod(line.substr(comma + 1)));
        if (row == 0) t_first = t;
        if (row == 1) t_second = t;
        ++row;
    }
    if (row < 2) throw std::runtime_error("series csv: need at least 2 rows");
    series.t0 = t_first;
    series.dt = t_second - t_first;
    series.validate();
    return series;
}

} // namespace chaostk_cli
