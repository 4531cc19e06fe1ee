#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chaostk {

/// Uniformly sampled scalar observable.
struct TimeSeries {
    std::vector<double> samples;
    double dt = 1.0;   // seconds per sample
    double t0 = 0.0;   // time of first sample

    std::size_t size() const { return samples.size(); }
    double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
    double sample_rate() const { return 1.0 / dt; }

    void validate() const {
        if (dt <= 0.0) throw std::invalid_argument("TimeSeries: dt must be positive");
        if (samples.size() < 2) throw std::invalid_argument("TimeSeries: need at least 2 samples");
        for (double v : samples)
            if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: non-finite sample");
    }
};

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Root mean square of the samples.
inline double rms(const TimeSeries& series) {
    if (series.samples.empty()) throw std::invalid_argument("rms: empty series");
    double s = 0.0;
    for (double x : series.samples) s += x * x;
    return std::sqrt(s / static_cast<double>(series.samples.size()));
}

} // namespace chaostk
