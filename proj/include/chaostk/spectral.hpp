#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chaostk/time_series.hpp"

namespace chaostk {

/// One-sided periodogram, mean removed, rectangular window.
/// Bin k (k = 0..N/2) sits at frequency k / (N * dt).
struct Periodogram {
    std::vector<double> freq;
    std::vector<double> power;
};

inline Periodogram periodogram(const TimeSeries& series) {
    const std::size_t n = series.samples.size();
    if (n < 2) throw std::invalid_argument("periodogram: series too short");

    const double mu = mean(series.samples);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = series.samples[i] - mu;

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, x);

    Periodogram out;
    const std::size_t half = n / 2;
    out.freq.resize(half + 1);
    out.power.resize(half + 1);
    const double df = 1.0 / (static_cast<double>(n) * series.dt);
    for (std::size_t k = 0; k <= half; ++k) {
        out.freq[k] = static_cast<double>(k) * df;
        out.power[k] = std::norm(spectrum[k]) / static_cast<double>(n);
    }
    return out;
}

/// Ordinary least-squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope: need two equal-length vectors of size >= 2");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_slope: zero variance in x");
    return sxy / sxx;
}

} // namespace chaostk
