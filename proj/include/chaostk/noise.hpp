#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "chaostk/spectral.hpp"
#include "chaostk/time_series.hpp"

namespace chaostk {

/// Spectral exponent convention: S(f) ~ 1/f^alpha.
/// alpha = 2 red, 1 pink, 0 white, -1 blue, -2 violet.
struct NoiseSpec {
    double alpha = 0.0;
    std::size_t length = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (alpha < -2.0 || alpha > 2.0)
            throw std::invalid_argument("NoiseSpec: alpha outside supported palette [-2, 2]");
        if (length < 2) throw std::invalid_argument("NoiseSpec: length must be >= 2");
    }
};

inline const char* noise_color_name(double alpha) {
    if (alpha == 2.0) return "red";
    if (alpha == 1.0) return "pink";
    if (alpha == 0.0) return "white";
    if (alpha == -1.0) return "blue";
    if (alpha == -2.0) return "violet";
    return "custom";
}

/// Colored noise by spectral shaping: white Gaussian deviates, forward FFT,
/// bin at frequency f_k scaled by f_k^(-alpha/2), DC zeroed, inverse FFT.
/// Zero-mean by construction; deterministic per seed.
inline TimeSeries gen_colored(const NoiseSpec& spec, double dt = 1.0) {
    spec.validate();
    const std::size_t n = spec.length;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> white(n);
    for (auto& w : white) w = gauss(rng);

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, white);

    spectrum[0] = 0.0; // zero-mean output
    for (std::size_t k = 1; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        spectrum[k] *= std::pow(f, -spec.alpha / 2.0);
    }

    std::vector<double> shaped;
    fft.inv(shaped, spectrum);

    TimeSeries out;
    out.dt = dt;
    out.samples = std::move(shaped);
    return out;
}

struct ContaminatedSeries {
    TimeSeries series;
    double snr_db = std::numeric_limits<double>::infinity();
    double epsilon = 0.0;
};

/// Scales the noise so that 20*log10(rms(signal)/rms(eps*noise)) == snr_db,
/// then adds it to the signal. snr_db = +inf means no contamination.
inline ContaminatedSeries contaminate(const TimeSeries& signal, const TimeSeries& noise, double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) {
        ContaminatedSeries out;
        out.series = signal;
        out.snr_db = snr_db;
        out.epsilon = 0.0;
        return out;
    }
    if (signal.samples.size() != noise.samples.size())
        throw std::invalid_argument("contaminate: signal/noise length mismatch");
    const double rs = rms(signal);
    const double rn = rms(noise);
    if (rs <= 0.0) throw std::invalid_argument("contaminate: zero-rms signal");
    if (rn <= 0.0) throw std::invalid_argument("contaminate: zero-rms noise");

    ContaminatedSeries out;
    out.snr_db = snr_db;
    out.epsilon = rs / (rn * std::pow(10.0, snr_db / 20.0));
    out.series = signal;
    for (std::size_t i = 0; i < signal.samples.size(); ++i)
        out.series.samples[i] += out.epsilon * noise.samples[i];
    return out;
}

/// Least-squares slope of log10(PSD) vs log10(f) over [f_nyq/100, f_nyq/2].
inline double psd_slope(const TimeSeries& series) {
    if (series.samples.size() < 256) throw std::invalid_argument("psd_slope: series too short");
    const Periodogram pg = periodogram(series);
    const double f_nyq = pg.freq.back();
    const double f_lo = f_nyq / 100.0;
    const double f_hi = f_nyq / 2.0;

    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < pg.freq.size(); ++k) {
        if (pg.freq[k] < f_lo || pg.freq[k] > f_hi) continue;
        if (pg.power[k] <= 0.0) continue;
        lx.push_back(std::log10(pg.freq[k]));
        ly.push_back(std::log10(pg.power[k]));
    }
    if (lx.size() < 2) throw std::invalid_argument("psd_slope: no usable spectral band");
    return ols_slope(lx, ly);
}

} // namespace chaostk
