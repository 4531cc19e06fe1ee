#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "chaostk/spectral.hpp"
#include "chaostk/time_series.hpp"

namespace chaostk {

struct PQTrajectory {
    std::vector<double> p;
    std::vector<double> q;
    double c = 0.0;
};

enum class ZeroOneMode { Correlation, Regression };

struct ZeroOneResult {
    double score = 0.0;
    std::vector<double> per_c_scores;
    ZeroOneMode mode = ZeroOneMode::Correlation;
    std::size_t n_cut = 0;
};

/// Decimates so the effective sampling rate lands near multiplier * f_max,
/// where f_max is the largest frequency whose periodogram power exceeds
/// threshold * peak power. Identity when already critically sampled.
inline TimeSeries subsample_fmax(const TimeSeries& series, double multiplier = 3.0,
                                 double threshold = 0.01) {
    if (multiplier < 2.0 || multiplier > 4.0)
        throw std::invalid_argument("subsample_fmax: multiplier must be in [2, 4]");
    if (series.samples.size() < 100)
        throw std::invalid_argument("subsample_fmax: series too short");

    const Periodogram pg = periodogram(series);
    double peak = 0.0;
    for (std::size_t k = 1; k < pg.power.size(); ++k) peak = std::max(peak, pg.power[k]);
    if (peak <= 1e-24)
        throw std::runtime_error("subsample_fmax: flat spectrum, no significant frequency");

    double f_max = 0.0;
    for (std::size_t k = pg.power.size(); k-- > 1;) {
        if (pg.power[k] >= threshold * peak) {
            f_max = pg.freq[k];
            break;
        }
    }
    if (f_max <= 0.0)
        throw std::runtime_error("subsample_fmax: no significant frequency found");

    const double target_rate = multiplier * f_max;
    auto factor = static_cast<std::size_t>(std::llround(series.sample_rate() / target_rate));
    factor = std::max<std::size_t>(factor, 1);
    factor = std::min(factor, series.samples.size() / 100); // keep >= 100 samples
    if (factor <= 1) return series;

    TimeSeries out;
    out.dt = series.dt * static_cast<double>(factor);
    out.t0 = series.t0;
    for (std::size_t i = 0; i < series.samples.size(); i += factor)
        out.samples.push_back(series.samples[i]);
    return out;
}

/// p(n) = sum_{j=1..n} phi(j) cos(jc), q(n) likewise with sin, for n = 1..N.
inline PQTrajectory pq_project(const TimeSeries& series, double c) {
    if (c <= 0.0 || c >= std::numbers::pi)
        throw std::invalid_argument("pq_project: c must lie in (0, pi)");
    if (series.samples.empty()) throw std::invalid_argument("pq_project: empty series");

    PQTrajectory pq;
    pq.c = c;
    pq.p.reserve(series.samples.size());
    pq.q.reserve(series.samples.size());
    double sp = 0.0, sq = 0.0;
    for (std::size_t j = 1; j <= series.samples.size(); ++j) {
        const double phi = series.samples[j - 1];
        const double jc = static_cast<double>(j) * c;
        sp += phi * std::cos(jc);
        sq += phi * std::sin(jc);
        pq.p.push_back(sp);
        pq.q.push_back(sq);
    }
    return pq;
}

/// Modified mean-square displacement D_c(n) for n = 1..n_cut with
/// n_cut = N/10. The average uses a fixed window of j = 1..N-n_cut so every
/// lag shares the same denominator; the oscillatory term
/// V_osc = (mean phi)^2 (1 - cos nc) / (1 - cos c) is subtracted.
inline std::vector<double> modified_msd(const TimeSeries& series, double c) {
    const std::size_t n_samples = series.samples.size();
    const std::size_t n_cut = n_samples / 10;
    if (n_cut < 1) throw std::invalid_argument("modified_msd: need at least 10 samples");

    const PQTrajectory pq = pq_project(series, c);
    const double phi_mean = mean(series.samples);
    const double osc_denom = 1.0 - std::cos(c);
    const std::size_t window = n_samples - n_cut;

    std::vector<double> dc(n_cut);
    for (std::size_t n = 1; n <= n_cut; ++n) {
        double msd = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            const double dp = pq.p[j + n] - pq.p[j];
            const double dq = pq.q[j + n] - pq.q[j];
            msd += dp * dp + dq * dq;
        }
        msd /= static_cast<double>(window);
        const double v_osc =
            phi_mean * phi_mean * (1.0 - std::cos(static_cast<double>(n) * c)) / osc_denom;
        dc[n - 1] = msd - v_osc;
    }
    return dc;
}

namespace detail {

/// Least-absolute-deviation line fit by iteratively reweighted least squares.
/// Returns the slope.
inline double lad_slope(const std::vector<double>& x, const std::vector<double>& y,
                        int max_iters = 50, double tol = 1e-10) {
    const std::size_t m = x.size();
    double slope = ols_slope(x, y);
    const double mx = mean(x), my = mean(y);
    double intercept = my - slope * mx;

    for (int it = 0; it < max_iters; ++it) {
        double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = std::abs(y[i] - slope * x[i] - intercept);
            const double w = 1.0 / std::max(r, 1e-10);
            sw += w;
            swx += w * x[i];
            swy += w * y[i];
            swxx += w * x[i] * x[i];
            swxy += w * x[i] * y[i];
        }
        const double denom = sw * swxx - swx * swx;
        if (denom == 0.0) break;
        const double new_slope = (sw * swxy - swx * swy) / denom;
        const double new_intercept = (swy - new_slope * swx) / sw;
        const bool converged = std::abs(new_slope - slope) < tol && std::abs(new_intercept - intercept) < tol;
        slope = new_slope;
        intercept = new_intercept;
        if (converged) break;
    }
    return slope;
}

} // namespace detail

/// K_c from a modified-MSD sequence. Correlation mode: Pearson correlation
/// of (1..n_cut) with D_c, in [-1, 1]. Regression mode: LAD slope of
/// log(D_c - min D_c) vs log(n), floored at 1e-12 before the log.
/// A constant sequence yields 0 in either mode.
inline double kc_from_dc(const std::vector<double>& dc, ZeroOneMode mode) {
    const std::size_t m = dc.size();
    if (m < 2) throw std::invalid_argument("kc_from_dc: need at least 2 values");

    if (mode == ZeroOneMode::Correlation) {
        std::vector<double> xi(m);
        for (std::size_t i = 0; i < m; ++i) xi[i] = static_cast<double>(i + 1);
        const double mx = mean(xi), my = mean(dc);
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (xi[i] - mx) * (xi[i] - mx);
            syy += (dc[i] - my) * (dc[i] - my);
            sxy += (xi[i] - mx) * (dc[i] - my);
        }
        if (syy == 0.0) return 0.0; // flat displacement: bounded dynamics
        const double k = sxy / std::sqrt(sxx * syy);
        return std::clamp(k, -1.0, 1.0);
    }

    const double dmin = *std::min_element(dc.begin(), dc.end());
    std::vector<double> lx(m), ly(m);
    bool all_floored = true;
    for (std::size_t i = 0; i < m; ++i) {
        const double shifted = std::max(dc[i] - dmin, 1e-12);
        if (shifted > 1e-12) all_floored = false;
        lx[i] = std::log(static_cast<double>(i + 1));
        ly[i] = std::log(shifted);
    }
    if (all_floored) return 0.0;
    return detail::lad_slope(lx, ly);
}

/// Full 0-1 test on a pre-subsampled series: n_c draws of c from
/// (0.1 pi, 0.9 pi), one K_c per draw, median score.
inline ZeroOneResult zero_one_score(const TimeSeries& series, std::size_t n_c = 100,
                                    std::uint64_t seed = 0,
                                    ZeroOneMode mode = ZeroOneMode::Correlation) {
    if (n_c < 1) throw std::invalid_argument("zero_one_score: n_c must be >= 1");
    if (series.samples.size() < 100)
        throw std::invalid_argument("zero_one_score: series too short (need >= 100 samples)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(0.1 * std::numbers::pi, 0.9 * std::numbers::pi);

    ZeroOneResult result;
    result.mode = mode;
    result.n_cut = series.samples.size() / 10;
    result.per_c_scores.reserve(n_c);
    for (std::size_t i = 0; i < n_c; ++i) {
        const double c = draw(rng);
        result.per_c_scores.push_back(kc_from_dc(modified_msd(series, c), mode));
    }

    std::vector<double> sorted = result.per_c_scores;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    result.score = (sorted.size() % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return result;
}

} // namespace chaostk
