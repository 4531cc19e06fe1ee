#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "chaostk/persistence.hpp" // ScalarField2D
#include "chaostk/time_series.hpp"

namespace chaostk {

struct GridSpec {
    // Defaults tuned so that, after smoothing, a clean limit cycle collapses
    // to a single dominant peak: coarse grids with generous padding suppress
    // the secondary caustic ripples of multi-harmonic p-q rosettes that
    // otherwise flood the diagram with shallow local maxima.
    std::size_t resolution = 20; // cells per axis
    double padding = 0.30;       // fraction of data range added per side

    void validate() const {
        if (resolution < 16) throw std::invalid_argument("GridSpec: resolution must be >= 16");
        if (padding < 0.0) throw std::invalid_argument("GridSpec: padding must be >= 0");
    }
};

namespace detail {

/// Mirror an index into [0, n).
inline std::size_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return static_cast<std::size_t>(i);
}

inline double stddev(const std::vector<double>& v) {
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace detail

/// Grid Gaussian KDE of a planar point cloud. Per-axis bandwidth from the
/// normal-reference rule 1.06 * sigma * m^(-1/5). Each point deposits unit
/// mass through a truncated (+-4h) separable kernel with reflective
/// boundaries, so the field integrates to 1 over the grid.
inline ScalarField2D kde_grid(const std::vector<std::array<double, 2>>& points,
                              const GridSpec& spec = {}) {
    spec.validate();
    if (points.size() < 2) throw std::invalid_argument("kde_grid: need at least 2 points");

    std::vector<double> xs(points.size()), ys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i][0];
        ys[i] = points[i][1];
    }
    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    const double xrange = *xmax_it - *xmin_it;
    const double yrange = *ymax_it - *ymin_it;
    if (xrange <= 0.0 || yrange <= 0.0)
        throw std::invalid_argument("kde_grid: degenerate point extent");

    const std::size_t res = spec.resolution;
    const double x0 = *xmin_it - spec.padding * xrange;
    const double y0 = *ymin_it - spec.padding * yrange;
    const double cw = xrange * (1.0 + 2.0 * spec.padding) / static_cast<double>(res);
    const double ch = yrange * (1.0 + 2.0 * spec.padding) / static_cast<double>(res);

    const double m_factor = std::pow(static_cast<double>(points.size()), -0.2);
    const double hx = std::max(1.06 * detail::stddev(xs) * m_factor / cw, 0.5);
    const double hy = std::max(1.06 * detail::stddev(ys) * m_factor / ch, 0.5);

    ScalarField2D field;
    field.width = res;
    field.height = res;
    field.values.assign(res * res, 0.0);

    const auto rx = static_cast<std::ptrdiff_t>(std::ceil(4.0 * hx));
    const auto ry = static_cast<std::ptrdiff_t>(std::ceil(4.0 * hy));
    std::vector<double> wx(static_cast<std::size_t>(2 * rx + 1));
    std::vector<double> wy(static_cast<std::size_t>(2 * ry + 1));

    for (const auto& pt : points) {
        // Point position in cell-center coordinates.
        const double u = (pt[0] - x0) / cw - 0.5;
        const double v = (pt[1] - y0) / ch - 0.5;
        const auto cu = static_cast<std::ptrdiff_t>(std::llround(u));
        const auto cv = static_cast<std::ptrdiff_t>(std::llround(v));

        double sx = 0.0, sy = 0.0;
        for (std::ptrdiff_t i = -rx; i <= rx; ++i) {
            const double d = static_cast<double>(cu + i) - u;
            wx[static_cast<std::size_t>(i + rx)] = std::exp(-d * d / (2.0 * hx * hx));
            sx += wx[static_cast<std::size_t>(i + rx)];
        }
        for (std::ptrdiff_t j = -ry; j <= ry; ++j) {
            const double d = static_cast<double>(cv + j) - v;
            wy[static_cast<std::size_t>(j + ry)] = std::exp(-d * d / (2.0 * hy * hy));
            sy += wy[static_cast<std::size_t>(j + ry)];
        }
        const double inv = 1.0 / (sx * sy);
        for (std::ptrdiff_t j = -ry; j <= ry; ++j) {
            const std::size_t gy = detail::reflect_index(cv + j, static_cast<std::ptrdiff_t>(res));
            const double wyj = wy[static_cast<std::size_t>(j + ry)] * inv;
            for (std::ptrdiff_t i = -rx; i <= rx; ++i) {
                const std::size_t gx = detail::reflect_index(cu + i, static_cast<std::ptrdiff_t>(res));
                field.values[gy * res + gx] += wx[static_cast<std::size_t>(i + rx)] * wyj;
            }
        }
    }

    const double cell_area = cw * ch;
    const double norm = 1.0 / (static_cast<double>(points.size()) * cell_area);
    for (auto& value : field.values) value *= norm;
    return field;
}

/// Discrete convolution with a truncated (+-4h) normalized Gaussian,
/// separable, reflective boundary. Mass-preserving.
inline ScalarField2D gaussian_smooth(const ScalarField2D& field, double h = 1.3) {
    if (h <= 0.0) throw std::invalid_argument("gaussian_smooth: bandwidth must be positive");
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * h));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] =
            std::exp(-static_cast<double>(i * i) / (2.0 * h * h));
        sum += kernel[static_cast<std::size_t>(i + radius)];
    }
    for (auto& k : kernel) k /= sum;

    const auto w = static_cast<std::ptrdiff_t>(field.width);
    const auto ht = static_cast<std::ptrdiff_t>(field.height);

    ScalarField2D tmp = field;
    for (std::ptrdiff_t y = 0; y < ht; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       field.values[static_cast<std::size_t>(y * w) + detail::reflect_index(x + i, w)];
            tmp.values[static_cast<std::size_t>(y * w + x)] = acc;
        }

    ScalarField2D out = tmp;
    for (std::ptrdiff_t y = 0; y < ht; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp.values[detail::reflect_index(y + i, ht) * static_cast<std::size_t>(w) +
                                  static_cast<std::size_t>(x)];
            out.values[static_cast<std::size_t>(y * w + x)] = acc;
        }
    return out;
}

/// Peak-normalizes the field so its maximum is exactly 1.
inline ScalarField2D to_intensity(const ScalarField2D& field) {
    const double peak = *std::max_element(field.values.begin(), field.values.end());
    if (peak <= 0.0) throw std::invalid_argument("to_intensity: all-zero field");
    ScalarField2D out = field;
    for (auto& v : out.values) v /= peak;
    return out;
}

/// Flips a peak-normalized intensity into a sublevel filtration: density
/// peaks become minima (value 0) so they fill in first.
inline ScalarField2D invert_for_sublevel(const ScalarField2D& intensity) {
    ScalarField2D out = intensity;
    for (auto& v : out.values) v = 1.0 - v;
    return out;
}

/// 16-bit portable graymap (P5), row order top to bottom.
inline void write_pgm16(std::ostream& os, const ScalarField2D& intensity) {
    os << "P5\n" << intensity.width << ' ' << intensity.height << "\n65535\n";
    for (double v : intensity.values) {
        const auto g = static_cast<std::uint16_t>(std::llround(std::clamp(v, 0.0, 1.0) * 65535.0));
        os.put(static_cast<char>(g >> 8));
        os.put(static_cast<char>(g & 0xFF));
    }
}

} // namespace chaostk
