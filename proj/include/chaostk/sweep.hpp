#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "chaostk/detect.hpp"
#include "chaostk/dynsys.hpp"
#include "chaostk/noise.hpp"
#include "chaostk/time_series.hpp"

namespace chaostk {

struct SimSpec {
    double dt = 0.0;         // 0 means the system default
    double transient = 100.0;
    double duration = 100.0; // seconds retained after the transient cut
    int component = 0;
    Vec3 x0 = {1.0, 1.0, 1.0};
};

inline TimeSeries simulate_observable(const SystemParams& params, const SimSpec& sim) {
    const double dt = sim.dt > 0.0 ? sim.dt : params.default_dt();
    const StateTrajectory traj = integrate_rk4(params, sim.x0, dt, sim.transient + sim.duration);
    return observe(drop_transient(traj, sim.transient), sim.component);
}

struct SweepConfig {
    SystemKind system = SystemKind::Lorenz;
    std::vector<double> params;                  // rho (Lorenz) or a (Rossler)
    std::vector<double> alphas = {-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<double> snrs_db = {std::numeric_limits<double>::infinity(), 40, 35, 30, 25, 20};
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::string> tests = {"zero_one", "ps", "opn"};
    SimSpec sim;
    DetectConfig detect;
    unsigned threads = 0; // 0 means hardware concurrency

    void validate() const {
        if (params.empty() || alphas.empty() || snrs_db.empty() || tests.empty())
            throw std::invalid_argument("SweepConfig: empty grid");
        if (trials < 1) throw std::invalid_argument("SweepConfig: trials must be >= 1");
        for (const auto& t : tests)
            if (t != "zero_one" && t != "ps" && t != "opn")
                throw std::invalid_argument("SweepConfig: unknown test '" + t + "'");
    }
};

struct SweepRow {
    std::string system;
    double param = 0.0;
    double alpha = 0.0;
    double snr_db = 0.0;
    std::size_t trial = 0;
    std::string test;
    double score = std::numeric_limits<double>::quiet_NaN();
    std::string verdict;
    std::string warnings; // ';'-joined

    bool operator==(const SweepRow& o) const {
        auto feq = [](double a, double b) {
            return (std::isnan(a) && std::isnan(b)) || a == b;
        };
        return system == o.system && feq(param, o.param) && feq(alpha, o.alpha) &&
               feq(snr_db, o.snr_db) && trial == o.trial && test == o.test &&
               feq(score, o.score) && verdict == o.verdict && warnings == o.warnings;
    }
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable per-cell seed: adding grid cells never reshuffles existing ones.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t param_idx, std::size_t alpha_idx,
                               std::size_t snr_idx, std::size_t trial) {
    std::uint64_t h = splitmix64(0x5EEDULL + param_idx);
    h = splitmix64(h ^ alpha_idx);
    h = splitmix64(h ^ (snr_idx << 16));
    h = splitmix64(h ^ (trial << 32));
    return master ^ h;
}

inline std::string join_warnings(const std::vector<std::string>& warnings) {
    std::string out;
    for (const auto& w : warnings) {
        if (!out.empty()) out += ';';
        std::string clean = w;
        std::replace(clean.begin(), clean.end(), ',', ';');
        std::replace(clean.begin(), clean.end(), '\n', ' ');
        out += clean;
    }
    return out;
}

} // namespace detail

/// Runs every (param, alpha, snr, trial) cell: simulate, contaminate, apply
/// the selected tests. Cell errors become rows with an empty verdict and the
/// message in the warnings column; the sweep never aborts. Rows come back in
/// deterministic configuration order regardless of thread scheduling.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::string system_name = cfg.system == SystemKind::Lorenz ? "lorenz" : "rossler";

    // One simulation per parameter value, shared across cells.
    std::vector<TimeSeries> baselines(cfg.params.size());
    for (std::size_t pi = 0; pi < cfg.params.size(); ++pi) {
        const SystemParams params = cfg.system == SystemKind::Lorenz
                                        ? SystemParams::make_lorenz(cfg.params[pi])
                                        : SystemParams::make_rossler(cfg.params[pi]);
        baselines[pi] = simulate_observable(params, cfg.sim);
    }

    struct Cell {
        std::size_t pi, ai, si, trial;
    };
    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < cfg.params.size(); ++pi)
        for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai)
            for (std::size_t si = 0; si < cfg.snrs_db.size(); ++si)
                for (std::size_t t = 0; t < cfg.trials; ++t)
                    cells.push_back({pi, ai, si, t});

    const std::size_t n_tests = cfg.tests.size();
    SweepResult result;
    result.rows.resize(cells.size() * n_tests);

    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const double alpha = cfg.alphas[cell.ai];
        const double snr = cfg.snrs_db[cell.si];
        const std::uint64_t seed =
            detail::cell_seed(cfg.master_seed, cell.pi, cell.ai, cell.si, cell.trial);

        SweepRow base;
        base.system = system_name;
        base.param = cfg.params[cell.pi];
        base.alpha = alpha;
        base.snr_db = snr;
        base.trial = cell.trial;

        TimeSeries contaminated;
        std::string cell_error;
        try {
            const TimeSeries& signal = baselines[cell.pi];
            if (std::isinf(snr) && snr > 0) {
                contaminated = signal;
            } else {
                const TimeSeries noise =
                    gen_colored({alpha, signal.samples.size(), seed}, signal.dt);
                contaminated = contaminate(signal, noise, snr).series;
            }
        } catch (const std::exception& e) {
            cell_error = e.what();
        }

        for (std::size_t ti = 0; ti < n_tests; ++ti) {
            SweepRow row = base;
            row.test = cfg.tests[ti];
            if (!cell_error.empty()) {
                row.warnings = detail::join_warnings({cell_error});
            } else {
                try {
                    const std::uint64_t test_seed = seed ^ detail::splitmix64(0xABCDULL + ti);
                    TestOutcome outcome;
                    if (row.test == "zero_one")
                        outcome = zero_one_test(contaminated, cfg.detect, test_seed);
                    else if (row.test == "ps")
                        outcome = ps_test(contaminated, cfg.detect, test_seed);
                    else
                        outcome = opn_test(contaminated, cfg.detect);
                    row.score = outcome.score;
                    row.verdict = outcome.verdict;
                    row.warnings = detail::join_warnings(outcome.warnings);
                } catch (const std::exception& e) {
                    row.warnings = detail::join_warnings({e.what()});
                }
            }
            result.rows[ci * n_tests + ti] = std::move(row);
        }
    };

    unsigned n_threads = cfg.threads > 0 ? cfg.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(cells.size())));
    if (n_threads == 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t ci = next.fetch_add(1); ci < cells.size(); ci = next.fetch_add(1))
                    run_cell(ci);
            });
        for (auto& th : pool) th.join();
    }
    return result;
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

} // namespace detail

inline constexpr const char* kSweepCsvHeader = "system,param,alpha,snr_db,trial,test,score,verdict,warnings";

inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    if (result.rows.empty()) throw std::invalid_argument("write_sweep_csv: empty result");
    os << kSweepCsvHeader << '\n';
    for (const auto& r : result.rows)
        os << r.system << ',' << detail::format_double(r.param) << ','
           << detail::format_double(r.alpha) << ',' << detail::format_double(r.snr_db) << ','
           << r.trial << ',' << r.test << ',' << detail::format_double(r.score) << ','
           << r.verdict << ',' << r.warnings << '\n';
}

inline SweepResult read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSweepCsvHeader)
        throw std::runtime_error("read_sweep_csv: bad header");
    SweepResult result;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (int i = 0; i < 8; ++i) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) throw std::runtime_error("read_sweep_csv: malformed row");
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        fields.push_back(line.substr(start)); // warnings may not contain commas
        SweepRow row;
        row.system = fields[0];
        row.param = detail::parse_double(fields[1]);
        row.alpha = detail::parse_double(fields[2]);
        row.snr_db = detail::parse_double(fields[3]);
        row.trial = static_cast<std::size_t>(std::stoull(fields[4]));
        row.test = fields[5];
        row.score = detail::parse_double(fields[6]);
        row.verdict = fields[7];
        row.warnings = fields[8];
        result.rows.push_back(std::move(row));
    }
    return result;
}

/// One SVG line chart per (test, alpha): score vs parameter, one polyline
/// per SNR level.
inline void write_sweep_svg(std::ostream& os, const SweepResult& result, const std::string& test,
                            double alpha) {
    // Collect (snr -> param -> mean score over trials).
    std::map<double, std::map<double, std::pair<double, std::size_t>>, std::greater<double>> curves;
    for (const auto& r : result.rows) {
        if (r.test != test || r.alpha != alpha || std::isnan(r.score)) continue;
        auto& [sum, count] = curves[r.snr_db][r.param];
        sum += r.score;
        ++count;
    }
    if (curves.empty()) throw std::invalid_argument("write_sweep_svg: no rows for this test/alpha");

    double xmin = std::numeric_limits<double>::max(), xmax = std::numeric_limits<double>::lowest();
    double ymin = std::numeric_limits<double>::max(), ymax = std::numeric_limits<double>::lowest();
    for (const auto& [snr, pts] : curves)
        for (const auto& [p, acc] : pts) {
            const double y = acc.first / static_cast<double>(acc.second);
            xmin = std::min(xmin, p);
            xmax = std::max(xmax, p);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }

    const double w = 640, h = 420, ml = 60, mr = 20, mt = 40, mb = 50;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
    static const char* palette[] = {"#000000", "#d62728", "#ff7f0e", "#2ca02c", "#1f77b4", "#9467bd",
                                    "#8c564b", "#e377c2"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << test
       << " score, alpha=" << alpha << " (" << noise_color_name(alpha) << ")</text>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\""
       << h - mt - mb << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">parameter</text>\n";
    os << std::setprecision(6);

    std::size_t color = 0;
    double legend_y = mt + 14;
    for (const auto& [snr, pts] : curves) {
        const char* stroke = palette[color % 8];
        os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [p, acc] : pts)
            os << sx(p) << ',' << sy(acc.first / static_cast<double>(acc.second)) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << w - mr - 110 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\""
           << stroke << "\">SNR " << detail::format_double(snr) << " dB</text>\n";
        legend_y += 14;
        ++color;
    }
    os << "</svg>\n";
}

} // namespace chaostk
