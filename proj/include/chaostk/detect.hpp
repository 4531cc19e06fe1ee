#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "chaostk/embedding.hpp"
#include "chaostk/kde.hpp"
#include "chaostk/persistence.hpp"
#include "chaostk/time_series.hpp"
#include "chaostk/zero_one.hpp"

namespace chaostk {

/// Per-test parameters; defaults follow the Lorenz/Rossler protocol.
struct DetectConfig {
    // 0-1 test
    std::size_t n_c = 100;          // number of c draws
    std::size_t n_samples = 5000;   // series length after subsampling
    double fmax_multiplier = 3.0;
    double fmax_threshold = 0.01;   // significant-frequency cut, fraction of peak power
    ZeroOneMode zero_one_mode = ZeroOneMode::Correlation;
    double zero_one_threshold = 0.5;

    // PS test
    std::size_t ps_ensemble = 200;
    GridSpec grid;
    double smooth_h = 1.3;
    double birth_floor = 0.01;
    double ps_threshold = 0.75 * std::numbers::sqrt2; // midpoint of sqrt2 and sqrt2/2

    // OPN test
    int opn_n = 6;
    int opn_tau = 1;
    double entropy_threshold = 0.8;
};

struct TestOutcome {
    double score = std::numeric_limits<double>::quiet_NaN();
    std::string verdict; // "periodic", "chaotic", or "indeterminate"
    std::vector<std::string> warnings;
};

/// Subsample by the f_max rule, then keep the first n_samples points.
inline TimeSeries prepare_series(const TimeSeries& series, const DetectConfig& cfg) {
    TimeSeries prepared = subsample_fmax(series, cfg.fmax_multiplier, cfg.fmax_threshold);
    if (cfg.n_samples > 0 && prepared.samples.size() > cfg.n_samples)
        prepared.samples.resize(cfg.n_samples);
    return prepared;
}

/// 0-1 correlation (or regression) test; chaotic iff the median score
/// crosses the threshold.
inline TestOutcome zero_one_test(const TimeSeries& series, const DetectConfig& cfg,
                                 std::uint64_t seed) {
    const TimeSeries prepared = prepare_series(series, cfg);
    const ZeroOneResult result = zero_one_score(prepared, cfg.n_c, seed, cfg.zero_one_mode);
    TestOutcome out;
    out.score = result.score;
    out.verdict = result.score >= cfg.zero_one_threshold ? "chaotic" : "periodic";
    return out;
}

/// One persistence diagram from a p-q projection at angle c: KDE, Gaussian
/// smoothing, peak normalization, inversion, 0D sublevel persistence. The
/// diagram is reported in intensity coordinates (birth = 1 - death_level,
/// death = 1 - birth_level) so density peaks sit near (1, 1).
inline PersistenceDiagram pq_persistence_diagram(const TimeSeries& series, double c,
                                                 const DetectConfig& cfg) {
    const PQTrajectory pq = pq_project(series, c);
    std::vector<std::array<double, 2>> points(pq.p.size());
    for (std::size_t i = 0; i < pq.p.size(); ++i) points[i] = {pq.p[i], pq.q[i]};

    const ScalarField2D density = kde_grid(points, cfg.grid);
    const ScalarField2D intensity = to_intensity(gaussian_smooth(density, cfg.smooth_h));
    const PersistenceDiagram raw = sublevel_0d(invert_for_sublevel(intensity));

    PersistenceDiagram mapped;
    mapped.reserve(raw.size());
    for (const auto& pt : raw)
        mapped.push_back({pt.dim, 1.0 - pt.death, 1.0 - pt.birth, pt.essential});
    return mapped;
}

/// PS test: ensemble of persistence diagrams over random c draws, mean
/// distance of surviving 0D points to the origin. Periodic iff the score
/// reaches the threshold.
inline TestOutcome ps_test(const TimeSeries& series, const DetectConfig& cfg, std::uint64_t seed) {
    const TimeSeries prepared = prepare_series(series, cfg);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(0.1 * std::numbers::pi, 0.9 * std::numbers::pi);
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(cfg.ps_ensemble);
    for (std::size_t i = 0; i < cfg.ps_ensemble; ++i)
        diagrams.push_back(pq_persistence_diagram(prepared, draw(rng), cfg));

    const PersistenceScoreResult result = persistence_score(diagrams, cfg.birth_floor);
    TestOutcome out;
    out.score = result.score;
    out.verdict = result.score >= cfg.ps_threshold ? "periodic" : "chaotic";
    if (result.diagrams_excluded > 0)
        out.warnings.push_back(std::to_string(result.diagrams_excluded) +
                               " diagram(s) excluded by birth floor");
    return out;
}

/// OPN test: ordinal partition network, Vietoris-Rips H1 persistence of its
/// shortest-path metric, normalized persistent entropy. Chaotic iff
/// E' >= threshold.
inline TestOutcome opn_test(const TimeSeries& series, const DetectConfig& cfg) {
    TestOutcome out;
    OrdinalNetwork net;
    try {
        net = opn_from_series(series, EmbeddingParams{cfg.opn_n, cfg.opn_tau});
    } catch (const std::runtime_error& e) {
        out.verdict = "indeterminate";
        out.warnings.emplace_back(e.what());
        return out;
    }
    if (net.disconnected)
        out.warnings.push_back("network disconnected; persistence on largest component (" +
                               std::to_string(net.component_nodes.size()) + "/" +
                               std::to_string(net.nodes.size()) + " nodes)");

    DistanceMatrix dist(net.dist.size(), std::vector<double>(net.dist.size()));
    for (std::size_t i = 0; i < net.dist.size(); ++i)
        for (std::size_t j = 0; j < net.dist.size(); ++j)
            dist[i][j] = static_cast<double>(net.dist[i][j]);

    const PersistenceDiagram diagram = vr_persistence(dist);
    bool degenerate = false;
    out.score = normalized_persistent_entropy(diagram, &degenerate);
    if (degenerate) out.warnings.push_back("degenerate H1 diagram; entropy defined as 0");
    out.verdict = out.score >= cfg.entropy_threshold ? "chaotic" : "periodic";
    return out;
}

} // namespace chaostk
