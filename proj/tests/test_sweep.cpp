#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "chaostk/sweep.hpp"

using namespace chaostk;
using Catch::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.system = SystemKind::Lorenz;
    cfg.params = {180.3, 181.1};
    cfg.alphas = {-2.0, -1.0, 0.0, 1.0, 2.0};
    cfg.snrs_db = {kInf, 30.0, 20.0};
    cfg.trials = 1;
    cfg.master_seed = 99;
    cfg.sim.duration = 5.0;
    cfg.detect.n_c = 5;
    cfg.detect.n_samples = 500;
    cfg.detect.ps_ensemble = 5;
    cfg.detect.opn_n = 3;
    cfg.detect.opn_tau = 25;
    return cfg;
}

} // namespace

TEST_CASE("simulate_observable length and transient") {
    SimSpec sim;
    sim.duration = 2.0;
    sim.transient = 1.0;
    sim.dt = 0.01;
    const TimeSeries ts = simulate_observable(SystemParams::make_lorenz(28.0), sim);
    CHECK(ts.dt == 0.01);
    CHECK(ts.samples.size() == 201); // 2 seconds retained at dt = 0.01
}

TEST_CASE("SweepConfig validation") {
    SweepConfig cfg = small_config();
    cfg.params.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    cfg.tests = {"zero_one", "bogus"};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("run_sweep row count and determinism") {
    SweepConfig cfg = small_config();
    cfg.threads = 4;
    const SweepResult a = run_sweep(cfg);
    CHECK(a.rows.size() == 90); // 2 params x 5 alphas x 3 snrs x 1 trial x 3 tests

    const SweepResult b = run_sweep(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i] == b.rows[i]);

    std::ostringstream ca, cb;
    write_sweep_csv(ca, a);
    write_sweep_csv(cb, b);
    CHECK(ca.str() == cb.str());

    // Thread count must not affect results or ordering.
    cfg.threads = 1;
    const SweepResult c = run_sweep(cfg);
    std::ostringstream cc;
    write_sweep_csv(cc, c);
    CHECK(cc.str() == ca.str());
}

TEST_CASE("run_sweep rows follow configuration order") {
    SweepConfig cfg = small_config();
    cfg.params = {180.3};
    cfg.alphas = {0.0};
    cfg.snrs_db = {kInf, 20.0};
    cfg.tests = {"zero_one", "ps"};
    const SweepResult r = run_sweep(cfg);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].snr_db == kInf);
    CHECK(r.rows[0].test == "zero_one");
    CHECK(r.rows[1].test == "ps");
    CHECK(r.rows[2].snr_db == 20.0);
    for (const auto& row : r.rows) {
        CHECK(row.system == "lorenz");
        CHECK(row.param == 180.3);
        CHECK_FALSE(row.verdict.empty());
    }
}

TEST_CASE("cell seeds are stable when the grid grows") {
    const std::uint64_t s = detail::cell_seed(7, 1, 2, 0, 3);
    CHECK(s == detail::cell_seed(7, 1, 2, 0, 3));
    CHECK(s != detail::cell_seed(8, 1, 2, 0, 3));
    CHECK(s != detail::cell_seed(7, 2, 2, 0, 3));
    CHECK(s != detail::cell_seed(7, 1, 3, 0, 3));
    CHECK(s != detail::cell_seed(7, 1, 2, 1, 3));
    CHECK(s != detail::cell_seed(7, 1, 2, 0, 4));
}

TEST_CASE("sweep CSV round-trips including inf and nan") {
    SweepResult result;
    SweepRow row;
    row.system = "rossler";
    row.param = 0.25;
    row.alpha = -2.0;
    row.snr_db = kInf;
    row.trial = 0;
    row.test = "ps";
    row.score = 1.4142135623730951;
    row.verdict = "periodic";
    result.rows.push_back(row);

    row.snr_db = 20.0;
    row.test = "opn";
    row.score = std::numeric_limits<double>::quiet_NaN();
    row.verdict = "";
    row.warnings = "degenerate H1 diagram; entropy defined as 0";
    result.rows.push_back(row);

    std::stringstream ss;
    write_sweep_csv(ss, result);
    const std::string text = ss.str();
    CHECK(text.rfind(kSweepCsvHeader, 0) == 0);
    CHECK(text.find(",inf,") != std::string::npos);
    CHECK(text.find(",nan,") != std::string::npos);

    const SweepResult back = read_sweep_csv(ss);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0] == result.rows[0]);
    CHECK(back.rows[1] == result.rows[1]);
}

TEST_CASE("sweep CSV rejects bad input") {
    SweepResult empty;
    std::ostringstream os;
    CHECK_THROWS_AS(write_sweep_csv(os, empty), std::invalid_argument);

    std::stringstream bad("wrong,header\n");
    CHECK_THROWS_AS(read_sweep_csv(bad), std::runtime_error);
}

TEST_CASE("format_double and parse_double sentinels") {
    CHECK(detail::format_double(kInf) == "inf");
    CHECK(detail::format_double(-kInf) == "-inf");
    CHECK(detail::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(detail::parse_double("inf") == kInf);
    CHECK(detail::parse_double("-inf") == -kInf);
    CHECK(std::isnan(detail::parse_double("nan")));
    const double v = 0.1234567890123456789;
    CHECK(detail::parse_double(detail::format_double(v)) == v);
}

TEST_CASE("write_sweep_svg emits one polyline per SNR level") {
    SweepConfig cfg = small_config();
    cfg.alphas = {0.0};
    cfg.tests = {"zero_one"};
    const SweepResult r = run_sweep(cfg);

    std::ostringstream os;
    write_sweep_svg(os, r, "zero_one", 0.0);
    const std::string svg = os.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 3); // one per SNR level

    std::ostringstream other;
    CHECK_THROWS_AS(write_sweep_svg(other, r, "ps", 0.0), std::invalid_argument);
}
