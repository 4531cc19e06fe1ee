// chaostk CLI: simulate trajectories, synthesize colored noise, run the
// three chaos tests on a series, and drive full sweep experiments.
//
// Exit codes: 0 success, 1 usage error, 2 runtime/data error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaostk/chaostk.hpp"
#include "series_io.hpp"

namespace {

using namespace chaostk;

struct SimCliOptions {
    std::string system = "lorenz";
    double param = std::numeric_limits<double>::quiet_NaN();
    SimSpec sim;
};

struct InputCliOptions {
    std::string input; // series CSV; empty means simulate instead
    SimCliOptions simcli;
    double alpha = 0.0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

SystemParams make_system(const SimCliOptions& o) {
    if (std::isnan(o.param))
        throw CLI::ValidationError("--param is required when simulating");
    if (o.system == "lorenz") return SystemParams::make_lorenz(o.param);
    if (o.system == "rossler") return SystemParams::make_rossler(o.param);
    throw CLI::ValidationError("--system must be 'lorenz' or 'rossler'");
}

void add_sim_options(CLI::App* cmd, SimCliOptions& o) {
    cmd->add_option("--system", o.system, "dynamical system: lorenz or rossler")
        ->check(CLI::IsMember({"lorenz", "rossler"}));
    cmd->add_option("--param", o.param, "bifurcation parameter (rho for lorenz, a for rossler)");
    cmd->add_option("--dt", o.sim.dt, "integration step in seconds (0 = system default)");
    cmd->add_option("--transient", o.sim.transient, "transient cut in seconds");
    cmd->add_option("--duration", o.sim.duration, "retained duration in seconds");
    cmd->add_option("--component", o.sim.component, "observable component: 0=x, 1=y, 2=z")
        ->check(CLI::Range(0, 2));
    cmd->add_option("--x0", o.sim.x0, "initial condition, three values")->delimiter(',');
}

void add_input_options(CLI::App* cmd, InputCliOptions& o) {
    cmd->add_option("--input", o.input, "series CSV (t,value); omit to simulate instead");
    add_sim_options(cmd, o.simcli);
    cmd->add_option("--alpha", o.alpha, "contaminate with 1/f^alpha noise of this exponent");
    cmd->add_option("--snr", o.snr_db, "contamination SNR in dB (default inf = clean)");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

void add_detect_options(CLI::App* cmd, DetectConfig& d) {
    cmd->add_option("--nc", d.n_c, "number of c draws for the 0-1 test");
    cmd->add_option("--nsamples", d.n_samples, "series length kept after subsampling");
    cmd->add_option("--fmax-multiplier", d.fmax_multiplier, "target rate = multiplier * f_max");
    cmd->add_option("--fmax-threshold", d.fmax_threshold, "significant-power fraction of peak");
    cmd->add_option("--mode", [&d](const std::vector<std::string>& v) {
            if (v[0] == "correlation") d.zero_one_mode = ZeroOneMode::Correlation;
            else if (v[0] == "regression") d.zero_one_mode = ZeroOneMode::Regression;
            else return false;
            return true;
        }, "0-1 test mode: correlation or regression");
    cmd->add_option("--zero-one-threshold", d.zero_one_threshold, "0-1 verdict cut");
    cmd->add_option("--ensemble", d.ps_ensemble, "PS ensemble size (c draws)");
    cmd->add_option("--resolution", d.grid.resolution, "KDE grid cells per axis");
    cmd->add_option("--padding", d.grid.padding, "KDE grid padding fraction per side");
    cmd->add_option("--smooth-h", d.smooth_h, "Gaussian smoothing bandwidth in cells");
    cmd->add_option("--birth-floor", d.birth_floor, "PS birth floor");
    cmd->add_option("--ps-threshold", d.ps_threshold, "PS verdict cut");
    cmd->add_option("--opn-n", d.opn_n, "permutation dimension")->check(CLI::Range(2, 8));
    cmd->add_option("--opn-tau", d.opn_tau, "permutation delay in samples");
    cmd->add_option("--entropy-threshold", d.entropy_threshold, "E' verdict cut");
}

TimeSeries load_input(const InputCliOptions& o) {
    TimeSeries series;
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw std::runtime_error("cannot open input: " + o.input);
        series = chaostk_cli::read_series_csv(in);
    } else {
        series = simulate_observable(make_system(o.simcli), o.simcli.sim);
    }
    if (!(std::isinf(o.snr_db) && o.snr_db > 0)) {
        const TimeSeries noise = gen_colored({o.alpha, series.samples.size(), o.seed}, series.dt);
        series = contaminate(series, noise, o.snr_db).series;
    }
    return series;
}

void write_file(const std::string& path, const std::string& what,
                const std::function<void(std::ostream&)>& writer, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open " + what + " for writing: " + path);
    writer(out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Expands "--config FILE" in place: each "key = value" line of the file
// becomes a "--key value" token pair at the config flag's position, so
// CLI11 sees plain options. Keys already present on the command line are
// skipped, which gives explicit flags precedence over the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string file;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ValidationError("--config needs a file argument");
            file = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            continue;
        }

        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open config file: " + file);
        std::vector<std::string> expanded;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto strip = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            line = strip(line);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(file + ":" + std::to_string(lineno) +
                                         ": expected 'key = value'");
            const std::string key = strip(line.substr(0, eq));
            const std::string value = strip(line.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error(file + ":" + std::to_string(lineno) + ": empty key");
            const std::string flag = "--" + key;
            const bool on_cli = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                return a == flag || a.rfind(flag + "=", 0) == 0;
            });
            if (on_cli) continue;
            expanded.push_back(flag);
            if (!value.empty()) expanded.push_back(value);
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), expanded.begin(), expanded.end());
        i += expanded.size();
        --i; // re-examine the slot in case of back-to-back --config flags
    }
    return args;
}

void print_outcome(const TestOutcome& outcome) {
    std::cout << std::setprecision(17) << "score=" << outcome.score
              << " verdict=" << outcome.verdict << '\n';
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"chaos detection toolkit: 0-1 test, persistence score, "
                 "ordinal-network persistent entropy, colored-noise sweeps"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "integrate a system and write the observable");
    SimCliOptions sim_opts;
    std::string sim_out;
    add_sim_options(sim_cmd, sim_opts);
    sim_cmd->add_option("--out", sim_out, "output series CSV (default stdout)");
    sim_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    // noise
    auto* noise_cmd = app.add_subcommand("noise", "synthesize 1/f^alpha colored noise");
    NoiseSpec noise_spec;
    double noise_dt = 1.0;
    std::string noise_out;
    noise_cmd->add_option("--alpha", noise_spec.alpha, "spectral exponent in [-2, 2]")->required();
    noise_cmd->add_option("--length", noise_spec.length, "sample count")->required();
    noise_cmd->add_option("--seed", noise_spec.seed, "RNG seed");
    noise_cmd->add_option("--dt", noise_dt, "sample interval in seconds");
    noise_cmd->add_option("--out", noise_out, "output series CSV (default stdout)");
    noise_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    // test01 / pstest / opntest share input handling
    DetectConfig detect;
    InputCliOptions t01_in, ps_in, opn_in;

    auto* t01_cmd = app.add_subcommand("test01", "0-1 test for chaos");
    add_input_options(t01_cmd, t01_in);
    add_detect_options(t01_cmd, detect);
    t01_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    auto* ps_cmd = app.add_subcommand("pstest", "persistence score on p-q density fields");
    std::string ps_diagram_out, ps_pgm_out;
    add_input_options(ps_cmd, ps_in);
    add_detect_options(ps_cmd, detect);
    ps_cmd->add_option("--diagram-out", ps_diagram_out, "write one sample diagram (c = pi/2) as CSV");
    ps_cmd->add_option("--pgm-out", ps_pgm_out, "write the c = pi/2 intensity field as 16-bit PGM");
    ps_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    auto* opn_cmd = app.add_subcommand("opntest", "persistent entropy of the ordinal partition network");
    std::string opn_diagram_out;
    add_input_options(opn_cmd, opn_in);
    add_detect_options(opn_cmd, detect);
    opn_cmd->add_option("--diagram-out", opn_diagram_out, "write the VR diagram as CSV");
    opn_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run the full noise-degradation experiment grid");
    SweepConfig sweep;
    std::string sweep_system = "lorenz";
    std::string out_dir = ".";
    sweep_cmd->add_option("--system", sweep_system, "dynamical system: lorenz or rossler")
        ->check(CLI::IsMember({"lorenz", "rossler"}));
    sweep_cmd->add_option("--params", sweep.params, "parameter grid")->delimiter(',')->required();
    sweep_cmd->add_option("--alphas", sweep.alphas, "noise exponents")->delimiter(',');
    sweep_cmd->add_option("--snrs", sweep.snrs_db, "SNR levels in dB ('inf' = clean)")
        ->delimiter(',');
    sweep_cmd->add_option("--trials", sweep.trials, "trials per cell");
    sweep_cmd->add_option("--seed", sweep.master_seed, "master seed");
    sweep_cmd->add_option("--tests", sweep.tests, "tests to run: zero_one, ps, opn")->delimiter(',');
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0 = hardware)");
    sweep_cmd->add_option("--dt", sweep.sim.dt, "integration step (0 = system default)");
    sweep_cmd->add_option("--transient", sweep.sim.transient, "transient cut in seconds");
    sweep_cmd->add_option("--duration", sweep.sim.duration, "retained duration in seconds");
    sweep_cmd->add_option("--component", sweep.sim.component, "observable component")
        ->check(CLI::Range(0, 2));
    sweep_cmd->add_option("--out-dir", out_dir, "output directory for CSV and SVG plots");
    add_detect_options(sweep_cmd, sweep.detect);
    sweep_cmd->add_option("--config", "flat key = value config file (command-line flags take precedence)");

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*sim_cmd) {
        const TimeSeries series = simulate_observable(make_system(sim_opts), sim_opts.sim);
        if (sim_out.empty()) chaostk_cli::write_series_csv(std::cout, series);
        else write_file(sim_out, "series", [&](std::ostream& os) { chaostk_cli::write_series_csv(os, series); });
        return 0;
    }

    if (*noise_cmd) {
        const TimeSeries series = gen_colored(noise_spec, noise_dt);
        if (noise_out.empty()) chaostk_cli::write_series_csv(std::cout, series);
        else write_file(noise_out, "series", [&](std::ostream& os) { chaostk_cli::write_series_csv(os, series); });
        return 0;
    }

    if (*t01_cmd) {
        print_outcome(zero_one_test(load_input(t01_in), detect, t01_in.seed));
        return 0;
    }

    if (*ps_cmd) {
        const TimeSeries series = load_input(ps_in);
        print_outcome(ps_test(series, detect, ps_in.seed));
        if (!ps_diagram_out.empty() || !ps_pgm_out.empty()) {
            const TimeSeries prepared = prepare_series(series, detect);
            const double c = std::numbers::pi / 2.0;
            if (!ps_diagram_out.empty()) {
                const PersistenceDiagram diagram = pq_persistence_diagram(prepared, c, detect);
                write_file(ps_diagram_out, "diagram",
                           [&](std::ostream& os) { write_diagram_csv(os, diagram); });
            }
            if (!ps_pgm_out.empty()) {
                const PQTrajectory pq = pq_project(prepared, c);
                std::vector<std::array<double, 2>> points(pq.p.size());
                for (std::size_t i = 0; i < pq.p.size(); ++i) points[i] = {pq.p[i], pq.q[i]};
                const ScalarField2D intensity =
                    to_intensity(gaussian_smooth(kde_grid(points, detect.grid), detect.smooth_h));
                write_file(ps_pgm_out, "pgm",
                           [&](std::ostream& os) { write_pgm16(os, intensity); }, true);
            }
        }
        return 0;
    }

    if (*opn_cmd) {
        const TimeSeries series = load_input(opn_in);
        print_outcome(opn_test(series, detect));
        if (!opn_diagram_out.empty()) {
            const OrdinalNetwork net =
                opn_from_series(series, EmbeddingParams{detect.opn_n, detect.opn_tau});
            DistanceMatrix dist(net.dist.size(), std::vector<double>(net.dist.size()));
            for (std::size_t i = 0; i < net.dist.size(); ++i)
                for (std::size_t j = 0; j < net.dist.size(); ++j)
                    dist[i][j] = static_cast<double>(net.dist[i][j]);
            const PersistenceDiagram diagram = vr_persistence(dist);
            write_file(opn_diagram_out, "diagram",
                       [&](std::ostream& os) { write_diagram_csv(os, diagram); });
        }
        return 0;
    }

    // sweep
    sweep.system = sweep_system == "lorenz" ? SystemKind::Lorenz : SystemKind::Rossler;
    const SweepResult result = run_sweep(sweep);
    std::filesystem::create_directories(out_dir);
    const std::string csv_path = (std::filesystem::path(out_dir) / "sweep.csv").string();
    write_file(csv_path, "sweep csv", [&](std::ostream& os) { write_sweep_csv(os, result); });
    std::cout << "wrote " << csv_path << " (" << result.rows.size() << " rows)\n";
    for (const auto& test : sweep.tests)
        for (double alpha : sweep.alphas) {
            std::ostringstream name;
            name << test << "_alpha" << (alpha < 0 ? "m" : "") << std::abs(alpha) << ".svg";
            const std::string svg_path = (std::filesystem::path(out_dir) / name.str()).string();
            try {
                write_file(svg_path, "svg",
                           [&](std::ostream& os) { write_sweep_svg(os, result, test, alpha); });
                std::cout << "wrote " << svg_path << '\n';
            } catch (const std::invalid_argument&) {
                std::cerr << "warning: no plottable rows for " << name.str() << '\n';
            }
        }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
