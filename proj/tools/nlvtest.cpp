#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nlv/cli.hpp"
#include "nlv/errors.hpp"

using namespace nlv;

namespace {

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::vector<double> values;
    try {
        values = cli::parse_list(text);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("--n-list: ") + e.what());
    }
    for (double v : values) {
        if (v < 1 || v != std::floor(v) || v > 1e6) {
            throw ConfigError("N values must be positive integers");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

cli::Format parse_format(const std::string& text) {
    if (text == "json") return cli::Format::Json;
    return cli::Format::Csv;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto v = cli::parse_list(text);
    if (v.size() != 2) throw ConfigError("--phi-range wants LO,HI");
    return {v[0], v[1]};
}

}  // namespace

int main(int argc, char** argv) {
    std::string command_line;
    for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

    CLI::App app{"Finite-setting Leggett inequality toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(NLV_VERSION));

    std::string format = "csv";
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool serial = false;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Tabulate 4 - 2 u_N |sin(phi/2)| and the singlet L");
    std::string n_list = "2,3,4";
    std::string phi_list;
    std::string phi_range = "0,45";
    double step = 2.5;
    bounds->add_option("--n-list", n_list, "Comma-separated N values");
    bounds->add_option("--phi", phi_list, "Comma-separated phi values in degrees");
    bounds->add_option("--phi-range", phi_range, "LO,HI in degrees");
    bounds->add_option("--step", step, "Grid step in degrees");
    add_format(bounds);

    // predict
    auto* predict = app.add_subcommand("predict", "Analytic L_N and violation region for a state");
    std::string state = "singlet";
    std::optional<int> n;
    double phi = 15.0;
    std::string plane2_seed;
    predict->add_option("--state", state,
                        "singlet | mixed | werner:V | colored_noise:V | bell_diagonal:T1,T2,T3 | "
                        "visibilities:V1,V2,V3");
    predict->add_option("--n", n, "Number of settings per plane (default 2)");
    predict->add_option("--phi", phi, "phi in degrees");
    predict->add_option("--config", config_path, "Config file supplying the frames");
    predict->add_option("--plane2-seed", plane2_seed, "Override the second plane's seed x,y,z");
    add_format(predict);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs of the counting experiment");
    std::optional<int> runs;
    bool subtract = false;
    std::string sim_state;
    simulate->add_option("--config", config_path, "Config file");
    simulate->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    simulate->add_option("--runs", runs, "Independent runs (default 1)");
    simulate->add_option("--n", n, "Number of settings per plane (default 4)");
    simulate->add_option("--phi", phi, "phi in degrees");
    simulate->add_option("--state", sim_state, "State spec, overrides the config");
    simulate->add_option("--plane2-seed", plane2_seed, "Override the second plane's seed x,y,z");
    simulate->add_flag("--subtract-accidentals", subtract, "Subtract expected accidentals");
    simulate->add_flag("--serial", serial, "Run the serial reference path");
    add_format(simulate);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Replicated simulations over an (N, phi) grid");
    sweep->add_option("--config", config_path, "Config file");
    sweep->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    sweep->add_option("--runs", runs, "Runs per grid cell (default 20)");
    sweep->add_option("--n-list", n_list, "Comma-separated N values");
    sweep->add_option("--phi-range", phi_range, "LO,HI in degrees");
    sweep->add_option("--step", step, "Grid step in degrees");
    sweep->add_flag("--subtract-accidentals", subtract, "Subtract expected accidentals");
    sweep->add_flag("--serial", serial, "Run the serial reference path");
    add_format(sweep);

    // check
    auto* check = app.add_subcommand("check", "Randomized property checks");
    std::string suite = "all";
    long trials = 0;
    long ensembles = 0;
    double grid_deg = 0.0;
    check->add_option("suite", suite, "lemma | leggett | all")
        ->check(CLI::IsMember({"lemma", "leggett", "all"}));
    check->add_option("--trials", trials, "Random trials per scan");
    check->add_option("--ensembles", ensembles, "Random local ensembles");
    check->add_option("--grid-deg", grid_deg, "Sphere grid spacing for the feasibility search");
    check->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    check->add_flag("--serial", serial, "Run the serial reference path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? cli::kSuccess : cli::kUsageError;
    }

    const auto exec = serial ? Execution::Serial : Execution::Parallel;
    try {
        auto load = [&] {
            auto c = config_path.empty() ? simulate::ExperimentConfig{} : cli::load_config(config_path);
            if (seed_given) c.rng_seed = seed;
            if (subtract) c.subtract_accidentals = true;
            if (!plane2_seed.empty()) {
                c.frames.second =
                    sphere::PlaneFrame(c.frames.second.normal(), cli::parse_vector(plane2_seed));
            }
            return c;
        };

        if (bounds->parsed()) {
            cli::BoundsOptions o;
            o.n_list = parse_n_list(n_list);
            if (!phi_list.empty()) {
                o.phi_deg = cli::parse_list(phi_list);
            } else {
                const auto [lo, hi] = parse_range(phi_range);
                o.phi_deg = cli::phi_grid(lo, hi, step);
            }
            o.format = parse_format(format);
            o.command_line = command_line;
            return cli::cmd_bounds(o, std::cout, std::cerr);
        }
        if (predict->parsed()) {
            cli::PredictOptions o;
            o.state = cli::parse_state_spec(state);
            o.frames = load().frames;
            if (n) o.n = *n;
            o.phi_deg = phi;
            o.format = parse_format(format);
            o.command_line = command_line;
            return cli::cmd_predict(o, std::cout, std::cerr);
        }
        if (simulate->parsed()) {
            cli::SimulateOptions o;
            o.config = load();
            if (!sim_state.empty()) {
                auto spec = cli::parse_state_spec(sim_state);
                o.config.state = std::move(spec.state);
                o.config.state_descriptor = spec.descriptor;
            }
            if (n) o.n = *n;
            if (runs) o.runs = *runs;
            o.phi_deg = phi;
            o.format = parse_format(format);
            o.exec = exec;
            o.command_line = command_line;
            return cli::cmd_simulate(o, std::cout, std::cerr);
        }
        if (sweep->parsed()) {
            cli::SweepOptions o;
            o.config = load();
            o.n_list = parse_n_list(n_list);
            const auto [lo, hi] = parse_range(phi_range);
            o.phi_lo_deg = lo;
            o.phi_hi_deg = hi;
            o.step_deg = step;
            if (runs) o.runs = *runs;
            o.format = parse_format(format);
            o.exec = exec;
            o.command_line = command_line;
            return cli::cmd_sweep(o, std::cout, std::cerr);
        }
        if (check->parsed()) {
            cli::CheckOptions o;
            o.suite = suite == "lemma"     ? checks::Suite::Lemma
                      : suite == "leggett" ? checks::Suite::Leggett
                                           : checks::Suite::All;
            if (trials) o.suite_options.lemma_trials = o.suite_options.leggett_trials = trials;
            if (ensembles) o.suite_options.mixture_ensembles = ensembles;
            if (grid_deg > 0) o.suite_options.grid_resolution_deg = grid_deg;
            if (seed_given) o.suite_options.seed = seed;
            o.suite_options.exec = exec;
            o.command_line = command_line;
            return cli::cmd_check(o, std::cout, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
    }
    return cli::kUsageError;
}
