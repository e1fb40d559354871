#pragma once

// Command implementations behind the nlvtest executable. Each command
// writes its full output to a stream and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlv/checks.hpp"
#include "nlv/parallel.hpp"
#include "nlv/simulate.hpp"

namespace nlv::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kCheckFailure = 2,
    kDegenerateData = 3,
};

enum class Format { Csv, Json };

struct StateSpec {
    quantum::TwoQubitState state = quantum::singlet();
    std::string descriptor = "singlet";
};

/// singlet | mixed | werner:V | colored_noise:V | bell_diagonal:t1,t2,t3 |
/// visibilities:V1,V2,V3. Throws ConfigError.
StateSpec parse_state_spec(const std::string& spec);

/// "x,y,z" -> UnitVector (normalized within 1e-9). Throws ConfigError.
sphere::UnitVector parse_vector(const std::string& text);

/// Comma-separated list of numbers.
std::vector<double> parse_list(const std::string& text);

/// Flat key = value format, '#' comments. Unknown keys and malformed
/// values raise ConfigError naming the line and field.
simulate::ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
simulate::ExperimentConfig load_config(const std::string& path);

/// Canonical key = value rendering; parse_config(render_config(c)) == c.
std::string render_config(const simulate::ExperimentConfig& config);

struct RunManifest {
    std::string command;
    std::string config;  // render_config snapshot
    std::uint64_t seed = 0;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
};

RunManifest make_manifest(const std::string& command, const std::string& config_snapshot,
                          std::uint64_t seed);

struct BoundsOptions {
    std::vector<int> n_list{2, 3, 4};
    std::vector<double> phi_deg;  // explicit grid, or built from range + step
    Format format = Format::Csv;
    std::string command_line;
};

struct PredictOptions {
    StateSpec state;
    sphere::FramePair frames = sphere::default_frames();
    int n = 2;
    double phi_deg = 15.0;
    Format format = Format::Csv;
    std::string command_line;
};

struct SimulateOptions {
    simulate::ExperimentConfig config;
    int n = 4;
    double phi_deg = 15.0;
    int runs = 1;
    Format format = Format::Csv;
    Execution exec = Execution::Parallel;
    std::string command_line;
};

struct SweepOptions {
    simulate::ExperimentConfig config;
    std::vector<int> n_list{2, 3, 4};
    double phi_lo_deg = 0.0;
    double phi_hi_deg = 45.0;
    double step_deg = 2.5;
    int runs = 20;
    Format format = Format::Csv;
    Execution exec = Execution::Parallel;
    std::string command_line;
};

struct CheckOptions {
    checks::Suite suite = checks::Suite::All;
    checks::SuiteOptions suite_options;
    std::string command_line;
};

/// Grid lo, lo + step, ... up to hi inclusive (within step/1000).
std::vector<double> phi_grid(double lo_deg, double hi_deg, double step_deg);

int cmd_bounds(const BoundsOptions& options, std::ostream& out, std::ostream& err);
int cmd_predict(const PredictOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);

/// Lines of the output that are not '#' comments (the data section).
std::string data_section(const std::string& output);

}  // namespace nlv::cli
