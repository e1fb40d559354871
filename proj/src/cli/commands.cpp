#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "nlv/cli.hpp"
#include "nlv/errors.hpp"
#include "nlv/inequality.hpp"

namespace nlv::cli {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kSearchTolDeg = 0.01;
constexpr double kSearchHiDeg = 45.0;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string deg(double radians) { return fixed(radians / kDeg, 2); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json manifest_json(const RunManifest& m) {
    return {{"command", m.command},     {"config", m.config},     {"seed", m.seed},
            {"version", m.version},     {"timestamp", m.timestamp}};
}

void write_manifest(std::ostream& out, const std::string& name, const RunManifest& m,
                    const std::vector<std::string>& notes) {
    out << "# nlvtest " << name << '\n'
        << "# version: " << m.version << '\n'
        << "# timestamp: " << m.timestamp << '\n'
        << "# command: " << m.command << '\n'
        << "# seed: " << m.seed << '\n';
    std::istringstream cfg(m.config);
    std::string line;
    while (std::getline(cfg, line)) out << "# config: " << line << '\n';
    for (const auto& n : notes) out << "# " << n << '\n';
}

// Rows of string cells; CSV or JSON with the same column names.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write_csv(std::ostream& out) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(r[i]);
            out << '\n';
        }
    }

    json records() const {
        json arr = json::array();
        for (const auto& r : rows_) {
            json obj = json::object();
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                const std::string& cell = r[i];
                const char* last = cell.data() + cell.size();
                std::int64_t k = 0;
                double v = 0.0;
                if (auto [p, ec] = std::from_chars(cell.data(), last, k);
                    !cell.empty() && ec == std::errc() && p == last) {
                    obj[columns_[i]] = k;
                } else if (auto [q, ec2] = std::from_chars(cell.data(), last, v);
                           !cell.empty() && ec2 == std::errc() && q == last) {
                    obj[columns_[i]] = v;
                } else {
                    obj[columns_[i]] = cell;
                }
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }

    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

void emit(std::ostream& out, Format format, const std::string& name, const RunManifest& m,
          const std::vector<std::string>& notes, const Table& table) {
    if (format == Format::Json) {
        json doc = {{"manifest", manifest_json(m)},
                    {"notes", notes},
                    {"columns", table.columns()},
                    {"records", table.records()}};
        out << doc.dump(2) << '\n';
        return;
    }
    write_manifest(out, name, m, notes);
    table.write_csv(out);
}

std::string region_text(const std::optional<std::pair<double, double>>& region) {
    if (!region) return "none";
    return deg(region->first) + "-" + deg(region->second);
}

}  // namespace

std::vector<double> phi_grid(double lo_deg, double hi_deg, double step_deg) {
    if (!(step_deg > 0.0)) throw InvalidArgument("phi step must be > 0");
    if (hi_deg < lo_deg) throw InvalidArgument("phi range is empty");
    std::vector<double> grid;
    for (long i = 0;; ++i) {
        const double v = lo_deg + static_cast<double>(i) * step_deg;
        if (v > hi_deg + step_deg * 1e-3) break;
        grid.push_back(v);
    }
    return grid;
}

std::string data_section(const std::string& output) {
    std::istringstream in(output);
    std::string line;
    std::string data;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        data += line;
        data += '\n';
    }
    return data;
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out, std::ostream& err) {
    if (o.n_list.empty() || o.phi_deg.empty()) {
        err << "bounds: empty N list or phi grid\n";
        return kUsageError;
    }
    Table table({"N", "phi_deg", "bound", "singlet_L"});
    try {
        for (int n : o.n_list) {
            for (double p : o.phi_deg) {
                table.add({std::to_string(n), fixed(p, 2), fixed(inequality::bound(n, p * kDeg), 4),
                           fixed(quantum::singlet_L(p * kDeg), 4)});
            }
        }
    } catch (const InvalidArgument& e) {
        err << "bounds: " << e.what() << '\n';
        return kUsageError;
    }
    emit(out, o.format, "bounds", make_manifest(o.command_line, "", 0),
         {"bound = 4 - 2 u_N |sin(phi/2)|, u_N = cot(pi/2N)/N; singlet_L = 2(1 + cos phi)"}, table);
    return kSuccess;
}

int cmd_predict(const PredictOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const quantum::QuantumSource source(o.state.state);
        const auto rep = inequality::L_N(source, o.frames, o.n, o.phi_deg * kDeg);
        const auto scan = inequality::scan_violation(source, o.frames, o.n, 0.0,
                                                     kSearchHiDeg * kDeg, kSearchTolDeg * kDeg);
        Table table({"state", "N", "phi_deg", "L", "bound", "L_minus_bound", "max_margin",
                     "best_phi_deg", "violation_region_deg"});
        table.add({o.state.descriptor, std::to_string(o.n), fixed(o.phi_deg, 2),
                   fixed(rep.l_value, 4), fixed(rep.bound, 4), fixed(rep.margin(), 4),
                   fixed(scan.best_margin, 4), deg(scan.best_phi), region_text(scan.region)});
        simulate::ExperimentConfig snapshot;
        snapshot.state = o.state.state;
        snapshot.state_descriptor = o.state.descriptor;
        snapshot.frames = o.frames;
        emit(out, o.format, "predict", make_manifest(o.command_line, render_config(snapshot), 0),
             {"analytic prediction, sigma = 0; max_margin is max over phi in [0, 45] deg of "
              "L - bound"},
             table);
    } catch (const std::invalid_argument& e) {
        err << "predict: " << e.what() << '\n';
        return kUsageError;
    }
    return kSuccess;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    simulate::ReplicateSummary batch;
    try {
        batch = simulate::run_batch(o.config, o.n, o.phi_deg * kDeg, o.runs, o.exec);
    } catch (const std::invalid_argument& e) {
        err << "simulate: " << e.what() << '\n';
        return kUsageError;
    }

    Table table({"kind", "run", "seed", "N", "phi_deg", "L", "sigma", "bound", "violation_sigmas",
                 "std_L", "sigma_ratio", "status"});
    const std::string bound = fixed(inequality::bound(o.n, o.phi_deg * kDeg), 4);
    for (std::size_t r = 0; r < batch.records.size(); ++r) {
        const auto& rec = batch.records[r];
        if (rec.report) {
            const auto& rep = *rec.report;
            table.add({"run", std::to_string(r), std::to_string(rec.seed), std::to_string(o.n),
                       fixed(o.phi_deg, 2), fixed(rep.l_value, 4), fixed(rep.sigma, 6), bound,
                       rep.violation_sigmas ? fixed(*rep.violation_sigmas, 2) : "", "", "", "ok"});
        } else {
            table.add({"run", std::to_string(r), std::to_string(rec.seed), std::to_string(o.n),
                       fixed(o.phi_deg, 2), "", "", bound, "", "", "", rec.error});
        }
    }
    const int ok_runs = batch.runs - batch.failed_runs;
    table.add({"summary", std::to_string(ok_runs), std::to_string(o.config.rng_seed),
               std::to_string(o.n), fixed(o.phi_deg, 2), fixed(batch.mean_l, 4),
               fixed(batch.mean_sigma, 6), bound, fixed(batch.mean_violation, 2),
               fixed(batch.std_l, 6), fixed(batch.sigma_ratio, 3),
               batch.failed_runs ? std::to_string(batch.failed_runs) + " failed" : "ok"});

    emit(out, o.format, "simulate",
         make_manifest(o.command_line, render_config(o.config), o.config.rng_seed),
         {"run seeds derive from (seed, N, 0, run); summary: L = mean, sigma = mean propagated, "
          "run = successful runs"},
         table);

    if (ok_runs == 0) {
        err << "simulate: every run hit degenerate data\n";
        return kDegenerateData;
    }
    return kSuccess;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    if (o.n_list.empty()) {
        err << "sweep: empty N list\n";
        return kUsageError;
    }
    std::vector<double> grid_rad;
    std::vector<simulate::SweepCell> cells;
    try {
        for (double p : phi_grid(o.phi_lo_deg, o.phi_hi_deg, o.step_deg)) grid_rad.push_back(p * kDeg);
        cells = simulate::sweep(o.config, o.n_list, grid_rad, o.runs, o.exec);
    } catch (const std::invalid_argument& e) {
        err << "sweep: " << e.what() << '\n';
        return kUsageError;
    }

    std::vector<std::string> notes{
        "one row per (N, phi); mean_L, std_L, mean_sigma and mean_violation over successful runs; "
        "run seeds derive from (seed, N, phi index, run)"};
    for (int n : o.n_list) {
        if (n < 2) continue;
        notes.push_back("N=" + std::to_string(n) + " ideal singlet optimum phi_deg=" +
                        deg(inequality::optimal_phi(n)));
    }

    Table table({"N", "phi_deg", "bound", "singlet_L", "analytic_L", "mean_L", "std_L",
                 "mean_sigma", "mean_violation", "failed_runs"});
    int total_ok = 0;
    for (const auto& c : cells) {
        const auto& s = c.summary;
        const bool any = s.failed_runs < s.runs;
        total_ok += s.runs - s.failed_runs;
        table.add({std::to_string(c.n), deg(c.phi), fixed(c.bound, 4), fixed(c.singlet_l, 4),
                   fixed(c.analytic_l, 4), any ? fixed(s.mean_l, 4) : "",
                   any ? fixed(s.std_l, 6) : "", any ? fixed(s.mean_sigma, 6) : "",
                   any ? fixed(s.mean_violation, 2) : "", std::to_string(s.failed_runs)});
    }
    emit(out, o.format, "sweep",
         make_manifest(o.command_line, render_config(o.config), o.config.rng_seed), notes, table);
    if (total_ok == 0) {
        err << "sweep: every run hit degenerate data\n";
        return kDegenerateData;
    }
    return kSuccess;
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
    std::vector<checks::CheckLine> lines;
    try {
        lines = checks::run_suite(o.suite, o.suite_options);
    } catch (const std::invalid_argument& e) {
        err << "check: " << e.what() << '\n';
        return kUsageError;
    }
    const auto m = make_manifest(o.command_line, "", o.suite_options.seed);
    out << "# nlvtest check\n"
        << "# version: " << m.version << '\n'
        << "# timestamp: " << m.timestamp << '\n'
        << "# command: " << m.command << '\n'
        << "# seed: " << m.seed << '\n';
    bool ok = true;
    for (const auto& l : lines) {
        out << (l.passed ? "PASS " : "FAIL ") << l.name << "  " << l.detail << '\n';
        ok = ok && l.passed;
    }
    return ok ? kSuccess : kCheckFailure;
}

}  // namespace nlv::cli
