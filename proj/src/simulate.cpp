#include "nlv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlv/errors.hpp"

namespace nlv::simulate {

using sphere::UnitVector;

void ExperimentConfig::validate() const {
    if (!(pair_rate > 0.0)) throw InvalidArgument("pair_rate must be > 0");
    if (!(accidental_rate >= 0.0)) throw InvalidArgument("accidental_rate must be >= 0");
    if (!(integration_time > 0.0)) throw InvalidArgument("integration_time must be > 0");
    inequality::require_orthogonal(frames);
}

namespace {

std::int64_t draw_poisson(double mean, Rng& rng) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
}

Estimate estimate_from(double same, double diff, double raw_same, double raw_diff) {
    const double s = same + diff;
    if (!(s > 0.0)) throw DegenerateData("no coincidence counts in quad");
    const double c = (same - diff) / s;
    const double var =
        ((1.0 - c) * (1.0 - c) * raw_same + (1.0 + c) * (1.0 + c) * raw_diff) / (s * s);
    return {std::clamp(c, -1.0, 1.0), std::sqrt(var)};
}

const char* theta_name(inequality::Theta t) { return t == inequality::Theta::Zero ? "0" : "phi"; }

inequality::InequalityReport run_with(const ExperimentConfig& config,
                                      const CorrelationSource& source, int n, double phi,
                                      std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("run_experiment: N must be >= 1");
    inequality::require_orthogonal(config.frames);
    Rng rng(seed);

    double l_value = 0.0;
    double variance = 0.0;
    int plane = 0;
    for (const sphere::PlaneFrame* frame : {&config.frames.first, &config.frames.second}) {
        ++plane;
        const auto schedule = sphere::build_schedule(*frame, n, phi, plane);
        double sum = 0.0;
        double var_sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto& e = schedule.entries[static_cast<std::size_t>(k)];
            for (auto theta : {inequality::Theta::Zero, inequality::Theta::Phi}) {
                const UnitVector& bob = theta == inequality::Theta::Zero ? e.bob0 : e.bobphi;
                const CountQuad quad = sample_quad(config, source, e.alice, bob, rng);
                Estimate est;
                try {
                    est = config.subtract_accidentals
                              ? estimate_C(subtract_accidentals(quad, config.accidental_rate))
                              : estimate_C(quad);
                } catch (const DegenerateData&) {
                    throw DegenerateData("no coincidences at plane " + std::to_string(plane) +
                                         ", k = " + std::to_string(k) + ", theta = " +
                                         theta_name(theta));
                }
                sum += est.c_hat;
                var_sum += est.sigma * est.sigma;
            }
        }
        l_value += std::abs(sum / n);
        variance += var_sum / (static_cast<double>(n) * n);
    }

    inequality::InequalityReport report;
    report.n = n;
    report.phi = phi;
    report.l_value = l_value;
    report.bound = inequality::bound(n, phi);
    report.sigma = std::sqrt(variance);
    if (report.sigma > 0.0) report.violation_sigmas = (report.l_value - report.bound) / report.sigma;
    report.frames = config.frames;
    return report;
}

RunRecord run_record(const ExperimentConfig& config, const CorrelationSource& source, int n,
                     double phi, std::uint64_t seed) {
    RunRecord rec;
    rec.seed = seed;
    try {
        rec.report = run_with(config, source, n, phi, seed);
    } catch (const DegenerateData& e) {
        rec.error = e.what();
    }
    return rec;
}

void summarize(ReplicateSummary& s) {
    std::vector<double> ls;
    std::vector<double> viol;
    double sigma_sum = 0.0;
    for (const auto& r : s.records) {
        if (!r.report) {
            ++s.failed_runs;
            continue;
        }
        ls.push_back(r.report->l_value);
        sigma_sum += r.report->sigma;
        if (r.report->violation_sigmas) viol.push_back(*r.report->violation_sigmas);
    }
    auto mean_std = [](const std::vector<double>& xs, double& mean, double& sd) {
        mean = 0.0;
        sd = 0.0;
        if (xs.empty()) return;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        if (xs.size() < 2) return;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    };
    mean_std(ls, s.mean_l, s.std_l);
    if (!ls.empty()) s.mean_sigma = sigma_sum / static_cast<double>(ls.size());
    s.sigma_ratio = s.mean_sigma > 0.0 ? s.std_l / s.mean_sigma : 0.0;
    mean_std(viol, s.mean_violation, s.std_violation);
    if (!viol.empty()) {
        s.min_violation = *std::min_element(viol.begin(), viol.end());
        s.max_violation = *std::max_element(viol.begin(), viol.end());
    }
}

}  // namespace

CountQuad sample_quad(const ExperimentConfig& config, const CorrelationSource& source,
                      const UnitVector& a, const UnitVector& b, Rng& rng) {
    const double t = config.integration_time;
    const double acc = config.accidental_rate * t;
    auto mean = [&](const UnitVector& x, const UnitVector& y) {
        return config.pair_rate * source.probability(x, y, 1, 1) * t + acc;
    };
    CountQuad q;
    q.a = a;
    q.b = b;
    q.duration = t;
    q.n_ab = draw_poisson(mean(a, b), rng);
    q.n_nanb = draw_poisson(mean(-a, -b), rng);
    q.n_nab = draw_poisson(mean(-a, b), rng);
    q.n_anb = draw_poisson(mean(a, -b), rng);
    return q;
}

CountQuad sample_quad(const ExperimentConfig& config, const UnitVector& a, const UnitVector& b,
                      Rng& rng) {
    const quantum::QuantumSource source(config.state);
    return sample_quad(config, source, a, b, rng);
}

Estimate estimate_C(const CountQuad& quad) {
    const auto same = static_cast<double>(quad.n_ab + quad.n_nanb);
    const auto diff = static_cast<double>(quad.n_nab + quad.n_anb);
    return estimate_from(same, diff, same, diff);
}

Estimate estimate_C(const CorrectedQuad& quad) {
    return estimate_from(quad.n_ab + quad.n_nanb, quad.n_nab + quad.n_anb,
                         static_cast<double>(quad.raw.n_ab + quad.raw.n_nanb),
                         static_cast<double>(quad.raw.n_nab + quad.raw.n_anb));
}

CorrectedQuad subtract_accidentals(const CountQuad& quad, double rate) {
    if (!(rate >= 0.0)) throw InvalidArgument("accidental rate must be >= 0");
    const double d = rate * quad.duration;
    auto sub = [d](std::int64_t n) { return std::max(0.0, static_cast<double>(n) - d); };
    return {sub(quad.n_ab), sub(quad.n_nanb), sub(quad.n_nab), sub(quad.n_anb), quad};
}

inequality::InequalityReport run_experiment(const ExperimentConfig& config, int n, double phi) {
    config.validate();
    const quantum::QuantumSource source(config.state);
    return run_with(config, source, n, phi, config.rng_seed);
}

std::uint64_t run_seed(std::uint64_t master, int n, int phi_index, int run) {
    return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(phi_index),
                                static_cast<std::uint64_t>(run)});
}

ReplicateSummary run_batch(const ExperimentConfig& config, int n, double phi, int runs,
                           Execution exec, int phi_index) {
    if (runs < 1) throw InvalidArgument("runs must be >= 1");
    if (n < 1) throw InvalidArgument("N must be >= 1");
    config.validate();
    const quantum::QuantumSource source(config.state);

    ReplicateSummary s;
    s.n = n;
    s.phi = phi;
    s.runs = runs;
    s.records.resize(static_cast<std::size_t>(runs));

    if (exec == Execution::Serial) {
        for (int r = 0; r < runs; ++r) {
            s.records[static_cast<std::size_t>(r)] =
                run_record(config, source, n, phi, run_seed(config.rng_seed, n, phi_index, r));
        }
    } else {
#pragma omp parallel for schedule(dynamic, 8)
        for (int r = 0; r < runs; ++r) {
            s.records[static_cast<std::size_t>(r)] =
                run_record(config, source, n, phi, run_seed(config.rng_seed, n, phi_index, r));
        }
    }
    summarize(s);
    return s;
}

ReplicateSummary replicate(const ExperimentConfig& config, int n, double phi, int runs,
                           Execution exec, int phi_index) {
    if (runs < 2) throw InvalidArgument("replicate: runs must be >= 2");
    return run_batch(config, n, phi, runs, exec, phi_index);
}

std::vector<SweepCell> sweep(const ExperimentConfig& config, const std::vector<int>& n_list,
                             const std::vector<double>& phi_grid, int runs, Execution exec) {
    if (n_list.empty()) throw InvalidArgument("sweep: empty N list");
    if (phi_grid.empty()) throw InvalidArgument("sweep: empty phi grid");
    config.validate();
    const quantum::QuantumSource source(config.state);

    std::vector<SweepCell> cells;
    for (int n : n_list) {
        for (std::size_t i = 0; i < phi_grid.size(); ++i) {
            SweepCell c;
            c.n = n;
            c.phi_index = static_cast<int>(i);
            c.phi = phi_grid[i];
            cells.push_back(c);
        }
    }

    auto fill = [&](SweepCell& c) {
        c.analytic_l = inequality::L_N(source, config.frames, c.n, c.phi).l_value;
        c.bound = inequality::bound(c.n, c.phi);
        c.singlet_l = quantum::singlet_L(c.phi);
        c.summary = run_batch(config, c.n, c.phi, runs, Execution::Serial, c.phi_index);
    };

    const auto count = static_cast<std::ptrdiff_t>(cells.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) fill(cells[static_cast<std::size_t>(i)]);
    } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < count; ++i) fill(cells[static_cast<std::size_t>(i)]);
    }
    return cells;
}

}  // namespace nlv::simulate
