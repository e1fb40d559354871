// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nlv/checks.hpp"
#include "nlv/cli.hpp"
#include "nlv/inequality.hpp"
#include "nlv/quantum.hpp"
#include "nlv/simulate.hpp"
#include "support.hpp"

using namespace nlv;
using nlv::test::kDeg;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = time_limit_s <= 0 || secs < time_limit_s;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s %2d %s: %s (%.2f s%s)\n", ok ? "PASS" : "FAIL", id, name, out.detail.c_str(),
                secs, in_time ? "" : fmt(", limit %.0f s", time_limit_s).c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    criterion(1, "bounds match the tabulated values", 1.0, [] {
        struct Row {
            int n;
            double phi_deg;
            const char* bound;
        };
        const Row rows[] = {{2, 12.5, "3.8911"}, {2, 15, "3.8695"},   {2, 17.5, "3.8479"},
                            {3, 12.5, "3.8743"}, {3, 15, "3.8493"},   {3, 17.5, "3.8243"},
                            {3, 20, "3.7995"},   {4, 12.5, "3.8686"}, {4, 15, "3.8424"},
                            {4, 17.5, "3.8164"}};
        int matched = 0;
        std::string miss;
        for (const auto& r : rows) {
            const std::string got = fmt("%.4f", inequality::bound(r.n, r.phi_deg * kDeg));
            if (got == r.bound) {
                ++matched;
            } else {
                miss += fmt(" N=%.0f phi=%.1f", r.n, r.phi_deg) + " got " + got;
            }
        }
        return Outcome{matched == 10, fmt("%.0f/10 rows", matched) + miss};
    });

    criterion(2, "singlet L_N = 2(1 + cos phi)", 5.0, [] {
        const quantum::QuantumSource singlet(quantum::singlet());
        double worst = 0;
        for (int f = 0; f < 20; ++f) {
            const auto frames = f == 0 ? sphere::default_frames() : test::random_frames();
            for (int n = 1; n <= 6; ++n) {
                for (int i = 0; i < 50; ++i) {
                    const double phi = std::numbers::pi * i / 49;
                    const double l = inequality::L_N(singlet, frames, n, phi).l_value;
                    worst = std::max(worst, std::abs(l - quantum::singlet_L(phi)));
                }
            }
        }
        return Outcome{worst <= 1e-12, fmt("max |L - 2(1+cos phi)| = %.2e over 20 frames x N 1..6 x 50 phi", worst)};
    });

    criterion(3, "optimal angles", 1.0, [] {
        const double n2 = inequality::optimal_phi(2) / kDeg;
        const double inf = inequality::optimal_phi_continuum() / kDeg;
        return Outcome{std::abs(n2 - 14.36) <= 0.05 && std::abs(inf - 18.31) <= 0.05,
                       fmt("N=2 %.4f deg, continuum %.4f deg", n2, inf)};
    });

    criterion(4, "discrete-average lemma", 10.0, [] {
        const auto s = checks::scan_lemma(100000, 20080101, 16, Execution::Parallel);
        return Outcome{s.passed && s.min_margin >= -1e-12 && s.max_identity_error <= 1e-12,
                       fmt("1e5 trials, min(avg - u_N) = %.3e, identity error %.2e", s.min_margin,
                           s.max_identity_error)};
    });

    criterion(5, "Leggett admissible-range consistency", 0, [] {
        const auto b = checks::scan_leggett_boundary(100000, 20080102, Execution::Parallel);
        return Outcome{b.passed, fmt("1e5 trials, min entry at bounds %.2e, outside %.2e, "
                                     "marginal shift %.1e, form mismatches %.0f",
                                     b.min_entry_at_bounds, b.max_entry_outside,
                                     b.max_marginal_shift, double(b.dual_form_mismatches))};
    });

    criterion(6, "local product mixtures never violate", 0, [] {
        const auto m = checks::scan_local_mixtures(1000, 20080103, 5, 25, Execution::Parallel);
        return Outcome{m.passed && m.ensembles == 1000,
                       fmt("1000 ensembles, N 1..5, 25 phi, max(L - bound) = %.4f", m.max_margin)};
    });

    criterion(7, "explicit model exists for N = 1, not for N = 2", 0, [] {
        const auto frames = sphere::default_frames();
        const auto n1 = checks::check_n1_construction(frames, 50);
        const auto pairs = leggett::measured_pairs(frames, 2, 15 * kDeg);
        const auto grid = checks::search_explicit_model(pairs, 1.0, Execution::Parallel);
        return Outcome{n1.passed && !grid.feasible(),
                       fmt("N=1 feasible %.0f/%.0f; N=2 best slack %.4f on %.0f-point 1 deg grid",
                           n1.feasible_points, n1.phi_points, grid.best_margin,
                           double(grid.grid_points))};
    });

    criterion(8, "simulated N = 4, phi = 15 deg measurement", 120.0, [] {
        simulate::ExperimentConfig c;  // measured visibilities, 1860/s, 0.41/s, 4 s
        const auto s = simulate::replicate(c, 4, 15 * kDeg, 200, Execution::Parallel);
        double lo = 1e9, hi = 0;
        for (const auto& r : s.records) {
            if (!r.report) continue;
            lo = std::min(lo, r.report->sigma);
            hi = std::max(hi, r.report->sigma);
        }
        const bool ok = s.failed_runs == 0 && std::abs(s.mean_l - 3.8955) <= 0.01 && lo >= 0.002 &&
                        hi <= 0.004 && s.mean_violation > 10;
        return Outcome{ok, fmt("mean L %.4f (target 3.8955 +- 0.01), sigma in [%.5f, %.5f], "
                               "mean violation %.2f sigma",
                               s.mean_l, lo, hi, s.mean_violation)};
    });

    criterion(9, "propagated sigma matches run-to-run spread", 0, [] {
        const simulate::ExperimentConfig c;
        const auto s = simulate::replicate(c, 2, 15 * kDeg, 1000, Execution::Parallel);
        return Outcome{s.failed_runs == 0 && std::abs(s.sigma_ratio - 1) <= 0.10,
                       fmt("1000 runs: std(L) %.6f, mean sigma %.6f, ratio %.4f", s.std_l,
                           s.mean_sigma, s.sigma_ratio)};
    });

    criterion(10, "simulate output is deterministic", 0, [] {
        cli::SimulateOptions o;
        o.runs = 20;
        o.config.rng_seed = 123456789;
        std::ostringstream a, b, err;
        const int ra = cli::cmd_simulate(o, a, err);
        const int rb = cli::cmd_simulate(o, b, err);
        const auto da = cli::data_section(a.str());
        const auto db = cli::data_section(b.str());
        return Outcome{ra == 0 && rb == 0 && da == db && !da.empty(),
                       fmt("two invocations, %.0f data bytes each, identical: ", double(da.size())) +
                           (da == db ? "yes" : "no")};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
