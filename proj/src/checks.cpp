#include "nlv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nlv/errors.hpp"
#include "nlv/inequality.hpp"

namespace nlv::checks {

using sphere::UnitVector;
using Rng = std::mt19937_64;

namespace {

constexpr long kBlock = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(block_index, rng, first_trial, trial_count) -> Partial over
// fixed-size blocks and returns the per-block partials in block order.
template <typename Partial, typename Body>
std::vector<Partial> run_blocks(long trials, std::uint64_t seed, std::uint64_t tag, Execution exec,
                                Body body) {
    const long blocks = (trials + kBlock - 1) / kBlock;
    std::vector<Partial> parts(static_cast<std::size_t>(blocks));
    auto one = [&](long blk) {
        Rng rng(derive_seed(seed, {tag, static_cast<std::uint64_t>(blk)}));
        const long first = blk * kBlock;
        const long count = std::min(kBlock, trials - first);
        parts[static_cast<std::size_t>(blk)] = body(rng, first, count);
    };
    if (exec == Execution::Serial) {
        for (long blk = 0; blk < blocks; ++blk) one(blk);
    } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (long blk = 0; blk < blocks; ++blk) one(blk);
    }
    return parts;
}

UnitVector random_orthogonal(const UnitVector& n, Rng& rng) {
    for (;;) {
        const sphere::Vec3 c = sphere::cross(n, random_unit(rng));
        if (sphere::norm(c) > 1e-6) return UnitVector::normalized(c);
    }
}

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return buf;
}

}  // namespace

LemmaScan scan_lemma(long trials, std::uint64_t seed, int n_max, Execution exec) {
    if (n_max < 1) throw InvalidArgument("scan_lemma: n_max must be >= 1");
    struct Part {
        double min_margin = kInf;
        double max_identity = 0.0;
        double max_gap = 0.0;
    };
    auto parts = run_blocks<Part>(trials, seed, 1, exec, [n_max](Rng& rng, long first, long count) {
        Part p;
        for (long t = first; t < first + count; ++t) {
            const int n = 1 + static_cast<int>(t % n_max);
            const double u = inequality::u_coefficient(n);
            const UnitVector w = random_unit(rng);
            const UnitVector c = random_unit(rng);
            const auto avg = inequality::discrete_average(w, c, n);
            const double identity =
                (std::sin(avg.xi) + n * u * std::cos(avg.xi)) / static_cast<double>(n);
            p.min_margin = std::min(p.min_margin, avg.value - u);
            p.max_identity = std::max(p.max_identity, std::abs(avg.value - identity));

            // c orthogonal to w forces xi = 0, the equality case.
            const UnitVector c_perp = sphere::rotate(w, random_orthogonal(w, rng), std::numbers::pi / 2);
            const auto eq = inequality::discrete_average(w, c_perp, n);
            p.max_gap = std::max(p.max_gap, std::abs(eq.value - u));
        }
        return p;
    });

    LemmaScan scan;
    scan.trials = trials;
    scan.min_margin = kInf;
    for (const auto& p : parts) {
        scan.min_margin = std::min(scan.min_margin, p.min_margin);
        scan.max_identity_error = std::max(scan.max_identity_error, p.max_identity);
        scan.max_equality_gap = std::max(scan.max_equality_gap, p.max_gap);
    }
    scan.passed = scan.min_margin >= -1e-12 && scan.max_identity_error <= 1e-12 &&
                  scan.max_equality_gap <= 1e-9;
    return scan;
}

BoundaryScan scan_leggett_boundary(long trials, std::uint64_t seed, Execution exec) {
    struct Part {
        double min_at_bounds = kInf;
        double max_outside = -kInf;
        double max_shift = 0.0;
        long mismatches = 0;
    };
    auto parts = run_blocks<Part>(trials, seed, 2, exec, [](Rng& rng, long first, long count) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Part p;
        for (long t = first; t < first + count; ++t) {
            const UnitVector u = random_unit(rng);
            const UnitVector v = random_unit(rng);
            const UnitVector a = random_unit(rng);
            const UnitVector b = random_unit(rng);
            const auto range = leggett::admissible_C_range(u, v, a, b);

            const auto lo = leggett::leggett_table(u, v, a, b, range.c_min);
            const auto hi = leggett::leggett_table(u, v, a, b, range.c_max);
            p.min_at_bounds = std::min({p.min_at_bounds, lo.min_entry(), hi.min_entry()});

            const auto above = leggett::leggett_table(u, v, a, b, range.c_max + 1e-6);
            const auto below = leggett::leggett_table(u, v, a, b, range.c_min - 1e-6);
            p.max_outside = std::max({p.max_outside, above.min_entry(), below.min_entry()});

            const double c_in = range.c_min + unit(rng) * (range.c_max - range.c_min);
            const auto mid = leggett::leggett_table(u, v, a, b, c_in);
            for (int r : {1, -1}) {
                p.max_shift = std::max({p.max_shift, std::abs(mid.marginal_a(r) - hi.marginal_a(r)),
                                        std::abs(mid.marginal_b(r) - hi.marginal_b(r))});
            }

            const leggett::SettingPairs pair{{a, b}};
            if (leggett::explicit_model_feasible(u, v, pair) !=
                leggett::explicit_model_feasible_dual(u, v, pair)) {
                ++p.mismatches;
            }
        }
        return p;
    });

    BoundaryScan scan;
    scan.trials = trials;
    scan.min_entry_at_bounds = kInf;
    scan.max_entry_outside = -kInf;
    for (const auto& p : parts) {
        scan.min_entry_at_bounds = std::min(scan.min_entry_at_bounds, p.min_at_bounds);
        scan.max_entry_outside = std::max(scan.max_entry_outside, p.max_outside);
        scan.max_marginal_shift = std::max(scan.max_marginal_shift, p.max_shift);
        scan.dual_form_mismatches += p.mismatches;
    }
    // Marginal sums are C-free algebraically; 1e-15 allows the final rounding.
    scan.passed = scan.min_entry_at_bounds >= -1e-12 && scan.max_entry_outside < 0.0 &&
                  scan.max_marginal_shift <= 1e-15 && scan.dual_form_mismatches == 0;
    return scan;
}

LocalMixtureScan scan_local_mixtures(long ensembles, std::uint64_t seed, int n_max,
                                     int phi_points, Execution exec) {
    if (phi_points < 2) throw InvalidArgument("scan_local_mixtures: need >= 2 phi points");
    struct Part {
        double max_margin = -kInf;
    };
    auto parts = run_blocks<Part>(ensembles, seed, 3, exec, [=](Rng& rng, long first, long count) {
        std::exponential_distribution<double> expo(1.0);
        std::uniform_int_distribution<int> size(1, 4);
        Part p;
        for (long e = first; e < first + count; ++e) {
            const int k = size(rng);
            std::vector<double> w(static_cast<std::size_t>(k));
            double total = 0.0;
            for (double& x : w) total += (x = expo(rng));
            std::vector<leggett::Component> comps;
            for (int i = 0; i < k; ++i) {
                const UnitVector u = random_unit(rng);
                const UnitVector v = random_unit(rng);
                comps.push_back(leggett::make_component(w[static_cast<std::size_t>(i)] / total, u, v,
                                                        leggett::product_correlation));
            }
            // Guard the weight sum against rounding.
            double s = 0.0;
            for (int i = 0; i + 1 < k; ++i) s += comps[static_cast<std::size_t>(i)].weight;
            comps.back().weight = 1.0 - s;
            const leggett::PureEnsemble ensemble(std::move(comps));

            const UnitVector n1 = random_unit(rng);
            const UnitVector n2 = random_orthogonal(n1, rng);
            const sphere::FramePair frames{sphere::PlaneFrame(n1, random_orthogonal(n1, rng)),
                                           sphere::PlaneFrame(n2, random_orthogonal(n2, rng))};
            for (int n = 1; n <= n_max; ++n) {
                for (int i = 0; i < phi_points; ++i) {
                    const double phi = std::numbers::pi * i / (phi_points - 1);
                    p.max_margin = std::max(
                        p.max_margin, inequality::L_N(ensemble, frames, n, phi).margin());
                }
            }
        }
        return p;
    });

    LocalMixtureScan scan;
    scan.ensembles = ensembles;
    scan.max_margin = -kInf;
    for (const auto& p : parts) scan.max_margin = std::max(scan.max_margin, p.max_margin);
    scan.passed = scan.max_margin <= 1e-12;
    return scan;
}

std::vector<UnitVector> sphere_grid(double resolution_deg) {
    if (!(resolution_deg > 0.0)) throw InvalidArgument("sphere_grid: resolution must be > 0");
    const int polar_steps = static_cast<int>(std::lround(180.0 / resolution_deg));
    const int azimuth_steps = static_cast<int>(std::lround(360.0 / resolution_deg));
    const double dp = std::numbers::pi / polar_steps;
    const double da = 2.0 * std::numbers::pi / azimuth_steps;

    std::vector<UnitVector> grid;
    grid.reserve(static_cast<std::size_t>((polar_steps - 1) * azimuth_steps + 2));
    grid.emplace_back(0.0, 0.0, 1.0);
    for (int i = 1; i < polar_steps; ++i) {
        for (int j = 0; j < azimuth_steps; ++j) {
            grid.push_back(UnitVector::from_spherical(i * dp, j * da));
        }
    }
    grid.emplace_back(0.0, 0.0, -1.0);
    return grid;
}

FeasibilitySearch search_explicit_model(const leggett::SettingPairs& pairs, double resolution_deg,
                                        Execution exec) {
    if (pairs.empty()) throw InvalidArgument("search_explicit_model: no setting pairs");
    const auto grid = sphere_grid(resolution_deg);
    const std::size_t g = grid.size();
    const std::size_t m = pairs.size();

    // Row-major tables: ua[i*m + p] = grid_i . a_p, vb[i*m + p] = grid_i . b_p.
    std::vector<double> ab(m), ua(g * m), vb(g * m);
    for (std::size_t p = 0; p < m; ++p) ab[p] = dot(pairs[p].first, pairs[p].second);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t p = 0; p < m; ++p) {
            ua[i * m + p] = dot(grid[i], pairs[p].first);
            vb[i * m + p] = dot(grid[i], pairs[p].second);
        }
    }

    struct Best {
        double margin = -kInf;
        std::size_t iu = 0;
        std::size_t iv = 0;
    };

    // Branch and bound: stop evaluating a pair as soon as it cannot beat
    // the current best. Only strict improvements are taken, so the first
    // maximizer in (iu, iv) order wins.
    auto scan_u = [&](std::size_t iu, Best& best) {
        const double* urow = &ua[iu * m];
        for (std::size_t iv = 0; iv < g; ++iv) {
            const double* vrow = &vb[iv * m];
            double margin = kInf;
            for (std::size_t p = 0; p < m; ++p) {
                const double s = std::min(1.0 - vrow[p] - std::abs(ab[p] + urow[p]),
                                          1.0 + vrow[p] - std::abs(ab[p] - urow[p]));
                if (s < margin) {
                    margin = s;
                    if (margin <= best.margin) break;
                }
            }
            if (margin > best.margin) best = {margin, iu, iv};
        }
    };

    Best best;
    if (exec == Execution::Serial) {
        for (std::size_t iu = 0; iu < g; ++iu) scan_u(iu, best);
    } else {
#pragma omp parallel
        {
            Best local;
#pragma omp for schedule(dynamic, 16) nowait
            for (std::size_t iu = 0; iu < g; ++iu) scan_u(iu, local);
#pragma omp critical
            {
                if (local.margin > best.margin ||
                    (local.margin == best.margin &&
                     std::pair(local.iu, local.iv) < std::pair(best.iu, best.iv))) {
                    best = local;
                }
            }
        }
    }

    FeasibilitySearch out;
    out.grid_points = g;
    out.best_margin = best.margin;
    out.best_u = grid[best.iu];
    out.best_v = grid[best.iv];
    return out;
}

N1Construction check_n1_construction(const sphere::FramePair& frames, int phi_points) {
    const auto [u, v] = leggett::n1_construction(frames);
    N1Construction out;
    out.phi_points = phi_points;
    out.min_slack = kInf;
    for (int i = 1; i <= phi_points; ++i) {
        const double phi = std::numbers::pi * i / phi_points;
        const auto pairs = leggett::measured_pairs(frames, 1, phi);
        if (leggett::explicit_model_feasible(u, v, pairs)) ++out.feasible_points;
        for (const auto& [a, b] : pairs) {
            out.min_slack = std::min(out.min_slack, leggett::explicit_model_slack(u, v, a, b));
        }
    }
    out.passed = out.feasible_points == phi_points;
    return out;
}

std::vector<CheckLine> run_suite(Suite suite, const SuiteOptions& o) {
    std::vector<CheckLine> lines;
    if (suite == Suite::Lemma || suite == Suite::All) {
        const auto s = scan_lemma(o.lemma_trials, o.seed, 16, o.exec);
        lines.push_back({"lemma: discrete average >= u_N (N = 1..16)", s.passed,
                         format("trials=%.0f min_margin=%.3e identity_err=%.3e", double(s.trials),
                                s.min_margin, s.max_identity_error)});
    }
    if (suite == Suite::Leggett || suite == Suite::All) {
        const auto b = scan_leggett_boundary(o.leggett_trials, o.seed, o.exec);
        lines.push_back({"leggett: admissible C range boundary", b.passed,
                         format("min_entry=%.3e outside_max=%.3e marginal_shift=%.3e",
                                b.min_entry_at_bounds, b.max_entry_outside, b.max_marginal_shift)});
        lines.push_back({"leggett: explicit-model condition forms agree", b.dual_form_mismatches == 0,
                         format("mismatches=%.0f", double(b.dual_form_mismatches))});

        const auto mix = scan_local_mixtures(o.mixture_ensembles, o.seed, 5, 25, o.exec);
        lines.push_back({"leggett: local product mixtures obey L_N <= bound", mix.passed,
                         format("ensembles=%.0f max(L-bound)=%.3e", double(mix.ensembles),
                                mix.max_margin)});

        const auto frames = sphere::default_frames();
        const auto n1 = check_n1_construction(frames, 50);
        lines.push_back({"leggett: N = 1 explicit model feasible", n1.passed,
                         format("feasible=%.0f/%.0f min_slack=%.3e", double(n1.feasible_points),
                                double(n1.phi_points), n1.min_slack)});

        const auto pairs = leggett::measured_pairs(frames, 2, 15.0 * std::numbers::pi / 180.0);
        const auto grid = search_explicit_model(pairs, o.grid_resolution_deg, o.exec);
        lines.push_back({"leggett: N = 2 schedule admits no explicit model", !grid.feasible(),
                         format("grid_points=%.0f best_margin=%.4f", double(grid.grid_points),
                                grid.best_margin)});
    }
    return lines;
}

}  // namespace nlv::checks
