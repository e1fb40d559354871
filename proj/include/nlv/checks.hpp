#pragma once

// Randomized property scans over the inequality and Leggett-model
// machinery. Trials are split into fixed blocks with their own derived
// seeds, so serial and OpenMP execution give identical numbers.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nlv/leggett.hpp"
#include "nlv/parallel.hpp"
#include "nlv/sphere.hpp"

namespace nlv::checks {

/// Uniform point on S^2.
template <typename Rng>
sphere::UnitVector random_unit(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (;;) {
        const sphere::Vec3 v{g(rng), g(rng), g(rng)};
        if (sphere::norm(v) > 1e-6) return sphere::UnitVector::normalized(v);
    }
}

struct LemmaScan {
    long trials = 0;
    /// min over trials of discrete_average - u_N
    double min_margin = 0.0;
    /// max |value - (sin xi + N u_N cos xi)/N|
    double max_identity_error = 0.0;
    /// max |value - u_N| over constructions with xi = 0
    double max_equality_gap = 0.0;
    bool passed = false;
};

/// Random (w, c) with N cycling over 1..n_max.
LemmaScan scan_lemma(long trials, std::uint64_t seed, int n_max, Execution exec);

struct BoundaryScan {
    long trials = 0;
    double min_entry_at_bounds = 0.0;   ///< over C = c_min and C = c_max
    double max_entry_outside = 0.0;     ///< min entry with C = c_max + 1e-6 (must be < 0)
    double max_marginal_shift = 0.0;    ///< marginal change when C moves inside the range
    long dual_form_mismatches = 0;      ///< explicit_model_feasible vs its equivalent form
    bool passed = false;
};

BoundaryScan scan_leggett_boundary(long trials, std::uint64_t seed, Execution exec);

struct LocalMixtureScan {
    long ensembles = 0;
    double max_margin = 0.0;  ///< max of L_N - bound (must be <= 1e-12)
    bool passed = false;
};

/// Random finite mixtures of uncorrelated product states (C = (a.u)(b.v))
/// with random orthogonal frames, N in 1..n_max, phi on a grid over [0, pi].
LocalMixtureScan scan_local_mixtures(long ensembles, std::uint64_t seed, int n_max,
                                     int phi_points, Execution exec);

/// Latitude/longitude grid with the given spacing; poles appear once.
std::vector<sphere::UnitVector> sphere_grid(double resolution_deg);

struct FeasibilitySearch {
    std::size_t grid_points = 0;
    double best_margin = 0.0;  ///< max over (u, v) of min slack; >= 0 means feasible
    sphere::UnitVector best_u;
    sphere::UnitVector best_v;
    bool feasible(double tol = 1e-12) const { return best_margin >= -tol; }
};

/// Exact maximum of the explicit-model slack over all grid pairs (u, v).
FeasibilitySearch search_explicit_model(const leggett::SettingPairs& pairs, double resolution_deg,
                                        Execution exec);

struct N1Construction {
    int phi_points = 0;
    int feasible_points = 0;
    double min_slack = 0.0;
    bool passed = false;
};

/// N = 1 schedule with u = -v orthogonal to both perpendicular directions,
/// phi on a grid over (0, pi].
N1Construction check_n1_construction(const sphere::FramePair& frames, int phi_points);

/// One line of a check report.
struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class Suite { Lemma, Leggett, All };

struct SuiteOptions {
    long lemma_trials = 100000;
    long leggett_trials = 100000;
    long mixture_ensembles = 1000;
    double grid_resolution_deg = 1.0;
    std::uint64_t seed = 20080101;
    Execution exec = Execution::Parallel;
};

std::vector<CheckLine> run_suite(Suite suite, const SuiteOptions& options);

}  // namespace nlv::checks
