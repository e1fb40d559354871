#pragma once

// Monte Carlo model of the photon-counting experiment: Poissonian
// coincidence counts per analyzer sign pair plus accidentals, the
// count-ratio correlation estimator and propagation of its error to L.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlv/inequality.hpp"
#include "nlv/parallel.hpp"
#include "nlv/quantum.hpp"
#include "nlv/sphere.hpp"

namespace nlv::simulate {

using Rng = std::mt19937_64;

struct ExperimentConfig {
    /// Detected pairs per second. 930 s^-1 orthogonal-polarizer coincidences
    /// correspond to P(++) = 1/2 of the singlet, hence 1860 s^-1.
    double pair_rate = 1860.0;
    double accidental_rate = 0.41;  // s^-1
    double integration_time = 4.0;  // s per analyzer setting
    quantum::TwoQubitState state = quantum::from_visibilities(0.995, 0.990, 0.982);
    std::string state_descriptor = "visibilities:0.995,0.99,0.982";
    sphere::FramePair frames = sphere::default_frames();
    std::uint64_t rng_seed = 1;
    bool subtract_accidentals = false;

    /// Throws InvalidArgument unless rates and time are in range.
    void validate() const;
};

/// Coincidence counts n_{+a,+b}, n_{-a,-b}, n_{-a,+b}, n_{+a,-b}.
struct CountQuad {
    std::int64_t n_ab = 0;
    std::int64_t n_nanb = 0;
    std::int64_t n_nab = 0;
    std::int64_t n_anb = 0;
    sphere::UnitVector a;
    sphere::UnitVector b;
    double duration = 0.0;

    std::int64_t total() const { return n_ab + n_nanb + n_nab + n_anb; }
};

/// Accidental-corrected counts; variances still come from the raw counts.
struct CorrectedQuad {
    double n_ab = 0.0;
    double n_nanb = 0.0;
    double n_nab = 0.0;
    double n_anb = 0.0;
    CountQuad raw;
};

struct Estimate {
    double c_hat = 0.0;
    double sigma = 0.0;
};

/// Draws the four counts in the order ++, --, -+, +- from Poisson laws with
/// mean pair_rate P T + accidental_rate T.
CountQuad sample_quad(const ExperimentConfig& config, const CorrelationSource& source,
                      const sphere::UnitVector& a, const sphere::UnitVector& b, Rng& rng);
CountQuad sample_quad(const ExperimentConfig& config, const sphere::UnitVector& a,
                      const sphere::UnitVector& b, Rng& rng);

/// c = D/S; sigma^2 = [(1-c)^2 (n_ab + n_nanb) + (1+c)^2 (n_nab + n_anb)] / S^2.
/// Throws DegenerateData when S = 0.
Estimate estimate_C(const CountQuad& quad);
Estimate estimate_C(const CorrectedQuad& quad);

/// Subtracts rate * duration from each count, flooring at 0.
CorrectedQuad subtract_accidentals(const CountQuad& quad, double rate);

/// One full measurement of L_N: 4N quads, sequential draws from a
/// generator seeded with config.rng_seed.
inequality::InequalityReport run_experiment(const ExperimentConfig& config, int n, double phi);

struct RunRecord {
    std::uint64_t seed = 0;
    std::optional<inequality::InequalityReport> report;
    std::string error;  // degenerate-data message when report is empty
};

struct ReplicateSummary {
    int n = 0;
    double phi = 0.0;
    int runs = 0;
    int failed_runs = 0;
    double mean_l = 0.0;
    double std_l = 0.0;        ///< sample standard deviation over runs
    double mean_sigma = 0.0;   ///< mean propagated sigma(L)
    double sigma_ratio = 0.0;  ///< std_l / mean_sigma
    double mean_violation = 0.0;
    double std_violation = 0.0;
    double min_violation = 0.0;
    double max_violation = 0.0;
    std::vector<RunRecord> records;
};

/// Seed of run r in a sweep cell.
std::uint64_t run_seed(std::uint64_t master, int n, int phi_index, int run);

/// Independent runs seeded by run_seed(config.rng_seed, n, phi_index, r).
/// Throws InvalidArgument for runs < 2.
ReplicateSummary replicate(const ExperimentConfig& config, int n, double phi, int runs,
                           Execution exec = Execution::Parallel, int phi_index = 0);

/// Same as replicate but accepts runs >= 1 (statistics of a single run
/// have zero spread).
ReplicateSummary run_batch(const ExperimentConfig& config, int n, double phi, int runs,
                           Execution exec, int phi_index = 0);

struct SweepCell {
    int n = 0;
    int phi_index = 0;
    double phi = 0.0;
    double analytic_l = 0.0;
    double bound = 0.0;
    double singlet_l = 0.0;
    ReplicateSummary summary;
};

/// Grid of run_batch summaries over n_list x phi_grid, cells evaluated
/// concurrently, output ordered by (n, phi index).
std::vector<SweepCell> sweep(const ExperimentConfig& config, const std::vector<int>& n_list,
                             const std::vector<double>& phi_grid, int runs,
                             Execution exec = Execution::Parallel);

}  // namespace nlv::simulate
