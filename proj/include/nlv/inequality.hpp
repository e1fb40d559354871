#pragma once

// Finite-setting Leggett inequality:
//   L_N = |E_1(phi) + E_1(0)| + |E_2(phi) + E_2(0)| <= 4 - 2 u_N |sin(phi/2)|
// where E_j(theta) averages C over N directions in plane j spaced by pi/N.

#include <optional>

#include "nlv/source.hpp"
#include "nlv/sphere.hpp"

namespace nlv::inequality {

/// (1/N) cot(pi / 2N). Exactly 0 for N = 1; increases to 2/pi.
double u_coefficient(int n);

/// The N -> infinity limit 2/pi.
double u_limit();

/// 4 - 2 u_N |sin(phi/2)|
double bound(int n, double phi);

/// 4 - (4/pi) |sin(phi/2)|
double continuum_bound(double phi);

/// d bound / d phi for phi with sin(phi/2) != 0.
double bound_derivative(int n, double phi);

struct DiscreteAverage {
    double value = 0.0;  ///< (1/N) sum_k |(R^k c) . w|
    double xi = 0.0;     ///< decomposition angle in [0, pi/N)
};

/// Averages |(R^k c) . w| over k = 0..N-1, R the pi/N rotation about the
/// axis orthogonal to w and c.
DiscreteAverage discrete_average(const sphere::UnitVector& w, const sphere::UnitVector& c, int n);

/// Axis used by discrete_average: normalize(w x c), or for collinear
/// inputs the lexicographically smallest unit vector orthogonal to w.
sphere::UnitVector averaging_axis(const sphere::UnitVector& w, const sphere::UnitVector& c);

enum class Theta { Zero, Phi };

/// (1/N) sum_k C(a^k, b^k) over the schedule at theta = 0 or theta = phi.
double E_jN(const CorrelationSource& source, const sphere::SettingSchedule& schedule,
            Theta theta);

struct InequalityReport {
    int n = 1;
    double phi = 0.0;
    double l_value = 0.0;
    double bound = 4.0;
    double sigma = 0.0;
    /// (l_value - bound) / sigma; empty for analytic reports.
    std::optional<double> violation_sigmas;
    sphere::FramePair frames = sphere::default_frames();

    double margin() const { return l_value - bound; }
};

/// Throws InvalidArgument when |n_1 . n_2| > 1e-9.
void require_orthogonal(const sphere::FramePair& frames);

/// Analytic L_N of a source (sigma = 0).
InequalityReport L_N(const CorrelationSource& source, const sphere::FramePair& frames, int n,
                     double phi);

struct ContinuumResult {
    double l_value = 0.0;
    double bound = 4.0;
};

/// E_j averaged over m directions spaced pi/m in each plane, against the
/// N -> infinity bound.
ContinuumResult continuum_L(const CorrelationSource& source, const sphere::FramePair& frames,
                            double phi, int m);

/// 2 asin(u_N / 4): the ideal-singlet maximizer of L - bound.
/// Throws NoViolation for N = 1.
double optimal_phi(int n);
double optimal_phi_continuum();

/// Golden-section maximization of f on [lo, hi] to the given bracket width.
template <typename F>
double golden_section_maximize(F&& f, double lo, double hi, double tol) {
    const double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

struct ViolationScan {
    double best_phi = 0.0;
    double best_margin = 0.0;  ///< max over phi of L - bound
    /// Interval of phi where L > bound, when best_margin > 0.
    std::optional<std::pair<double, double>> region;
};

/// Maximizes L_N - bound over phi in [lo, hi] (radians) by golden-section
/// search, then brackets the violation region by bisection.
ViolationScan scan_violation(const CorrelationSource& source, const sphere::FramePair& frames,
                             int n, double lo, double hi, double tol);

}  // namespace nlv::inequality
