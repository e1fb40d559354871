#include "nlv/inequality.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlv/errors.hpp"

namespace nlv::inequality {

using sphere::UnitVector;

double u_coefficient(int n) {
    if (n < 1) throw InvalidArgument("u_coefficient: N must be >= 1");
    if (n == 1) return 0.0;
    const double x = std::numbers::pi / (2.0 * n);
    return std::cos(x) / std::sin(x) / n;
}

double u_limit() { return 2.0 / std::numbers::pi; }

double bound(int n, double phi) { return 4.0 - 2.0 * u_coefficient(n) * std::abs(std::sin(phi / 2.0)); }

double continuum_bound(double phi) {
    return 4.0 - 4.0 / std::numbers::pi * std::abs(std::sin(phi / 2.0));
}

double bound_derivative(int n, double phi) {
    const double s = std::sin(phi / 2.0);
    const double sign = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    return -u_coefficient(n) * std::cos(phi / 2.0) * sign;
}

UnitVector averaging_axis(const UnitVector& w, const UnitVector& c) {
    const sphere::Vec3 n = sphere::cross(w, c);
    if (sphere::norm(n) > 1e-12) return UnitVector::normalized(n);

    // Minimizing x over the great circle orthogonal to w, then y.
    const sphere::Vec3 ex{1.0, 0.0, 0.0};
    const sphere::Vec3 t = ex - w.x() * w.vec();
    if (sphere::norm(t) > 1e-12) return UnitVector::normalized(-t);
    return UnitVector(0.0, -1.0, 0.0);
}

DiscreteAverage discrete_average(const UnitVector& w, const UnitVector& c, int n) {
    if (n < 1) throw InvalidArgument("discrete_average: N must be >= 1");
    const UnitVector axis = averaging_axis(w, c);
    const double step = std::numbers::pi / n;

    double sum = 0.0;
    UnitVector ck = c;
    for (int k = 0; k < n; ++k) {
        if (k > 0) ck = sphere::rotate(ck, axis, step);
        sum += std::abs(dot(ck, w));
    }

    const double angle = std::atan2(sphere::norm(sphere::cross(w, c)), dot(w, c));
    double xi = std::fmod(angle - std::numbers::pi / 2.0, step);
    if (xi < 0.0) xi += step;
    if (xi >= step) xi -= step;
    return {sum / n, xi};
}

double E_jN(const CorrelationSource& source, const sphere::SettingSchedule& schedule, Theta theta) {
    double sum = 0.0;
    for (const auto& e : schedule.entries) {
        sum += source.correlation(e.alice, theta == Theta::Zero ? e.bob0 : e.bobphi);
    }
    return sum / static_cast<double>(schedule.entries.size());
}

void require_orthogonal(const sphere::FramePair& frames) {
    const double d = dot(frames.first.normal(), frames.second.normal());
    if (std::abs(d) > 1e-9) {
        throw InvalidArgument("plane normals are not orthogonal (n1 . n2 = " + std::to_string(d) +
                              ")");
    }
}

namespace {

double plane_term(const CorrelationSource& source, const sphere::PlaneFrame& frame, int n,
                  double phi, int index) {
    const auto schedule = sphere::build_schedule(frame, n, phi, index);
    return std::abs(E_jN(source, schedule, Theta::Phi) + E_jN(source, schedule, Theta::Zero));
}

}  // namespace

InequalityReport L_N(const CorrelationSource& source, const sphere::FramePair& frames, int n,
                     double phi) {
    require_orthogonal(frames);
    InequalityReport report;
    report.n = n;
    report.phi = phi;
    report.bound = bound(n, phi);
    report.l_value = plane_term(source, frames.first, n, phi, 1) +
                     plane_term(source, frames.second, n, phi, 2);
    report.frames = frames;
    return report;
}

ContinuumResult continuum_L(const CorrelationSource& source, const sphere::FramePair& frames,
                            double phi, int m) {
    if (m < 1) throw InvalidArgument("continuum_L: grid size must be >= 1");
    require_orthogonal(frames);
    const double l = plane_term(source, frames.first, m, phi, 1) +
                     plane_term(source, frames.second, m, phi, 2);
    return {l, continuum_bound(phi)};
}

double optimal_phi(int n) {
    if (n < 1) throw InvalidArgument("optimal_phi: N must be >= 1");
    if (n == 1) throw NoViolation("optimal_phi: the N = 1 inequality cannot be violated (u_1 = 0)");
    return 2.0 * std::asin(u_coefficient(n) / 4.0);
}

double optimal_phi_continuum() { return 2.0 * std::asin(u_limit() / 4.0); }

ViolationScan scan_violation(const CorrelationSource& source, const sphere::FramePair& frames,
                             int n, double lo, double hi, double tol) {
    require_orthogonal(frames);
    auto margin = [&](double phi) { return L_N(source, frames, n, phi).margin(); };

    ViolationScan scan;
    scan.best_phi = golden_section_maximize(margin, lo, hi, tol);
    scan.best_margin = margin(scan.best_phi);
    if (scan.best_margin <= 0.0) return scan;

    // Bisect for the sign change between an endpoint and the optimum.
    auto edge = [&](double outside, double inside) {
        if (margin(outside) > 0.0) return outside;
        while (std::abs(inside - outside) > tol) {
            const double mid = 0.5 * (inside + outside);
            (margin(mid) > 0.0 ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    scan.region = std::make_pair(edge(lo, scan.best_phi), edge(hi, scan.best_phi));
    return scan;
}

}  // namespace nlv::inequality
