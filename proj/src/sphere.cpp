#include "nlv/sphere.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nlv/errors.hpp"

namespace nlv::sphere {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Wraps an angle in degrees into [0, period).
double wrap_degrees(double deg, double period) {
    double r = std::fmod(deg, period);
    if (r < 0.0) r += period;
    // fmod can leave values a rounding step below period
    if (r >= period - 1e-12) r = 0.0;
    return r;
}

}  // namespace

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

UnitVector::UnitVector(double x, double y, double z) {
    const Vec3 v{x, y, z};
    const double n = norm(v);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTolerance) {
        throw InvalidArgument("UnitVector: norm " + std::to_string(n) + " is not 1");
    }
    // Already unit to rounding: keep the components so that printed and
    // re-parsed vectors compare equal.
    v_ = std::abs(n - 1.0) <= 1e-15 ? v : (1.0 / n) * v;
}

UnitVector UnitVector::normalized(Vec3 v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidArgument("UnitVector::normalized: zero or non-finite vector");
    }
    return UnitVector((1.0 / n) * v, Trusted{});
}

UnitVector UnitVector::from_spherical(double polar, double azimuth) {
    const double s = std::sin(polar);
    return normalized({s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)});
}

UnitVector UnitVector::operator-() const { return UnitVector(-v_, Trusted{}); }

UnitVector rotate(const UnitVector& v, const UnitVector& axis, double angle) {
    const Vec3 k = axis.vec();
    const Vec3 p = v.vec();
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec3 r = c * p + s * cross(k, p) + ((1.0 - c) * dot(k, p)) * k;
    return UnitVector(r, UnitVector::Trusted{});
}

PlaneFrame::PlaneFrame(UnitVector normal, UnitVector seed) : normal_(normal), seed_(seed) {
    const double d = dot(normal_, seed_);
    if (std::abs(d) > kUnitTolerance) {
        throw InvalidArgument("PlaneFrame: seed is not in the plane (normal . seed = " +
                              std::to_string(d) + ")");
    }
    perp_ = UnitVector(cross(normal_, seed_));
}

PlaneFrame PlaneFrame::rotated_seed(double angle) const {
    return PlaneFrame(normal_, rotate(seed_, normal_, angle));
}

FramePair default_frames() {
    return {PlaneFrame(UnitVector(0, 0, 1), UnitVector(1, 0, 0)),
            PlaneFrame(UnitVector(0, 1, 0), UnitVector(1, 0, 0))};
}

SettingSchedule build_schedule(const PlaneFrame& frame, int n, double phi, int plane_index) {
    if (n < 1) throw InvalidArgument("build_schedule: N must be >= 1");

    SettingSchedule schedule;
    schedule.plane_index = plane_index;
    schedule.n = n;
    schedule.phi = phi;
    schedule.entries.reserve(static_cast<std::size_t>(n));

    const double step = std::numbers::pi / n;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    UnitVector alice = frame.seed();
    for (int k = 0; k < n; ++k) {
        if (k > 0) alice = rotate(alice, frame.normal(), step);
        const Vec3 bob = c * alice.vec() + s * cross(frame.normal(), alice);
        schedule.entries.push_back({alice, alice, UnitVector(bob)});
    }
    return schedule;
}

AnalyzerAngles analyzer_angles(const UnitVector& v) {
    // The QWP acts on the Poincare sphere as a quarter turn about its
    // fast axis u = (cos 2a, sin 2a, 0); the analyzer passes v iff the
    // rotated vector lies on the equator at the polarizer direction.
    double two_a = std::atan2(v.y(), v.x());
    if (std::abs(v.x()) < 1e-15 && std::abs(v.y()) < 1e-15) two_a = 0.0;
    two_a = std::fmod(two_a + 2.0 * std::numbers::pi, std::numbers::pi);

    const Vec3 u{std::cos(two_a), std::sin(two_a), 0.0};
    const Vec3 p = dot(u, v.vec()) * u - cross(u, v.vec());
    const double two_b = std::atan2(p.y, p.x);

    return {wrap_degrees(two_a / 2.0 / kDeg, 90.0), wrap_degrees(two_b / 2.0 / kDeg, 180.0)};
}

UnitVector analyzer_stokes(const AnalyzerAngles& angles) {
    using cd = std::complex<double>;
    using Mat2 = std::array<std::array<cd, 2>, 2>;

    const double a = angles.qwp_deg * kDeg;
    const double b = angles.polarizer_deg * kDeg;
    const double ca = std::cos(a);
    const double sa = std::sin(a);

    // QWP with fast axis at a: Rot(a) diag(1, -i) Rot(-a).
    const cd ret{0.0, -1.0};
    Mat2 qwp{};
    qwp[0][0] = ca * ca + ret * sa * sa;
    qwp[0][1] = (1.0 - ret) * ca * sa;
    qwp[1][0] = (1.0 - ret) * ca * sa;
    qwp[1][1] = sa * sa + ret * ca * ca;

    // Transmitted input state: qwp^dagger |b>.
    const std::array<cd, 2> lin{std::cos(b), std::sin(b)};
    std::array<cd, 2> psi{};
    for (int i = 0; i < 2; ++i) {
        psi[i] = std::conj(qwp[0][i]) * lin[0] + std::conj(qwp[1][i]) * lin[1];
    }

    const cd cross_term = std::conj(psi[0]) * psi[1];
    const double s0 = std::norm(psi[0]) + std::norm(psi[1]);
    return UnitVector::normalized({(std::norm(psi[0]) - std::norm(psi[1])) / s0,
                                   2.0 * cross_term.real() / s0, 2.0 * cross_term.imag() / s0});
}

}  // namespace nlv::sphere
