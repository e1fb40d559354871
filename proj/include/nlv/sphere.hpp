#pragma once

// Poincare-sphere geometry in the Stokes basis:
//   S1 = H/V linear, S2 = +-45 deg linear, S3 = circular (R = +S3).

#include <utility>
#include <vector>

namespace nlv::sphere {

inline constexpr double kUnitTolerance = 1e-9;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a);

/// Point on S^2. Always unit length to within 1e-12.
class UnitVector {
public:
    /// (1, 0, 0): horizontal polarization.
    UnitVector() = default;

    /// Accepts components whose norm is within kUnitTolerance of 1 and
    /// renormalizes them; throws InvalidArgument otherwise.
    UnitVector(double x, double y, double z);
    explicit UnitVector(Vec3 v) : UnitVector(v.x, v.y, v.z) {}

    /// Normalizes any nonzero vector.
    static UnitVector normalized(Vec3 v);
    /// Spherical coordinates: polar angle from +S3, azimuth from +S1 (radians).
    static UnitVector from_spherical(double polar, double azimuth);

    double x() const noexcept { return v_.x; }
    double y() const noexcept { return v_.y; }
    double z() const noexcept { return v_.z; }
    Vec3 vec() const noexcept { return v_; }

    UnitVector operator-() const;

    friend bool operator==(const UnitVector&, const UnitVector&) = default;

private:
    struct Trusted {};
    UnitVector(Vec3 v, Trusted) : v_(v) {}

    Vec3 v_{1.0, 0.0, 0.0};

    friend UnitVector rotate(const UnitVector&, const UnitVector&, double);
    friend class PlaneFrame;
};

inline double dot(const UnitVector& a, const UnitVector& b) { return dot(a.vec(), b.vec()); }
inline Vec3 cross(const UnitVector& a, const UnitVector& b) { return cross(a.vec(), b.vec()); }

/// Right-handed Rodrigues rotation of v about axis by angle (radians).
UnitVector rotate(const UnitVector& v, const UnitVector& axis, double angle);

/// Great-circle plane {a : a . normal = 0} with a seed direction inside it.
class PlaneFrame {
public:
    /// Throws InvalidArgument unless |normal . seed| <= 1e-9.
    PlaneFrame(UnitVector normal, UnitVector seed);

    const UnitVector& normal() const noexcept { return normal_; }
    const UnitVector& seed() const noexcept { return seed_; }
    /// normal x seed
    const UnitVector& perp() const noexcept { return perp_; }

    /// Same plane, seed replaced by seed rotated about the normal.
    PlaneFrame rotated_seed(double angle) const;

private:
    UnitVector normal_;
    UnitVector seed_;
    UnitVector perp_;
};

using FramePair = std::pair<PlaneFrame, PlaneFrame>;

/// Plane 1: linear polarizations (normal S3, seed S1).
/// Plane 2: H/V and circular (normal S2, seed S1).
FramePair default_frames();

struct SettingEntry {
    UnitVector alice;
    UnitVector bob0;    // bob at theta = 0 (equals alice)
    UnitVector bobphi;  // bob at theta = phi
};

struct SettingSchedule {
    int plane_index = 1;
    int n = 1;
    double phi = 0.0;
    std::vector<SettingEntry> entries;
};

/// N settings per plane, successive alice directions rotated by pi/N about
/// the plane normal. Throws InvalidArgument for n < 1.
SettingSchedule build_schedule(const PlaneFrame& frame, int n, double phi, int plane_index = 1);

struct AnalyzerAngles {
    double qwp_deg = 0.0;
    double polarizer_deg = 0.0;
};

/// Quarter-wave plate then polarizer settings that transmit the pure
/// polarization state with Stokes vector v. qwp in [0, 90), polarizer in [0, 180).
AnalyzerAngles analyzer_angles(const UnitVector& v);

/// Stokes vector of the state transmitted by a QWP/polarizer analyzer,
/// computed in Jones calculus. Inverse of analyzer_angles.
UnitVector analyzer_stokes(const AnalyzerAngles& angles);

}  // namespace nlv::sphere
