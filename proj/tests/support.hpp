#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nlv/checks.hpp"
#include "nlv/sphere.hpp"

namespace nlv::test {

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed1234ULL);
    return gen;
}

inline sphere::UnitVector random_unit() { return checks::random_unit(rng()); }

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline sphere::UnitVector random_orthogonal(const sphere::UnitVector& n) {
    for (;;) {
        const auto c = sphere::cross(n, random_unit());
        if (sphere::norm(c) > 1e-6) return sphere::UnitVector::normalized(c);
    }
}

/// Random pair of frames with orthogonal normals.
inline sphere::FramePair random_frames() {
    const auto n1 = random_unit();
    const auto n2 = random_orthogonal(n1);
    return {sphere::PlaneFrame(n1, random_orthogonal(n1)),
            sphere::PlaneFrame(n2, random_orthogonal(n2))};
}

inline double distance(const sphere::UnitVector& a, const sphere::UnitVector& b) {
    return sphere::norm(a.vec() - b.vec());
}

}  // namespace nlv::test
