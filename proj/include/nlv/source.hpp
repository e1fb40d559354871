#pragma once

#include "nlv/sphere.hpp"

namespace nlv {

/// Anything that predicts joint +-1 outcome statistics for a pair of
/// von Neumann measurements labelled by Poincare-sphere directions.
class CorrelationSource {
public:
    virtual ~CorrelationSource() = default;

    /// P(r_a, r_b | a, b) with r_a, r_b in {+1, -1}.
    virtual double probability(const sphere::UnitVector& a, const sphere::UnitVector& b, int r_a,
                               int r_b) const = 0;

    /// Sum over r_a r_b P(r_a, r_b | a, b).
    virtual double correlation(const sphere::UnitVector& a, const sphere::UnitVector& b) const {
        double c = 0.0;
        for (int r_a : {1, -1}) {
            for (int r_b : {1, -1}) c += r_a * r_b * probability(a, b, r_a, r_b);
        }
        return c;
    }

    /// True when C(R a, R b) = C(a, b) for every rotation R.
    virtual bool rotation_invariant() const { return false; }
};

}  // namespace nlv
