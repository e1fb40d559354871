#pragma once

// Building blocks of Leggett's non-local-variable model: sources emitting
// product states |u>|v>, joint law P_uv and its positivity constraints.

#include <functional>
#include <utility>
#include <vector>

#include "nlv/source.hpp"
#include "nlv/sphere.hpp"

namespace nlv::leggett {

using sphere::UnitVector;

struct OutcomeTable {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double at(int r_a, int r_b) const;
    double sum() const { return p_pp + p_pm + p_mp + p_mm; }
    double min_entry() const;
    double marginal_a(int r_a) const { return at(r_a, 1) + at(r_a, -1); }
    double marginal_b(int r_b) const { return at(1, r_b) + at(-1, r_b); }
};

/// Entries (1 + r_a a.u + r_b b.v + r_a r_b C)/4 without any range check.
OutcomeTable leggett_table(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                           const UnitVector& b, double c);

/// Same as leggett_table, but throws ConstraintViolation naming the most
/// negative (r_a, r_b) entry when C is outside admissible_C_range.
OutcomeTable leggett_outcomes(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                              const UnitVector& b, double c);

struct CRange {
    double c_min = -1.0;
    double c_max = 1.0;
};

/// c_min = -1 + |a.u + b.v|, c_max = 1 - |a.u - b.v|.
CRange admissible_C_range(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                          const UnitVector& b);

/// C(u, v, a, b) for one emitted product state.
using CorrelationFn =
    std::function<double(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                         const UnitVector& b)>;

/// (a.u)(b.v): the correlation of an uncorrelated product state.
double product_correlation(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                           const UnitVector& b);

/// Joint table of one component. Normally derived from a CorrelationFn;
/// tests may install arbitrary tables to exercise the marginal check.
using JointLaw = std::function<OutcomeTable(const UnitVector& a, const UnitVector& b)>;

struct Component {
    double weight = 1.0;
    UnitVector u;
    UnitVector v;
    JointLaw joint;
};

/// Component whose joint law is leggett_outcomes with the given C.
Component make_component(double weight, const UnitVector& u, const UnitVector& v,
                         CorrelationFn corr);

/// Finite mixture rho(u, v) of product states. Weights must be >= 0 and
/// sum to 1 within 1e-12.
class PureEnsemble final : public CorrelationSource {
public:
    explicit PureEnsemble(std::vector<Component> components);

    const std::vector<Component>& components() const noexcept { return components_; }

    OutcomeTable joint(const UnitVector& a, const UnitVector& b) const;

    double probability(const UnitVector& a, const UnitVector& b, int r_a,
                       int r_b) const override;

private:
    std::vector<Component> components_;
};

struct MarginalReport {
    double max_deviation = 0.0;
    std::size_t worst_setting = 0;
    bool passed = true;
};

/// Compares ensemble-summed joint marginals against sum w (1 + r a.u)/2 and
/// sum w (1 + r b.v)/2 for each setting pair. Passes iff deviation <= 1e-12.
MarginalReport check_marginals(const PureEnsemble& ensemble,
                               const std::vector<std::pair<UnitVector, UnitVector>>& settings);

using SettingPairs = std::vector<std::pair<UnitVector, UnitVector>>;

/// Slack of the explicit-model validity condition for one measured pair:
/// min over signs of (1 -+ v.b) - |a.b +- u.a|. Non-negative iff valid.
double explicit_model_slack(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                            const UnitVector& b);

/// |a.b +- u.a| <= 1 -+ v.b for every pair and both signs.
bool explicit_model_feasible(const UnitVector& u, const UnitVector& v, const SettingPairs& pairs,
                             double tol = 1e-12);

/// The equivalent form |a.b +- v.b| <= 1 -+ u.a.
bool explicit_model_feasible_dual(const UnitVector& u, const UnitVector& v,
                                  const SettingPairs& pairs, double tol = 1e-12);

/// All (a_j, b_j(theta)) pairs of both planes' N = n schedules for theta in {0, phi}.
SettingPairs measured_pairs(const sphere::FramePair& frames, int n, double phi);

/// The N = 1 construction: u orthogonal to both seeds' perpendicular
/// directions, v = -u. Returns (u, v).
std::pair<UnitVector, UnitVector> n1_construction(const sphere::FramePair& frames);

}  // namespace nlv::leggett
