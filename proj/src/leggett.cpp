#include "nlv/leggett.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlv/errors.hpp"

namespace nlv::leggett {

namespace {

constexpr double kTableFloor = -1e-12;
constexpr double kWeightTol = 1e-12;
constexpr double kMarginalTol = 1e-12;

}  // namespace

double OutcomeTable::at(int r_a, int r_b) const {
    if (r_a == 1) return r_b == 1 ? p_pp : p_pm;
    return r_b == 1 ? p_mp : p_mm;
}

double OutcomeTable::min_entry() const { return std::min({p_pp, p_pm, p_mp, p_mm}); }

OutcomeTable leggett_table(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                           const UnitVector& b, double c) {
    const double au = dot(a, u);
    const double bv = dot(b, v);
    return {(1.0 + au + bv + c) / 4.0, (1.0 + au - bv - c) / 4.0, (1.0 - au + bv - c) / 4.0,
            (1.0 - au - bv + c) / 4.0};
}

OutcomeTable leggett_outcomes(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                              const UnitVector& b, double c) {
    const OutcomeTable t = leggett_table(u, v, a, b, c);
    if (t.min_entry() < kTableFloor || std::abs(c) > 1.0 + 1e-12) {
        int worst_a = 1;
        int worst_b = 1;
        for (int r_a : {1, -1}) {
            for (int r_b : {1, -1}) {
                if (t.at(r_a, r_b) < t.at(worst_a, worst_b)) {
                    worst_a = r_a;
                    worst_b = r_b;
                }
            }
        }
        throw ConstraintViolation(worst_a, worst_b, std::max(0.0, -t.at(worst_a, worst_b)));
    }
    return t;
}

CRange admissible_C_range(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                          const UnitVector& b) {
    const double au = dot(a, u);
    const double bv = dot(b, v);
    return {-1.0 + std::abs(au + bv), 1.0 - std::abs(au - bv)};
}

double product_correlation(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                           const UnitVector& b) {
    return dot(a, u) * dot(b, v);
}

Component make_component(double weight, const UnitVector& u, const UnitVector& v,
                         CorrelationFn corr) {
    JointLaw law = [u, v, corr = std::move(corr)](const UnitVector& a, const UnitVector& b) {
        return leggett_outcomes(u, v, a, b, corr(u, v, a, b));
    };
    return {weight, u, v, std::move(law)};
}

PureEnsemble::PureEnsemble(std::vector<Component> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw InvalidArgument("PureEnsemble: no components");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0.0)) throw InvalidArgument("PureEnsemble: negative weight");
        if (!c.joint) throw InvalidArgument("PureEnsemble: component without joint law");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kWeightTol) {
        throw InvalidArgument("PureEnsemble: weights sum to " + std::to_string(total));
    }
}

OutcomeTable PureEnsemble::joint(const UnitVector& a, const UnitVector& b) const {
    OutcomeTable sum;
    for (const auto& c : components_) {
        const OutcomeTable t = c.joint(a, b);
        sum.p_pp += c.weight * t.p_pp;
        sum.p_pm += c.weight * t.p_pm;
        sum.p_mp += c.weight * t.p_mp;
        sum.p_mm += c.weight * t.p_mm;
    }
    return sum;
}

double PureEnsemble::probability(const UnitVector& a, const UnitVector& b, int r_a,
                                 int r_b) const {
    return joint(a, b).at(r_a, r_b);
}

MarginalReport check_marginals(const PureEnsemble& ensemble, const SettingPairs& settings) {
    MarginalReport report;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const auto& [a, b] = settings[i];
        const OutcomeTable joint = ensemble.joint(a, b);
        for (int r : {1, -1}) {
            double expect_a = 0.0;
            double expect_b = 0.0;
            for (const auto& c : ensemble.components()) {
                expect_a += c.weight * (1.0 + r * dot(a, c.u)) / 2.0;
                expect_b += c.weight * (1.0 + r * dot(b, c.v)) / 2.0;
            }
            const double dev = std::max(std::abs(joint.marginal_a(r) - expect_a),
                                        std::abs(joint.marginal_b(r) - expect_b));
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_setting = i;
            }
        }
    }
    report.passed = report.max_deviation <= kMarginalTol;
    return report;
}

double explicit_model_slack(const UnitVector& u, const UnitVector& v, const UnitVector& a,
                            const UnitVector& b) {
    const double ab = dot(a, b);
    const double ua = dot(u, a);
    const double vb = dot(v, b);
    return std::min(1.0 - vb - std::abs(ab + ua), 1.0 + vb - std::abs(ab - ua));
}

bool explicit_model_feasible(const UnitVector& u, const UnitVector& v, const SettingPairs& pairs,
                             double tol) {
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) {
        return explicit_model_slack(u, v, p.first, p.second) >= -tol;
    });
}

bool explicit_model_feasible_dual(const UnitVector& u, const UnitVector& v,
                                  const SettingPairs& pairs, double tol) {
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) {
        const double ab = dot(p.first, p.second);
        const double ua = dot(u, p.first);
        const double vb = dot(v, p.second);
        return std::abs(ab + vb) <= 1.0 - ua + tol && std::abs(ab - vb) <= 1.0 + ua + tol;
    });
}

SettingPairs measured_pairs(const sphere::FramePair& frames, int n, double phi) {
    SettingPairs pairs;
    for (const sphere::PlaneFrame* f : {&frames.first, &frames.second}) {
        const auto schedule = sphere::build_schedule(*f, n, phi);
        for (const auto& e : schedule.entries) {
            pairs.emplace_back(e.alice, e.bob0);
            pairs.emplace_back(e.alice, e.bobphi);
        }
    }
    return pairs;
}

std::pair<UnitVector, UnitVector> n1_construction(const sphere::FramePair& frames) {
    const sphere::Vec3 c = sphere::cross(frames.first.perp(), frames.second.perp());
    UnitVector u;
    if (sphere::norm(c) > 1e-12) {
        u = UnitVector::normalized(c);
    } else {
        // Parallel perpendiculars: any direction orthogonal to them.
        u = frames.first.seed();
    }
    return {u, -u};
}

}  // namespace nlv::leggett

namespace nlv {

ConstraintViolation::ConstraintViolation(int r_a, int r_b, double deficit)
    : std::runtime_error("Leggett outcome (" + std::string(r_a > 0 ? "+" : "-") +
                         std::string(r_b > 0 ? "+" : "-") + ") negative by " +
                         std::to_string(deficit)),
      r_a_(r_a),
      r_b_(r_b),
      deficit_(deficit) {}

}  // namespace nlv
