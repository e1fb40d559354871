#include "nlv/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <vector>
#include <cmath>
#include <complex>
#include <string>

#include "nlv/errors.hpp"

namespace nlv::quantum {

namespace {

using cd = std::complex<double>;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPositivityFloor = -1e-10;

Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
    return out;
}

Matrix2 projector(const sphere::UnitVector& n, int r) {
    return 0.5 * (Matrix2::Identity() + static_cast<double>(r) * pauli_along(n));
}

void check_outcome(int r) {
    if (r != 1 && r != -1) throw InvalidArgument("outcome must be +1 or -1");
}

void check_visibility(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("visibility " + std::to_string(v) + " outside [0, 1]");
    }
}

Matrix4 singlet_projector() {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

}  // namespace

const Matrix2& pauli(int i) {
    static const std::array<Matrix2, 4> mats = [] {
        std::array<Matrix2, 4> m;
        m[0] = Matrix2::Identity();
        m[1] << 1.0, 0.0, 0.0, -1.0;
        m[2] << 0.0, 1.0, 1.0, 0.0;
        m[3] << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
        return m;
    }();
    return mats.at(static_cast<std::size_t>(i));
}

Matrix2 pauli_along(const sphere::UnitVector& n) {
    return n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
}

TwoQubitState::TwoQubitState(Matrix4 rho) : rho_(std::move(rho)) {
    const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol) {
        throw InvalidArgument("density matrix is not Hermitian (deviation " + std::to_string(asym) +
                              ")");
    }
    const cd tr = rho_.trace();
    if (std::abs(tr - cd(1.0, 0.0)) > kTraceTol) {
        throw InvalidArgument("density matrix trace is " + std::to_string(tr.real()));
    }
    const double lam = min_eigenvalue();
    if (lam < kPositivityFloor) {
        throw InvalidArgument("density matrix has negative eigenvalue " + std::to_string(lam));
    }
}

double TwoQubitState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

CorrelationTensor correlation_tensor(const TwoQubitState& state) {
    std::array<double, 3> t{};
    for (int i = 1; i <= 3; ++i) {
        t[i - 1] = (state.rho() * kron(pauli(i), pauli(i))).trace().real();
    }
    return {t[0], t[1], t[2]};
}

double outcome_probability(const TwoQubitState& state, const sphere::UnitVector& a,
                           const sphere::UnitVector& b, int r_a, int r_b) {
    check_outcome(r_a);
    check_outcome(r_b);
    const double p = (state.rho() * kron(projector(a, r_a), projector(b, r_b))).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

double correlation(const TwoQubitState& state, const sphere::UnitVector& a,
                   const sphere::UnitVector& b) {
    double c = 0.0;
    for (int r_a : {1, -1}) {
        for (int r_b : {1, -1}) c += r_a * r_b * outcome_probability(state, a, b, r_a, r_b);
    }
    return c;
}

double correlation_trace(const TwoQubitState& state, const sphere::UnitVector& a,
                         const sphere::UnitVector& b) {
    return (state.rho() * kron(pauli_along(a), pauli_along(b))).trace().real();
}

TwoQubitState singlet() { return TwoQubitState(singlet_projector()); }

TwoQubitState maximally_mixed() { return TwoQubitState(Matrix4::Identity() / 4.0); }

TwoQubitState werner(double visibility) {
    check_visibility(visibility);
    return TwoQubitState(visibility * singlet_projector() +
                         (1.0 - visibility) * Matrix4::Identity() / 4.0);
}

TwoQubitState colored_noise(double visibility) {
    check_visibility(visibility);
    Matrix4 noise = Matrix4::Zero();
    noise(1, 1) = 0.5;  // |HV><HV|
    noise(2, 2) = 0.5;  // |VH><VH|
    return TwoQubitState(visibility * singlet_projector() + (1.0 - visibility) * noise);
}

double bell_diagonal_min_eigenvalue(const CorrelationTensor& t) {
    return std::min({1 - t.t1 - t.t2 - t.t3, 1 - t.t1 + t.t2 + t.t3, 1 + t.t1 - t.t2 + t.t3,
                     1 + t.t1 + t.t2 - t.t3}) /
           4.0;
}

CorrelationTensor nearest_bell_diagonal(const CorrelationTensor& t) {
    if (bell_diagonal_min_eigenvalue(t) >= 0.0) return t;
    using P = std::array<double, 3>;
    const P vertices[4] = {{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}};
    const P x{t.t1, t.t2, t.t3};
    auto sub = [](P a, P b) { return P{a[0] - b[0], a[1] - b[1], a[2] - b[2]}; };
    auto dotp = [](P a, P b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    auto inside = [](P p) {
        return bell_diagonal_min_eigenvalue({p[0], p[1], p[2]}) >= -1e-14;
    };

    // Nearest point of a convex polytope lies on a face, an edge or a vertex;
    // take the closest feasible candidate among all of them.
    std::vector<P> candidates(std::begin(vertices), std::end(vertices));
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const P d = sub(vertices[j], vertices[i]);
            const double s = std::clamp(dotp(sub(x, vertices[i]), d) / dotp(d, d), 0.0, 1.0);
            candidates.push_back({vertices[i][0] + s * d[0], vertices[i][1] + s * d[1],
                                  vertices[i][2] + s * d[2]});
        }
        // Face opposite vertex i; the tetrahedron is regular, so the face
        // normal runs from vertex i to the face centroid.
        const P c{(vertices[0][0] + vertices[1][0] + vertices[2][0] + vertices[3][0] - vertices[i][0]) / 3,
                  (vertices[0][1] + vertices[1][1] + vertices[2][1] + vertices[3][1] - vertices[i][1]) / 3,
                  (vertices[0][2] + vertices[1][2] + vertices[2][2] + vertices[3][2] - vertices[i][2]) / 3};
        const P axis = sub(c, vertices[i]);
        const double h = dotp(sub(x, c), axis) / dotp(axis, axis);
        candidates.push_back({x[0] - h * axis[0], x[1] - h * axis[1], x[2] - h * axis[2]});
    }

    P best = vertices[0];
    double best_d = INFINITY;
    for (const P& p : candidates) {
        const P d = sub(p, x);
        if (inside(p) && dotp(d, d) < best_d) {
            best_d = dotp(d, d);
            best = p;
        }
    }
    return {best[0], best[1], best[2]};
}

TwoQubitState bell_diagonal(double t1, double t2, double t3) {
    const double lambda = bell_diagonal_min_eigenvalue({t1, t2, t3});
    if (lambda < kPositivityFloor) {
        throw InvalidArgument("correlation tensor outside the Bell-diagonal tetrahedron "
                              "(min eigenvalue " + std::to_string(lambda) + ")");
    }
    Matrix4 rho = kron(pauli(0), pauli(0));
    rho += t1 * kron(pauli(1), pauli(1));
    rho += t2 * kron(pauli(2), pauli(2));
    rho += t3 * kron(pauli(3), pauli(3));
    return TwoQubitState(rho / 4.0);
}

TwoQubitState from_visibilities(double v_hv, double v_diag, double v_circ) {
    check_visibility(v_hv);
    check_visibility(v_diag);
    check_visibility(v_circ);
    const auto t = nearest_bell_diagonal({-v_hv, -v_diag, -v_circ});
    return bell_diagonal(t.t1, t.t2, t.t3);
}

double singlet_L(double phi) { return 2.0 * (1.0 + std::cos(phi)); }

QuantumSource::QuantumSource(TwoQubitState state) : state_(std::move(state)) {
    const Matrix4& rho = state_.rho();
    for (int i = 0; i < 3; ++i) {
        local_a_[i] = (rho * kron(pauli(i + 1), pauli(0))).trace().real();
        local_b_[i] = (rho * kron(pauli(0), pauli(i + 1))).trace().real();
        for (int j = 0; j < 3; ++j) {
            tensor_[i][j] = (rho * kron(pauli(i + 1), pauli(j + 1))).trace().real();
        }
    }

    constexpr double tol = 1e-12;
    bool invariant = true;
    for (int i = 0; i < 3; ++i) {
        invariant = invariant && std::abs(local_a_[i]) < tol && std::abs(local_b_[i]) < tol;
        for (int j = 0; j < 3; ++j) {
            const double expected = i == j ? tensor_[0][0] : 0.0;
            invariant = invariant && std::abs(tensor_[i][j] - expected) < tol;
        }
    }
    rotation_invariant_ = invariant;
}

double QuantumSource::probability(const sphere::UnitVector& a, const sphere::UnitVector& b,
                                  int r_a, int r_b) const {
    check_outcome(r_a);
    check_outcome(r_b);
    const std::array<double, 3> av{a.x(), a.y(), a.z()};
    const std::array<double, 3> bv{b.x(), b.y(), b.z()};
    double p = 1.0;
    for (int i = 0; i < 3; ++i) {
        p += r_a * av[i] * local_a_[i] + r_b * bv[i] * local_b_[i];
    }
    p += r_a * r_b * correlation(a, b);
    return std::clamp(p / 4.0, 0.0, 1.0);
}

double QuantumSource::correlation(const sphere::UnitVector& a, const sphere::UnitVector& b) const {
    const std::array<double, 3> av{a.x(), a.y(), a.z()};
    const std::array<double, 3> bv{b.x(), b.y(), b.z()};
    double c = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) c += av[i] * tensor_[i][j] * bv[j];
    }
    return c;
}

}  // namespace nlv::quantum
