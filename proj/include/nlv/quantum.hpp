#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "nlv/source.hpp"
#include "nlv/sphere.hpp"

namespace nlv::quantum {

using Matrix4 = Eigen::Matrix4cd;
using Matrix2 = Eigen::Matrix2cd;

/// Pauli matrices in the Stokes basis, index 1..3 (0 is the identity).
const Matrix2& pauli(int i);
/// sigma . n
Matrix2 pauli_along(const sphere::UnitVector& n);

/// Two-qubit density operator in the H/V x H/V product basis
/// (ordering HH, HV, VH, VV).
class TwoQubitState {
public:
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (eigenvalues >= -1e-10). Throws InvalidArgument on failure.
    explicit TwoQubitState(Matrix4 rho);

    const Matrix4& rho() const noexcept { return rho_; }

    /// Smallest eigenvalue of rho.
    double min_eigenvalue() const;

private:
    Matrix4 rho_;
};

/// Diagonal of the correlation tensor, t_i = Tr[rho (sigma_i x sigma_i)].
struct CorrelationTensor {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;

    double operator[](int i) const { return i == 0 ? t1 : (i == 1 ? t2 : t3); }
};

CorrelationTensor correlation_tensor(const TwoQubitState& state);

/// Tr[rho (P_a^{r_a} x P_b^{r_b})], P^r = (I + r sigma.n)/2, clamped to [0, 1].
double outcome_probability(const TwoQubitState& state, const sphere::UnitVector& a,
                           const sphere::UnitVector& b, int r_a, int r_b);

/// Sum over r_a r_b of outcome_probability.
double correlation(const TwoQubitState& state, const sphere::UnitVector& a,
                   const sphere::UnitVector& b);

/// Tr[rho (sigma.a x sigma.b)] evaluated directly.
double correlation_trace(const TwoQubitState& state, const sphere::UnitVector& a,
                         const sphere::UnitVector& b);

TwoQubitState singlet();
TwoQubitState maximally_mixed();
/// V |psi-><psi-| + (1 - V) I/4
TwoQubitState werner(double visibility);
/// V |psi-><psi-| + (1 - V)(|HV><HV| + |VH><VH|)/2
TwoQubitState colored_noise(double visibility);
/// (I x I + sum_i t_i sigma_i x sigma_i) / 4. Throws InvalidArgument when
/// (t1, t2, t3) lies outside the tetrahedron spanned by the four Bell states.
TwoQubitState bell_diagonal(double t1, double t2, double t3);
/// Smallest eigenvalue of bell_diagonal(t), i.e. the tetrahedron face margins / 4.
double bell_diagonal_min_eigenvalue(const CorrelationTensor& t);
/// Euclidean projection onto the Bell-diagonal tetrahedron.
CorrelationTensor nearest_bell_diagonal(const CorrelationTensor& t);
/// Bell-diagonal state closest to t_i = -V_i for the measured (HV, +-45,
/// circular) visibilities. Visibility triples with V_i + V_j - V_k > 1 have
/// no Bell-diagonal state and are moved to the nearest one.
TwoQubitState from_visibilities(double v_hv, double v_diag, double v_circ);

/// 2(1 + cos phi): the singlet value of the inequality's left-hand side.
double singlet_L(double phi);

/// CorrelationSource backed by a density matrix. Probabilities use the
/// precomputed local Bloch vectors and full 3x3 correlation matrix.
class QuantumSource final : public CorrelationSource {
public:
    /// Rotation invariance is detected from the state: zero local Bloch
    /// vectors and a correlation matrix proportional to the identity.
    explicit QuantumSource(TwoQubitState state);

    double probability(const sphere::UnitVector& a, const sphere::UnitVector& b, int r_a,
                       int r_b) const override;
    double correlation(const sphere::UnitVector& a, const sphere::UnitVector& b) const override;
    bool rotation_invariant() const override { return rotation_invariant_; }

    const TwoQubitState& state() const noexcept { return state_; }

private:
    TwoQubitState state_;
    std::array<double, 3> local_a_{};
    std::array<double, 3> local_b_{};
    std::array<std::array<double, 3>, 3> tensor_{};
    bool rotation_invariant_ = false;
};

}  // namespace nlv::quantum
