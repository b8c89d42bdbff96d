#pragma once

#include <Eigen/Dense>

#include "phasecov/verdict.hpp"

namespace phasecov {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

struct BlochVector {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    double norm() const;
};

/// Phase covariant qubit map
///   Φ[ρ] = ½{ tr[ρ](I + t_z σz) + λ tr[σx ρ] σx + λ tr[σy ρ] σy + λz tr[σz ρ] σz }.
/// Any finite triple is representable; complete positivity and positivity
/// are queried separately.
class PhaseCovChannel {
public:
    PhaseCovChannel() = default;  // identity
    PhaseCovChannel(double lambda, double lambda_z, double t_z);

    static PhaseCovChannel identity() { return {}; }

    double lambda() const noexcept { return lambda_; }
    double lambda_z() const noexcept { return lambda_z_; }
    double t_z() const noexcept { return t_z_; }

    friend bool operator==(const PhaseCovChannel&, const PhaseCovChannel&) = default;

private:
    double lambda_ = 1.0;
    double lambda_z_ = 1.0;
    double t_z_ = 0.0;
};

/// 2x2 density operator. Hermiticity and unit trace are checked on demand,
/// not enforced, so that images under non-positive maps can be inspected.
class DensityMatrix {
public:
    DensityMatrix() : m_(Matrix2c::Identity() / 2.0) {}
    explicit DensityMatrix(const Matrix2c& m) : m_(m) {}

    static DensityMatrix from_bloch(const BlochVector& r);
    BlochVector to_bloch() const;

    const Matrix2c& matrix() const noexcept { return m_; }
    double min_eigenvalue() const;
    bool is_state(double tol = kTolerance) const;

private:
    Matrix2c m_;
};

/// Real 4x4 matrix acting on (1, rx, ry, rz).
class PauliTransfer {
public:
    PauliTransfer() : m_(Eigen::Matrix4d::Identity()) {}
    explicit PauliTransfer(const Eigen::Matrix4d& m) : m_(m) {}

    const Eigen::Matrix4d& matrix() const noexcept { return m_; }
    PauliTransfer operator*(const PauliTransfer& rhs) const { return PauliTransfer(m_ * rhs.m_); }

    bool is_trace_preserving(double tol = kTolerance) const;

private:
    Eigen::Matrix4d m_;
};

/// Choi state (Φ ⊗ Id)(|ψ+⟩⟨ψ+|), |ψ+⟩ = (|00⟩ + |11⟩)/√2, with the system
/// (output) factor first: entry ((2a + i), (2b + j)) = ½ ⟨a|Φ(|i⟩⟨j|)|b⟩.
class ChoiMatrix {
public:
    explicit ChoiMatrix(const Matrix4c& m) : m_(m) {}

    const Matrix4c& matrix() const noexcept { return m_; }
    Eigen::Vector4d eigenvalues() const;
    double min_eigenvalue() const { return eigenvalues().minCoeff(); }
    bool is_hermitian(double tol = kTolerance) const;

private:
    Matrix4c m_;
};

/// Congruence to a unital normal form: Υ[ρ] = A Φ[B ρ B†] A†, where Υ has
/// Pauli-diagonal parameters (lt_x, lt_x, lt_z).
struct SinkhornForm {
    double lt_x = 1.0;
    double lt_z = 1.0;
    Matrix2c a_op = Matrix2c::Identity();
    Matrix2c b_op = Matrix2c::Identity();
    int iterations = 0;
};

BlochVector apply(const PhaseCovChannel& ch, const BlochVector& r);

/// Action on an arbitrary 2x2 operator (linear extension of the Bloch map).
Matrix2c apply(const PhaseCovChannel& ch, const Matrix2c& x);
DensityMatrix apply(const PhaseCovChannel& ch, const DensityMatrix& rho);

/// outer ∘ inner.
PhaseCovChannel compose(const PhaseCovChannel& outer, const PhaseCovChannel& inner);

/// Throws SingularChannel when |λ| or |λz| <= kInvertibilityThreshold.
PhaseCovChannel invert(const PhaseCovChannel& ch);

PauliTransfer to_pauli_transfer(const PhaseCovChannel& ch);

/// Throws ValidationError unless `pt` has the phase covariant block form.
PhaseCovChannel from_pauli_transfer(const PauliTransfer& pt, double tol = 1e-12);

ChoiMatrix to_choi(const PhaseCovChannel& ch);

/// |λz| + |t_z| <= 1 and 4λ² + t_z² <= (1 + λz)².
Verdict is_cp(const PhaseCovChannel& ch, double tol = kTolerance);

/// Positivity (not complete positivity) of Φ.
Verdict is_positive(const PhaseCovChannel& ch, double tol = kTolerance);

/// Largest Bloch-vector norm in the image of the Bloch ball.
double r_max(const PhaseCovChannel& ch);

/// Requires |λz| + |t_z| < 1; throws NoNormalForm otherwise.
SinkhornForm sinkhorn_form(const PhaseCovChannel& ch);

/// Φ[x] rebuilt from the normal form: A⁻¹ Υ[B⁻¹ x B⁻¹†] A⁻¹†.
Matrix2c reconstruct(const SinkhornForm& form, const Matrix2c& x);

/// The six linear inequalities carving a CP polyhedron out of parameter space.
Verdict in_polyhedron(const PhaseCovChannel& ch, double tol = kTolerance);

} // namespace phasecov
