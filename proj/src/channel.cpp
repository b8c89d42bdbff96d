#include "phasecov/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

using cd = std::complex<double>;

const Matrix2c& pauli(int k) {
    static const Matrix2c sigma[4] = {
        (Matrix2c() << 1, 0, 0, 1).finished(),
        (Matrix2c() << 0, 1, 1, 0).finished(),
        (Matrix2c() << 0, cd(0, -1), cd(0, 1), 0).finished(),
        (Matrix2c() << 1, 0, 0, -1).finished(),
    };
    return sigma[k];
}

// Sum of the two square roots shared by the positivity criterion and the
// normal-form parameters. Arguments are clamped at zero.
double sqrt_sum(double lambda_z, double t_z) {
    const double tz2 = t_z * t_z;
    return std::sqrt(std::max(0.0, (1 + lambda_z) * (1 + lambda_z) - tz2)) +
           std::sqrt(std::max(0.0, (1 - lambda_z) * (1 - lambda_z) - tz2));
}

} // namespace

double BlochVector::norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }

PhaseCovChannel::PhaseCovChannel(double lambda, double lambda_z, double t_z)
    : lambda_(lambda), lambda_z_(lambda_z), t_z_(t_z) {
    if (!std::isfinite(lambda) || !std::isfinite(lambda_z) || !std::isfinite(t_z)) {
        throw ValidationError("channel parameters must be finite (lambda=" + std::to_string(lambda) +
                              ", lambda_z=" + std::to_string(lambda_z) +
                              ", t_z=" + std::to_string(t_z) + ")");
    }
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& r) {
    Matrix2c m = 0.5 * (pauli(0) + r.rx * pauli(1) + r.ry * pauli(2) + r.rz * pauli(3));
    return DensityMatrix(m);
}

BlochVector DensityMatrix::to_bloch() const {
    return {(pauli(1) * m_).trace().real(), (pauli(2) * m_).trace().real(),
            (pauli(3) * m_).trace().real()};
}

double DensityMatrix::min_eigenvalue() const {
    // Closed form for a 2x2 Hermitian matrix; the anti-Hermitian part is ignored.
    const Matrix2c h = 0.5 * (m_ + m_.adjoint());
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double off = std::abs(h(0, 1));
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), off);
}

bool DensityMatrix::is_state(double tol) const {
    return (m_ - m_.adjoint()).norm() <= tol && std::abs(m_.trace() - cd(1.0)) <= tol &&
           min_eigenvalue() >= -tol;
}

bool PauliTransfer::is_trace_preserving(double tol) const {
    return std::abs(m_(0, 0) - 1.0) <= tol && std::abs(m_(0, 1)) <= tol &&
           std::abs(m_(0, 2)) <= tol && std::abs(m_(0, 3)) <= tol;
}

Eigen::Vector4d ChoiMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

bool ChoiMatrix::is_hermitian(double tol) const { return (m_ - m_.adjoint()).norm() <= tol; }

BlochVector apply(const PhaseCovChannel& ch, const BlochVector& r) {
    return {ch.lambda() * r.rx, ch.lambda() * r.ry, ch.lambda_z() * r.rz + ch.t_z()};
}

Matrix2c apply(const PhaseCovChannel& ch, const Matrix2c& x) {
    const cd tr = x.trace();
    const cd cx = (pauli(1) * x).trace();
    const cd cy = (pauli(2) * x).trace();
    const cd cz = (pauli(3) * x).trace();
    return 0.5 * (tr * (pauli(0) + ch.t_z() * pauli(3)) + ch.lambda() * cx * pauli(1) +
                  ch.lambda() * cy * pauli(2) + ch.lambda_z() * cz * pauli(3));
}

DensityMatrix apply(const PhaseCovChannel& ch, const DensityMatrix& rho) {
    return DensityMatrix(phasecov::apply(ch, rho.matrix()));
}

PhaseCovChannel compose(const PhaseCovChannel& outer, const PhaseCovChannel& inner) {
    return {outer.lambda() * inner.lambda(), outer.lambda_z() * inner.lambda_z(),
            outer.lambda_z() * inner.t_z() + outer.t_z()};
}

PhaseCovChannel invert(const PhaseCovChannel& ch) {
    if (std::abs(ch.lambda()) <= kInvertibilityThreshold ||
        std::abs(ch.lambda_z()) <= kInvertibilityThreshold) {
        throw SingularChannel("channel is not invertible (lambda=" + std::to_string(ch.lambda()) +
                              ", lambda_z=" + std::to_string(ch.lambda_z()) + ")");
    }
    return {1.0 / ch.lambda(), 1.0 / ch.lambda_z(), -ch.t_z() / ch.lambda_z()};
}

PauliTransfer to_pauli_transfer(const PhaseCovChannel& ch) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = ch.lambda();
    m(2, 2) = ch.lambda();
    m(3, 0) = ch.t_z();
    m(3, 3) = ch.lambda_z();
    return PauliTransfer(m);
}

PhaseCovChannel from_pauli_transfer(const PauliTransfer& pt, double tol) {
    const Eigen::Matrix4d& m = pt.matrix();
    Eigen::Matrix4d expected = to_pauli_transfer({m(1, 1), m(3, 3), m(3, 0)}).matrix();
    if ((m - expected).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw ValidationError("Pauli transfer matrix is not of phase covariant form");
    }
    return {m(1, 1), m(3, 3), m(3, 0)};
}

ChoiMatrix to_choi(const PhaseCovChannel& ch) {
    Matrix4c choi = Matrix4c::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Matrix2c unit = Matrix2c::Zero();
            unit(i, j) = 1.0;
            const Matrix2c image = phasecov::apply(ch, unit);
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) choi(2 * a + i, 2 * b + j) = 0.5 * image(a, b);
            }
        }
    }
    return ChoiMatrix(choi);
}

Verdict is_cp(const PhaseCovChannel& ch, double tol) {
    const double l = ch.lambda(), lz = ch.lambda_z(), tz = ch.t_z();
    const double first = 1.0 - std::abs(lz) - std::abs(tz);
    const double second = (1.0 + lz) * (1.0 + lz) - 4.0 * l * l - tz * tz;
    return Verdict::from_margin(std::min(first, second), tol);
}

Verdict is_positive(const PhaseCovChannel& ch, double tol) {
    const double l = ch.lambda(), lz = ch.lambda_z(), tz = ch.t_z();
    const double first = 1.0 - std::abs(lz) - std::abs(tz);
    if (first < -tol) return Verdict::from_margin(first, tol);
    const double s = sqrt_sum(lz, tz);
    const double second = s - 2.0 * std::abs(l);
    const double third = s * s - 4.0 * std::abs(lz);
    return Verdict::from_margin(std::min({first, second, third}), tol);
}

double r_max(const PhaseCovChannel& ch) {
    const double l = std::abs(ch.lambda()), lz = std::abs(ch.lambda_z()), tz = std::abs(ch.t_z());
    const double pole = lz + tz;
    if (l <= lz) return pole;
    // |Φ(r)|² over the unit sphere is concave in cosθ here; its stationary point
    // cosθ* = λz t_z / (λ² − λz²) only counts when it lies in [−1, 1].
    const double gap = l * l - lz * lz;
    if (lz * tz > gap) return pole;
    return l * std::sqrt(1.0 + tz * tz / gap);
}

Verdict in_polyhedron(const PhaseCovChannel& ch, double tol) {
    const double l = ch.lambda(), lz = ch.lambda_z(), tz = std::abs(ch.t_z());
    // The ±t_z pairs collapse onto the −|t_z| member.
    const double margin = std::min({1.0 + 2.0 * l + lz - tz, 1.0 - 2.0 * l + lz - tz, 1.0 - lz - tz});
    return Verdict::from_margin(margin, tol);
}

} // namespace phasecov
