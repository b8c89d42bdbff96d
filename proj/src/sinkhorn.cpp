#include <cmath>
#include <complex>
#include <string>

#include "phasecov/channel.hpp"
#include "phasecov/error.hpp"

namespace phasecov {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kParameterTolerance = 1e-10;

// Φ*[y] with respect to the Hilbert-Schmidt product; in Pauli coordinates the
// transfer matrix is transposed, so the shift feeds the identity component.
Matrix2c apply_adjoint(const PhaseCovChannel& ch, const Matrix2c& y) {
    const Matrix2c sz = (Matrix2c() << 1, 0, 0, -1).finished();
    const std::complex<double> cz = (sz * y).trace();
    const PhaseCovChannel unital(ch.lambda(), ch.lambda_z(), 0.0);
    Matrix2c out = phasecov::apply(unital, y);
    out += 0.5 * ch.t_z() * cz * Matrix2c::Identity();
    return out;
}

Matrix2c inverse_sqrt(const Matrix2c& m) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(0.5 * (m + m.adjoint()));
    return solver.operatorInverseSqrt();
}

Matrix2c apply_unital(double lt_x, double lt_z, const Matrix2c& x) {
    return phasecov::apply(PhaseCovChannel(lt_x, lt_z, 0.0), x);
}

// Diagonal Pauli-transfer entries of x ↦ A Φ[B x B†] A†.
void congruence_parameters(const PhaseCovChannel& ch, const Matrix2c& a, const Matrix2c& b,
                           double& lt_x, double& lt_z) {
    const Matrix2c sx = (Matrix2c() << 0, 1, 1, 0).finished();
    const Matrix2c sz = (Matrix2c() << 1, 0, 0, -1).finished();
    const auto image = [&](const Matrix2c& x) { return Matrix2c(a * phasecov::apply(ch, Matrix2c(b * x * b.adjoint())) * a.adjoint()); };
    lt_x = 0.5 * (sx * image(sx)).trace().real();
    lt_z = 0.5 * (sz * image(sz)).trace().real();
}

} // namespace

SinkhornForm sinkhorn_form(const PhaseCovChannel& ch) {
    const double l = ch.lambda(), lz = ch.lambda_z(), tz = ch.t_z();
    if (std::abs(lz) + std::abs(tz) >= 1.0) {
        throw NoNormalForm("normal form requires |lambda_z| + |t_z| < 1 (got " +
                           std::to_string(std::abs(lz) + std::abs(tz)) + ")");
    }
    const double s = std::sqrt((1 + lz) * (1 + lz) - tz * tz) + std::sqrt((1 - lz) * (1 - lz) - tz * tz);

    SinkhornForm form;
    form.lt_x = 2.0 * l / s;
    form.lt_z = 4.0 * lz / (s * s);

    // Alternate the unital and trace-preserving normalisations.
    Matrix2c a = Matrix2c::Identity();
    Matrix2c b = Matrix2c::Identity();
    for (int it = 1; it <= kMaxIterations; ++it) {
        const Matrix2c unit_image = a * phasecov::apply(ch, Matrix2c(b * b.adjoint())) * a.adjoint();
        a = inverse_sqrt(unit_image) * a;
        const Matrix2c dual_image = b.adjoint() * apply_adjoint(ch, Matrix2c(a.adjoint() * a)) * b;
        b = b * inverse_sqrt(dual_image);

        double lt_x = 0.0, lt_z = 0.0;
        congruence_parameters(ch, a, b, lt_x, lt_z);
        const Matrix2c residual = a * phasecov::apply(ch, Matrix2c(b * b.adjoint())) * a.adjoint() - Matrix2c::Identity();
        if (std::abs(lt_x - form.lt_x) < kParameterTolerance && std::abs(lt_z - form.lt_z) < kParameterTolerance &&
            residual.norm() < kParameterTolerance) {
            form.a_op = a;
            form.b_op = b;
            form.iterations = it;
            return form;
        }
    }
    throw ConvergenceFailure("Sinkhorn iteration did not reach the normal form within " +
                             std::to_string(kMaxIterations) + " iterations");
}

Matrix2c reconstruct(const SinkhornForm& form, const Matrix2c& x) {
    const Matrix2c a_inv = form.a_op.inverse();
    const Matrix2c b_inv = form.b_op.inverse();
    return a_inv * apply_unital(form.lt_x, form.lt_z, Matrix2c(b_inv * x * b_inv.adjoint())) * a_inv.adjoint();
}

} // namespace phasecov
