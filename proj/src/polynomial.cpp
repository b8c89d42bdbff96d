#include "phasecov/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

void strip(std::vector<double>& c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

} // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw ValidationError("polynomial coefficients must be finite");
    }
    strip(coeffs_);
}

Polynomial Polynomial::monomial(double c, int degree) {
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    coeffs.back() = c;
    return Polynomial(std::move(coeffs));
}

double Polynomial::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::abs_bound(double s) const {
    double acc = 0.0;
    const double as = std::abs(s);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * as + std::abs(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(int n) const {
    Polynomial result = constant(1.0);
    for (int i = 0; i < n; ++i) result = result * *this;
    return result;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return {};
    return (1.0 / leading()) * *this;
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    std::vector<double> c = coeffs_;
    const double cutoff = rel_tol * max_abs_coefficient();
    while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
    return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw ValidationError("polynomial division by zero");
    if (degree() < divisor.degree()) return {Polynomial{}, *this};
    std::vector<double> rem = coeffs_;
    const int dd = divisor.degree();
    std::vector<double> quot(static_cast<std::size_t>(degree() - dd) + 1, 0.0);
    for (int k = degree() - dd; k >= 0; --k) {
        const double q = rem[static_cast<std::size_t>(k + dd)] / divisor.leading();
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * divisor.coeffs_[static_cast<std::size_t>(j)];
        rem[static_cast<std::size_t>(k + dd)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int n = degree();
    if (n < 1) return {};
    if (n == 1) return {std::complex<double>(-coeffs_[0] / coeffs_[1], 0.0)};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs_[static_cast<std::size_t>(i)] / leading();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(out.begin(), out.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
}

Polynomial operator*(double c, const Polynomial& p) {
    std::vector<double> out = p.coeffs_;
    for (double& x : out) x *= c;
    return Polynomial(std::move(out));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b, double tol) {
    const Polynomial one = Polynomial::constant(1.0);
    if (a.is_zero() && b.is_zero()) return one;
    if (b.is_zero()) return a.monic();
    if (a.is_zero()) return b.monic();

    Polynomial r0 = a.degree() >= b.degree() ? a.monic() : b.monic();
    Polynomial r1 = a.degree() >= b.degree() ? b.monic() : a.monic();
    while (r1.degree() > 0) {
        const double scale = std::max(r0.max_abs_coefficient(), r1.max_abs_coefficient());
        Polynomial r = r0.divmod(r1).second;
        std::vector<double> c = r.coefficients();
        for (double& x : c) {
            if (std::abs(x) <= tol * scale) x = 0.0;
        }
        r = Polynomial(std::move(c));
        if (r.is_zero()) break;
        r0 = r1;
        r1 = r.monic();
    }
    if (r1.degree() <= 0) return one;

    const auto divides = [&](const Polynomial& p) {
        return p.divmod(r1).second.max_abs_coefficient() <= 1e-9 * std::max(1.0, p.max_abs_coefficient());
    };
    return divides(a) && divides(b) ? r1 : one;
}

} // namespace phasecov
