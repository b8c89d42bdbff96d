#include "phasecov/rational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

// Coefficients below this, relative to the largest summand, are rounding
// residue of a cancellation.
constexpr double kCancellation = 1e-14;

Polynomial add_cancelling(const Polynomial& x, const Polynomial& y) {
    const double scale = std::max(x.max_abs_coefficient(), y.max_abs_coefficient());
    std::vector<double> c = (x + y).coefficients();
    for (double& v : c) {
        if (std::abs(v) <= kCancellation * scale) v = 0.0;
    }
    return Polynomial(std::move(c));
}

} // namespace

RationalLaplace::RationalLaplace(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw ValidationError("rational function has an identically zero denominator");
    reduce();
}

void RationalLaplace::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1.0);
        return;
    }
    const Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divmod(g).first;
        den_ = den_.divmod(g).first;
    }
    const double lead = den_.leading();
    num_ = (1.0 / lead) * num_;
    den_ = (1.0 / lead) * den_;
}

double RationalLaplace::operator()(double s) const { return num_(s) / den_(s); }

std::vector<double> RationalLaplace::positive_real_poles() const {
    std::vector<double> poles;
    for (const auto& z : den_.roots()) {
        if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z)) && z.real() > 0.0) {
            poles.push_back(z.real());
        }
    }
    return poles;
}

RationalLaplace RationalLaplace::operator-() const { return -1.0 * *this; }

RationalLaplace operator+(const RationalLaplace& a, const RationalLaplace& b) {
    if (a.den_ == b.den_) return {add_cancelling(a.num_, b.num_), a.den_};
    return {add_cancelling(a.num_ * b.den_, b.num_ * a.den_), a.den_ * b.den_};
}

RationalLaplace operator-(const RationalLaplace& a, const RationalLaplace& b) { return a + (-b); }

RationalLaplace operator*(const RationalLaplace& a, const RationalLaplace& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalLaplace operator/(const RationalLaplace& a, const RationalLaplace& b) {
    if (b.is_zero()) throw DegenerateKernel("division by an identically zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

RationalLaplace operator*(double c, const RationalLaplace& f) { return {c * f.num_, f.den_}; }

RationalLaplace rational_derivative(const RationalLaplace& f, int n) {
    if (n < 0) throw ValidationError("derivative order must be non-negative");
    RationalLaplace out = f;
    for (int k = 0; k < n; ++k) {
        const Polynomial& p = out.numerator();
        const Polynomial& q = out.denominator();
        out = RationalLaplace(add_cancelling(p.derivative() * q, -(p * q.derivative())), q * q);
    }
    return out;
}

std::vector<SimplePole> partial_fractions(const RationalLaplace& f) {
    if (f.is_zero()) return {};
    const Polynomial& num = f.numerator();
    const Polynomial& den = f.denominator();
    if (num.degree() >= den.degree()) {
        throw UnsupportedInversion("inverse transform needs a strictly proper rational function");
    }
    const auto roots = den.roots();
    std::vector<SimplePole> terms;
    const Polynomial dden = den.derivative();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto z = roots[i];
        const double scale = std::max(1.0, std::abs(z));
        if (std::abs(z.imag()) > 1e-9 * scale) {
            throw UnsupportedInversion("complex pole at " + std::to_string(z.real()) + "+" +
                                       std::to_string(z.imag()) + "i");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(roots[j] - z) <= 1e-6 * scale) {
                throw UnsupportedInversion("repeated pole near " + std::to_string(z.real()));
            }
        }
        const double p = z.real();
        terms.push_back({p, num(p) / dden(p)});
    }
    return terms;
}

double inverse_laplace(const std::vector<SimplePole>& terms, double t) {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.residue * std::exp(term.pole * t);
    return acc;
}

double inverse_laplace_derivative(const std::vector<SimplePole>& terms, double t) {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.residue * term.pole * std::exp(term.pole * t);
    return acc;
}

} // namespace phasecov
