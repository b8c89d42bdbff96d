#pragma once

#include <vector>

#include "phasecov/polynomial.hpp"

namespace phasecov {

/// Ratio of real polynomials in the Laplace variable s, kept gcd-reduced with
/// a monic denominator.
class RationalLaplace {
public:
    RationalLaplace() : den_(Polynomial::constant(1.0)) {}
    /// Throws ValidationError when the denominator is identically zero.
    RationalLaplace(Polynomial numerator, Polynomial denominator);
    RationalLaplace(std::vector<double> num, std::vector<double> den)
        : RationalLaplace(Polynomial(std::move(num)), Polynomial(std::move(den))) {}

    static RationalLaplace constant(double c) { return {Polynomial::constant(c), Polynomial::constant(1.0)}; }
    /// 1/s
    static RationalLaplace inverse_s() { return {Polynomial::constant(1.0), Polynomial({0.0, 1.0})}; }
    /// s
    static RationalLaplace s() { return {Polynomial({0.0, 1.0}), Polynomial::constant(1.0)}; }

    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    double operator()(double s) const;

    /// Real strictly positive roots of the denominator.
    std::vector<double> positive_real_poles() const;

    RationalLaplace operator-() const;
    friend RationalLaplace operator+(const RationalLaplace& a, const RationalLaplace& b);
    friend RationalLaplace operator-(const RationalLaplace& a, const RationalLaplace& b);
    friend RationalLaplace operator*(const RationalLaplace& a, const RationalLaplace& b);
    /// Throws DegenerateKernel when b is identically zero.
    friend RationalLaplace operator/(const RationalLaplace& a, const RationalLaplace& b);
    friend RationalLaplace operator*(double c, const RationalLaplace& f);

private:
    void reduce();

    Polynomial num_;
    Polynomial den_;
};

/// Exact n-th derivative, reduced after every quotient-rule step.
RationalLaplace rational_derivative(const RationalLaplace& f, int n);

struct SimplePole {
    double pole = 0.0;
    double residue = 0.0;
};

/// Partial fractions Σ rᵢ/(s − pᵢ) of a strictly proper function with simple
/// real poles. Throws UnsupportedInversion for anything else.
std::vector<SimplePole> partial_fractions(const RationalLaplace& f);

/// Inverse transform Σ rᵢ e^{pᵢ t} and its time derivative.
double inverse_laplace(const std::vector<SimplePole>& terms, double t);
double inverse_laplace_derivative(const std::vector<SimplePole>& terms, double t);

} // namespace phasecov
