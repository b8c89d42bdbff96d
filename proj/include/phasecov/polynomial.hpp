#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace phasecov {

/// Real polynomial, coefficients in ascending degree. Trailing zeros are
/// stripped so that degree() is exact; the zero polynomial has degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);

    static Polynomial constant(double c) { return Polynomial({c}); }
    static Polynomial monomial(double c, int degree);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    double max_abs_coefficient() const noexcept;

    double operator()(double s) const;
    /// Σ|aᵢ||s|ⁱ, the scale that bounds Horner rounding error.
    double abs_bound(double s) const;

    Polynomial derivative() const;
    Polynomial pow(int n) const;
    Polynomial monic() const;
    /// Drops leading coefficients with |c| <= rel_tol * max|c|.
    Polynomial trimmed(double rel_tol) const;

    /// Quotient and remainder; divisor must be non-zero.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

    /// Complex roots via the companion matrix.
    std::vector<std::complex<double>> roots() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double c, const Polynomial& p);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// Monic greatest common divisor by the Euclidean algorithm. Remainders whose
/// coefficients fall below `tol` relative to the dividend count as zero; a
/// candidate that does not divide both inputs to 1e-9 is rejected in favour
/// of the constant 1.
Polynomial gcd(const Polynomial& a, const Polynomial& b, double tol = 1e-12);

} // namespace phasecov
