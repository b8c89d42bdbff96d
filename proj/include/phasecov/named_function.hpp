#pragma once

#include <string_view>
#include <vector>

#include "phasecov/rational.hpp"

namespace phasecov {

enum class TermKind { exp_decay, cosine, constant };

std::string_view to_string(TermKind k) noexcept;
/// Throws ValidationError for an unknown name.
TermKind term_kind_from_string(std::string_view name);

/// One of c·e^{−rate·t}, c·cos(ω t) or c. `rate` holds ω for the cosine.
struct FunctionTerm {
    TermKind kind = TermKind::constant;
    double c = 0.0;
    double rate = 0.0;

    friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;
};

/// Finite sum of named terms with closed-form values, derivatives and
/// Laplace transforms.
class NamedFunction {
public:
    NamedFunction() = default;
    explicit NamedFunction(std::vector<FunctionTerm> terms);

    static NamedFunction exp_decay(double c, double rate);
    static NamedFunction cosine(double c, double omega);
    static NamedFunction constant(double c);

    const std::vector<FunctionTerm>& terms() const noexcept { return terms_; }

    double operator()(double t) const;
    double derivative(double t) const;
    RationalLaplace laplace() const;

    friend NamedFunction operator+(const NamedFunction& a, const NamedFunction& b);
    friend bool operator==(const NamedFunction&, const NamedFunction&) = default;

private:
    std::vector<FunctionTerm> terms_;
};

/// Natural cubic spline through (time, value) samples, for user data.
/// Queries outside the sampled range throw DomainError.
class SampledFunction {
public:
    SampledFunction(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    double derivative(double t) const;

    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    std::size_t segment(double t) const;

    std::vector<double> t_, y_, m_;  // m_: second derivatives at the knots
};

} // namespace phasecov
