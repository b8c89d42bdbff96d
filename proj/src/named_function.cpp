#include "phasecov/named_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasecov/error.hpp"

namespace phasecov {

std::string_view to_string(TermKind k) noexcept {
    switch (k) {
    case TermKind::exp_decay: return "exp_decay";
    case TermKind::cosine: return "cosine";
    case TermKind::constant: return "constant";
    }
    return "constant";
}

TermKind term_kind_from_string(std::string_view name) {
    for (TermKind k : {TermKind::exp_decay, TermKind::cosine, TermKind::constant}) {
        if (to_string(k) == name) return k;
    }
    throw ValidationError("unknown function term '" + std::string(name) +
                          "' (expected exp_decay, cosine or constant)");
}

NamedFunction::NamedFunction(std::vector<FunctionTerm> terms) : terms_(std::move(terms)) {
    for (const auto& term : terms_) {
        if (!std::isfinite(term.c) || !std::isfinite(term.rate)) {
            throw ValidationError("function term parameters must be finite");
        }
    }
}

NamedFunction NamedFunction::exp_decay(double c, double rate) {
    return NamedFunction({{TermKind::exp_decay, c, rate}});
}

NamedFunction NamedFunction::cosine(double c, double omega) {
    return NamedFunction({{TermKind::cosine, c, omega}});
}

NamedFunction NamedFunction::constant(double c) { return NamedFunction({{TermKind::constant, c, 0.0}}); }

double NamedFunction::operator()(double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) {
        switch (term.kind) {
        case TermKind::exp_decay: acc += term.c * std::exp(-term.rate * t); break;
        case TermKind::cosine: acc += term.c * std::cos(term.rate * t); break;
        case TermKind::constant: acc += term.c; break;
        }
    }
    return acc;
}

double NamedFunction::derivative(double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) {
        switch (term.kind) {
        case TermKind::exp_decay: acc -= term.c * term.rate * std::exp(-term.rate * t); break;
        case TermKind::cosine: acc -= term.c * term.rate * std::sin(term.rate * t); break;
        case TermKind::constant: break;
        }
    }
    return acc;
}

RationalLaplace NamedFunction::laplace() const {
    RationalLaplace acc;
    for (const auto& term : terms_) {
        switch (term.kind) {
        case TermKind::exp_decay:
            acc = acc + RationalLaplace({term.c}, {term.rate, 1.0});
            break;
        case TermKind::cosine:
            acc = acc + RationalLaplace({0.0, term.c}, {term.rate * term.rate, 0.0, 1.0});
            break;
        case TermKind::constant:
            acc = acc + RationalLaplace({term.c}, {0.0, 1.0});
            break;
        }
    }
    return acc;
}

NamedFunction operator+(const NamedFunction& a, const NamedFunction& b) {
    std::vector<FunctionTerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return NamedFunction(std::move(terms));
}

SampledFunction::SampledFunction(std::vector<double> times, std::vector<double> values)
    : t_(std::move(times)), y_(std::move(values)) {
    const std::size_t n = t_.size();
    if (n < 2 || y_.size() != n) {
        throw ValidationError("sampled function needs at least two (time, value) pairs of equal length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(y_[i])) throw ValidationError("samples must be finite");
        if (i > 0 && !(t_[i] > t_[i - 1])) throw ValidationError("sample times must be strictly increasing");
    }
    // Tridiagonal solve for the natural spline's second derivatives.
    m_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
        const double lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
}

std::size_t SampledFunction::segment(double t) const {
    if (!(t >= t_.front() && t <= t_.back())) {
        throw DomainError("sampled function queried at t=" + std::to_string(t) + " outside [" +
                          std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const auto i = static_cast<std::size_t>(std::distance(t_.begin(), it));
    return std::min(i, t_.size() - 1) - 1;
}

double SampledFunction::operator()(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double SampledFunction::derivative(double t) const {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - t) / h, b = (t - t_[i]) / h;
    return (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

} // namespace phasecov
