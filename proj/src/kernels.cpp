#include "phasecov/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

const RationalLaplace kS = RationalLaplace::s();

RationalLaplace guarded_inverse(const RationalLaplace& den, const char* what) {
    if (den.is_zero()) throw DegenerateKernel(std::string(what) + " vanishes identically");
    return RationalLaplace::constant(1.0) / den;
}

// Headroom on unit roundoff for Horner evaluation plus the rounding already
// carried by the derivative numerators.
constexpr double kRoundoffFactor = 256.0 * std::numeric_limits<double>::epsilon();

} // namespace

LaplaceParams laplace_params_from_kernel(const KernelSpec& k) {
    const RationalLaplace total = k.kappa_plus + k.kappa_minus;
    const RationalLaplace longitudinal = kS + total;
    const RationalLaplace transverse = kS + 0.5 * (total + 4.0 * k.kappa_z);
    const RationalLaplace lz = guarded_inverse(longitudinal, "s + kappa_plus + kappa_minus");
    const RationalLaplace l = guarded_inverse(transverse, "s + (kappa_plus + kappa_minus + 4 kappa_z)/2");
    return {l, lz, (k.kappa_plus - k.kappa_minus) * RationalLaplace::inverse_s() * lz};
}

Trajectory inverse_trajectory(const LaplaceParams& p) {
    auto l = std::make_shared<const std::vector<SimplePole>>(partial_fractions(p.lambda));
    auto lz = std::make_shared<const std::vector<SimplePole>>(partial_fractions(p.lambda_z));
    auto tz = std::make_shared<const std::vector<SimplePole>>(partial_fractions(p.t_z));
    return {[l](double t) { return inverse_laplace(*l, t); },
            [lz](double t) { return inverse_laplace(*lz, t); },
            [tz](double t) { return inverse_laplace(*tz, t); },
            [l](double t) { return inverse_laplace_derivative(*l, t); },
            [lz](double t) { return inverse_laplace_derivative(*lz, t); },
            [tz](double t) { return inverse_laplace_derivative(*tz, t); }};
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ValidationError("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> grid(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

std::string_view to_string(CMStatus s) noexcept {
    switch (s) {
    case CMStatus::passes: return "passes";
    case CMStatus::fails_at: return "fails_at";
    case CMStatus::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CMReport is_completely_monotone(const RationalLaplace& f, const CMOptions& opts, std::string function_id) {
    if (opts.depth < 1) throw ValidationError("depth must be at least 1");
    if (opts.grid.empty()) throw ValidationError("grid must not be empty");
    for (double s : opts.grid) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("grid points must be positive and finite");
    }
    for (double pole : f.positive_real_poles()) {
        for (double s : opts.grid) {
            if (std::abs(s - pole) <= 1e-6 * std::max(1.0, pole)) {
                std::ostringstream os;
                os << function_id << ": grid point s=" << s << " is within 1e-6 of the pole " << pole;
                throw PoleOnGrid(os.str());
            }
        }
    }

    CMReport report;
    report.function_id = std::move(function_id);
    report.depth_checked = opts.depth;
    report.grid = opts.grid;
    report.min_normalized = std::numeric_limits<double>::infinity();

    // f⁽ⁿ⁾ = Nₙ / Dⁿ⁺¹ with Nₙ₊₁ = Nₙ′D − (n+1)NₙD′.
    const Polynomial& den = f.denominator();
    const Polynomial d_den = den.derivative();
    std::vector<Polynomial> numerators{f.numerator()};
    for (int n = 0; n < opts.depth; ++n) {
        const Polynomial& p = numerators.back();
        numerators.push_back(p.derivative() * den - static_cast<double>(n + 1) * (p * d_den));
    }

    bool inconclusive = false;
    for (double s : opts.grid) {
        const double d = den(s);
        const double d_ratio = den.abs_bound(s) / std::abs(d);
        double d_power = d;  // D(s)ⁿ⁺¹
        double ratio_power = d_ratio;
        for (int n = 0; n <= opts.depth; ++n) {
            const Polynomial& p = numerators[static_cast<std::size_t>(n)];
            const double sign = n % 2 == 0 ? 1.0 : -1.0;
            const double value = sign * p(s) / d_power;
            const double scale = p.abs_bound(s) / std::abs(d_power);
            const double error = kRoundoffFactor * scale * ratio_power;
            if (scale > 0.0) report.min_normalized = std::min(report.min_normalized, value / scale);
            if (value < -opts.tol) {
                if (value < -opts.tol - error) {
                    report.status = CMStatus::fails_at;
                    report.witness = CMWitness{s, n, value};
                    report.min_normalized = std::min(report.min_normalized, value / scale);
                    return report;
                }
                inconclusive = true;
            }
            d_power *= d;
            ratio_power *= d_ratio;
        }
    }
    if (inconclusive) report.status = CMStatus::inconclusive;
    if (!std::isfinite(report.min_normalized)) report.min_normalized = 0.0;
    return report;
}

const std::array<const char*, 6> kAdmissibilityIds = {
    "kappa_plus/(s(s+K))",          "kappa_minus/(s(s+K))",
    "(s+kappa_plus)/(s(s+K))+lambda_s", "(s+kappa_plus)/(s(s+K))-lambda_s",
    "(s+kappa_minus)/(s(s+K))+lambda_s", "(s+kappa_minus)/(s(s+K))-lambda_s",
};

std::array<RationalLaplace, 6> admissibility_functions(const KernelSpec& k) {
    const LaplaceParams params = laplace_params_from_kernel(k);
    // 1/(s(s+K)) = (λz)_s / s
    const RationalLaplace base = RationalLaplace::inverse_s() * params.lambda_z;
    return {k.kappa_plus * base,
            k.kappa_minus * base,
            (kS + k.kappa_plus) * base + params.lambda,
            (kS + k.kappa_plus) * base - params.lambda,
            (kS + k.kappa_minus) * base + params.lambda,
            (kS + k.kappa_minus) * base - params.lambda};
}

AdmissibilityReport prop8_admissible(const KernelSpec& k, const CMOptions& opts) {
    const auto functions = admissibility_functions(k);
    AdmissibilityReport report;
    bool any_fail = false, any_inconclusive = false;
    double fail_value = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < functions.size(); ++i) {
        report.per_function[i] = is_completely_monotone(functions[i], opts, kAdmissibilityIds[i]);
        const CMReport& r = report.per_function[i];
        if (r.status == CMStatus::fails_at) {
            if (!any_fail || r.witness->value < fail_value) fail_value = r.witness->value;
            any_fail = true;
        } else if (r.status == CMStatus::inconclusive) {
            any_inconclusive = true;
        } else {
            margin = std::min(margin, r.min_normalized);
        }
    }
    if (any_fail) {
        report.overall = {Status::fails, fail_value};
    } else if (any_inconclusive) {
        report.overall = {Status::marginal, 0.0};
    } else {
        report.overall = Verdict::from_margin(std::max(margin, 0.0), opts.tol);
    }
    return report;
}

KernelSpec example_kernel(double a, double a_plus, double a_minus, const RationalLaplace& f_s) {
    if (!std::isfinite(a) || !std::isfinite(a_plus) || !std::isfinite(a_minus)) {
        throw ValidationError("example kernel parameters must be finite");
    }
    if (!(a_plus > 0.0) || !(a_minus > 0.0) || !(a >= a_plus) || !(a >= a_minus)) {
        std::ostringstream os;
        os << "example kernel requires a >= a_plus > 0 and a >= a_minus > 0, got (" << a << ", " << a_plus
           << ", " << a_minus << ")";
        throw DomainError(os.str());
    }
    const double sum = a_plus + a_minus;
    const RationalLaplace one = RationalLaplace::constant(1.0);
    const RationalLaplace longitudinal = one - sum * f_s;
    const RationalLaplace transverse = one - a * f_s;
    if (longitudinal.is_zero()) throw DegenerateKernel("1 - (a_plus + a_minus) f_s vanishes identically");
    if (transverse.is_zero()) throw DegenerateKernel("1 - a f_s vanishes identically");

    const RationalLaplace sf = kS * f_s;
    const RationalLaplace shared = sf / longitudinal;
    const RationalLaplace bracket = RationalLaplace::constant(2.0 * a - sum) - (a * sum) * f_s;
    return {a_plus * shared, a_minus * shared, 0.25 * (shared * bracket / transverse)};
}

} // namespace phasecov
