#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phasecov/dynamics.hpp"
#include "phasecov/rational.hpp"
#include "phasecov/verdict.hpp"

namespace phasecov {

/// Laplace transforms of the three memory-kernel rates.
struct KernelSpec {
    RationalLaplace kappa_plus;
    RationalLaplace kappa_minus;
    RationalLaplace kappa_z;

    static KernelSpec zero() { return {}; }
};

/// Laplace transforms of λ(t), λz(t), t_z(t).
struct LaplaceParams {
    RationalLaplace lambda;
    RationalLaplace lambda_z;
    RationalLaplace t_z;
};

/// λ_s = 1/(s + (κ₊+κ₋+4κz)/2), (λz)_s = 1/(s + κ₊+κ₋),
/// (t_z)_s = (κ₊−κ₋)/(s(s + κ₊+κ₋)). Throws DegenerateKernel when a
/// denominator vanishes identically.
LaplaceParams laplace_params_from_kernel(const KernelSpec& k);

/// Inverse transform by partial fractions; simple real poles only.
Trajectory inverse_trajectory(const LaplaceParams& p);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct CMOptions {
    int depth = 8;
    std::vector<double> grid = log_grid(1e-3, 1e3, 64);
    double tol = kTolerance;
};

enum class CMStatus { passes, fails_at, inconclusive };

std::string_view to_string(CMStatus s) noexcept;

struct CMWitness {
    double s = 0.0;
    int n = 0;
    double value = 0.0;  // (−1)ⁿ f⁽ⁿ⁾(s)
};

/// Sampled Bernstein test. `fails_at` carries a witness whose negativity
/// exceeds both the tolerance and the evaluation error bound; a value below
/// −tol that is within the error bound makes the report inconclusive.
struct CMReport {
    std::string function_id;
    int depth_checked = 0;
    std::vector<double> grid;
    CMStatus status = CMStatus::passes;
    std::optional<CMWitness> witness;
    double min_normalized = 0.0;  // smallest (−1)ⁿ f⁽ⁿ⁾ / |f⁽ⁿ⁾|-scale seen
};

/// Checks (−1)ⁿ f⁽ⁿ⁾(s) >= −tol for n = 0..depth on the grid. Throws
/// ValidationError for depth < 1 or a bad grid, PoleOnGrid when a grid point
/// lies within 1e-6 of a positive real pole.
CMReport is_completely_monotone(const RationalLaplace& f, const CMOptions& opts = {},
                                std::string function_id = "f");

struct AdmissibilityReport {
    Verdict overall;
    std::array<CMReport, 6> per_function;
};

/// The six functions κ_m/(s(s+K)) and (s+κ_m)/(s(s+K)) ± λ_s for m = ±,
/// K = κ₊+κ₋, in that order: m=+, m=−, then the ± pairs for m=+ and m=−.
std::array<RationalLaplace, 6> admissibility_functions(const KernelSpec& k);
extern const std::array<const char*, 6> kAdmissibilityIds;

/// Complete monotonicity of all six functions is sufficient for a legitimate
/// dynamics. Overall fails on any witness, is marginal when a check is
/// inconclusive or sits on the tolerance band, and holds otherwise.
AdmissibilityReport prop8_admissible(const KernelSpec& k, const CMOptions& opts = {});

/// κ± = a± s f_s/(1 − (a₊+a₋) f_s),
/// κz = s f_s [2a − a₊ − a₋ − a(a₊+a₋) f_s] / (4(1 − a f_s)(1 − (a₊+a₋) f_s)).
/// Throws DomainError unless a >= a± > 0, DegenerateKernel when a
/// denominator vanishes identically.
KernelSpec example_kernel(double a, double a_plus, double a_minus, const RationalLaplace& f_s);

} // namespace phasecov
