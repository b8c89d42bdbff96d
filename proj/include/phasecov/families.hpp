#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasecov/dynamics.hpp"
#include "phasecov/named_function.hpp"

namespace phasecov {

enum class FamilyKind {
    semigroup,
    rotated_semigroup,
    nonmonotone_population,
    eternal_commutative,
    eternal_noncommutative,
    kernel_example,
};

std::string_view to_string(FamilyKind k) noexcept;
/// Throws ValidationError for an unknown name.
FamilyKind family_kind_from_string(std::string_view name);

struct FamilySpec {
    FamilyKind kind = FamilyKind::semigroup;
    std::map<std::string, double> params;
    std::optional<NamedFunction> f;  // kernel_example only
};

/// A built-in dynamical map with analytic trajectory and rates. For the
/// rotated semigroup the trajectory lives in the frame co-rotating at
/// `rotation_rate`.
struct Family {
    Trajectory trajectory;
    RateTriple rates;
    double rotation_rate = 0.0;
};

struct FamilyInfo {
    FamilyKind kind;
    std::vector<std::string> parameters;
    std::string summary;
};

const std::vector<FamilyInfo>& family_catalog();

/// Constant rates, all non-negative. γ₊ + γ₋ = 0 is pure dephasing.
Family semigroup(double gamma_plus, double gamma_minus, double gamma_z);
/// Semigroup with an added coherent rotation ρ → e^{−iσz ωt} ρ e^{iσz ωt}.
Family rotated_semigroup(double gamma_plus, double gamma_minus, double gamma_z, double omega);
/// λ = e^{−νt}, λz = e^{−2νt}, t_z = 2ν sin(ωt)/√(4ν²+ω²); ν, ω > 0.
Family nonmonotone_population(double nu, double omega);
/// Commutative eternally CP-indivisible map; |a| < 1, ν > 0.
Family eternal_commutative(double a, double nu);
/// Non-commutative eternally CP-indivisible map; 0 < |b| <= 1, ν > 0.
Family eternal_noncommutative(double b, double nu);
/// λ = 1 − aF, λz = 1 − (a₊+a₋)F, t_z = (a₊−a₋)F with F(t) = ∫₀ᵗ f.
/// Requires a >= a± > 0 and 0 <= F <= 2/(a + max a±) on `n_check` uniform
/// points of [0, horizon].
Family kernel_example(double a, double a_plus, double a_minus, const NamedFunction& f,
                      double horizon = 10.0, std::size_t n_check = 1001);

/// Throws ValidationError for missing or unknown parameters, DomainError for
/// values outside a family's domain.
Family make_family(const FamilySpec& spec, double horizon = 10.0);

/// The lab-frame channel at t when it is phase covariant: always for
/// unrotated families; for a rotation only when 2ωt is a multiple of π, in
/// which case λ picks up the sign cos 2ωt.
std::optional<PhaseCovChannel> lab_frame_channel(const Family& family, double t);

} // namespace phasecov
