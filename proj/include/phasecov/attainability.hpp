#pragma once

#include "phasecov/channel.hpp"
#include "phasecov/dynamics.hpp"
#include "phasecov/verdict.hpp"

namespace phasecov {

struct ClassMembership {
    Verdict in_c_l;
    Verdict in_c_l_rotated;
    Verdict in_c_phcov_cp;
    Verdict in_c_cp;
};

/// Reachable by a dissipative phase covariant semigroup: CP, λ >= 0, λz >= λ².
Verdict in_class_L(const PhaseCovChannel& ch, double tol = kTolerance);
/// Reachable once a coherent rotation about z is allowed: CP, λz >= λ².
/// The same region describes CP-divisible dynamics with rotations.
Verdict in_class_L_rotated(const PhaseCovChannel& ch, double tol = kTolerance);
/// Reachable by CP-divisible phase covariant dynamics; coincides with class L.
Verdict in_class_phcov_cp(const PhaseCovChannel& ch, double tol = kTolerance);
/// Reachable by any CP-divisible qubit dynamics: CP and (λz >= λ² or λ = 0).
Verdict in_class_cp(const PhaseCovChannel& ch, double tol = kTolerance);

ClassMembership classify_membership(const PhaseCovChannel& ch, double tol = kTolerance);

/// Constant rates with Φ = e^L. Requires the strict interior λ > 0,
/// 1 > λz > λ² together with complete positivity; throws NotInInterior
/// otherwise or if the result does not reproduce ch to 1e-9.
RateValues semigroup_generator_from_channel(const PhaseCovChannel& ch, double tol = kTolerance);

} // namespace phasecov
