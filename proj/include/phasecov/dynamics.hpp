#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "phasecov/channel.hpp"
#include "phasecov/quadrature.hpp"
#include "phasecov/verdict.hpp"

namespace phasecov {

using TimeFunction = std::function<double(double)>;

/// 5-point central difference with step max(1e-6, 1e-6|t|); switches to a
/// one-sided 5-point stencil when the central one would reach below t = 0.
double differentiate(const TimeFunction& f, double t);

struct RateValues {
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double gamma_z = 0.0;
};

/// Decoherence rates γ₊(t), γ₋(t), γz(t) of the time-local generator. The
/// functions must be deterministic and reentrant.
class RateTriple {
public:
    RateTriple(TimeFunction gamma_plus, TimeFunction gamma_minus, TimeFunction gamma_z,
               TimeFunction d_gamma_z = {});

    static RateTriple constant(double gamma_plus, double gamma_minus, double gamma_z);
    static RateTriple zero() { return constant(0.0, 0.0, 0.0); }

    /// Throws ValidationError when any rate is non-finite at t.
    RateValues at(double t) const;
    double d_gamma_z(double t) const;
    bool has_analytic_d_gamma_z() const noexcept { return static_cast<bool>(d_gamma_z_); }

    const TimeFunction& gamma_plus() const noexcept { return gamma_plus_; }
    const TimeFunction& gamma_minus() const noexcept { return gamma_minus_; }
    const TimeFunction& gamma_z() const noexcept { return gamma_z_; }

private:
    TimeFunction gamma_plus_, gamma_minus_, gamma_z_, d_gamma_z_;
};

struct TrajectoryPoint {
    double lambda = 1.0;
    double lambda_z = 1.0;
    double t_z = 0.0;
};

/// Time-parameterised (λ(t), λz(t), t_z(t)). Derivatives are analytic when
/// supplied, otherwise finite differences.
class Trajectory {
public:
    Trajectory(TimeFunction lambda, TimeFunction lambda_z, TimeFunction t_z,
               TimeFunction d_lambda = {}, TimeFunction d_lambda_z = {}, TimeFunction d_t_z = {});

    static Trajectory identity();

    TrajectoryPoint at(double t) const;
    TrajectoryPoint derivative_at(double t) const;
    PhaseCovChannel channel_at(double t) const;
    bool has_analytic_derivatives() const noexcept;

private:
    TimeFunction lambda_, lambda_z_, t_z_;
    TimeFunction d_lambda_, d_lambda_z_, d_t_z_;
};

/// Decoherence rates of the time-local generator L(t) = Φ'(t) Φ(t)⁻¹.
/// Throws SingularChannel if Φ(t) is not invertible.
RateValues rates_from_trajectory(const Trajectory& tr, double t);

/// Rates of a trajectory as time functions (dγz/dt by finite differences).
RateTriple rates_of(const Trajectory& tr);

/// Integrates the rates forward:
///   λ = exp[−Γ₊/2 − Γ₋/2 − 2Γz],  λz = exp[−Γ₊ − Γ₋],
///   t_z = exp[−Γ₊ − Γ₋] ∫₀ᵗ (γ₊ − γ₋) exp[Γ₊ + Γ₋] dt′.
/// The sweep stores the running integrals on a node lattice; the returned
/// trajectory carries analytic derivatives derived from the rates.
Trajectory trajectory_from_rates(const RateTriple& rates, const QuadratureOptions& opts = {});

/// Λ(t2, t1) = Φ(t2) Φ(t1)⁻¹.
PhaseCovChannel intermediate_map(const Trajectory& tr, double t1, double t2);

/// Pauli transfer matrix of the generator with rates r (not a channel).
PauliTransfer generator_pauli_transfer(const RateValues& r);

/// First-order propagator Id + L dt.
PhaseCovChannel infinitesimal_channel(const RateValues& r, double dt);

Verdict is_cp_divisible(const RateValues& r, double tol = kTolerance);
/// `d_gamma_z` is consulted only on the boundary √(γ₊γ₋) + 2γz = 0.
Verdict is_p_divisible(const RateValues& r, double d_gamma_z, double tol = kTolerance);
Verdict blp_monotone(const RateValues& r, double tol = kTolerance);

Verdict is_cp_divisible_at(const RateTriple& r, double t, double tol = kTolerance);
Verdict is_p_divisible_at(const RateTriple& r, double t, double tol = kTolerance);
Verdict blp_monotone_at(const RateTriple& r, double t, double tol = kTolerance);

/// p(t) = ½[1 + t_z(t) + λz(t) ρ0_z], with ρ0_z = tr[ρ(0) σz] ∈ [−1, 1].
double population(const Trajectory& tr, double rho0_z, double t);
double population_rate(const Trajectory& tr, double rho0_z, double t);

struct Interval {
    double start = 0.0;
    double end = 0.0;
    Status status = Status::holds;
};

struct Crossing {
    double t = 0.0;
    Status from = Status::holds;
    Status to = Status::fails;
};

struct PropertyTimeline {
    std::vector<Verdict> verdicts;    // one per grid time
    std::vector<Interval> intervals;  // maximal runs of equal status
    std::vector<Crossing> crossings;  // status flips, bisected to 1e-8 in t
};

struct DivisibilityReport {
    std::vector<double> grid;
    PropertyTimeline cp_divisible;
    PropertyTimeline p_divisible;
    PropertyTimeline blp_monotone;
    std::size_t chain_violations = 0;  // CP-div ⇒ P-div ⇒ BLP broken strictly
};

inline constexpr double kCrossingResolution = 1e-8;

DivisibilityReport classify_intervals(const RateTriple& r, double t_max, std::size_t n_grid,
                                      double tol = kTolerance);

} // namespace phasecov
