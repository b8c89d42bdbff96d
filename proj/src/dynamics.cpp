#include "phasecov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

std::string at_time(double t) { return " at t=" + std::to_string(t); }

// Forward sweep over a node lattice storing Γ₊+Γ₋, Γz and t_z. Each cell is
// advanced from its left node, so values do not depend on query order.
class RateSweep {
public:
    struct State {
        double gamma_sum = 0.0;  // Γ₊ + Γ₋
        double gamma_z = 0.0;    // Γz
        double t_z = 0.0;
    };

    RateSweep(RateTriple rates, QuadratureOptions opts) : rates_(std::move(rates)), opts_(opts) {}

    State at(double t) const {
        if (!(t >= 0.0)) throw DomainError("trajectory queried at negative time" + at_time(t));
        std::lock_guard lock(mutex_);
        if (last_ && last_->first == t) return last_->second;
        const auto cell = static_cast<std::size_t>(std::floor(t / kSpacing));
        while (nodes_.size() <= cell) {
            const double lo = kSpacing * static_cast<double>(nodes_.size() - 1);
            nodes_.push_back(advance(nodes_.back(), lo, lo + kSpacing));
        }
        const State s = advance(nodes_[cell], kSpacing * static_cast<double>(cell), t);
        last_ = std::make_pair(t, s);
        return s;
    }

private:
    static constexpr double kSpacing = 0.125;

    double sum_rate(double u) const { return rates_.gamma_plus()(u) + rates_.gamma_minus()(u); }

    State advance(const State& from, double a, double b) const {
        if (b <= a) return from;
        const auto sum = [this](double u) { return sum_rate(u); };
        const double d_sum = integrate(sum, a, b, opts_).value;
        const double d_z = integrate(rates_.gamma_z(), a, b, opts_).value;
        // t_z(b) = e^{−ΔΓ} t_z(a) + ∫ₐᵇ (γ₊ − γ₋)(u) e^{−∫ᵤᵇ(γ₊+γ₋)} du
        const auto source = [&](double u) {
            const double decay = integrate(sum, u, b, opts_).value;
            return (rates_.gamma_plus()(u) - rates_.gamma_minus()(u)) * std::exp(-decay);
        };
        const double inflow = integrate(source, a, b, opts_).value;
        return {from.gamma_sum + d_sum, from.gamma_z + d_z, std::exp(-d_sum) * from.t_z + inflow};
    }

    RateTriple rates_;
    QuadratureOptions opts_;
    mutable std::mutex mutex_;
    mutable std::vector<State> nodes_{State{}};
    mutable std::optional<std::pair<double, State>> last_;
};

} // namespace

double differentiate(const TimeFunction& f, double t) {
    const double h = std::max(1e-6, 1e-6 * std::abs(t));
    if (t - 2.0 * h >= 0.0) {
        return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
    }
    return (-25 * f(t) + 48 * f(t + h) - 36 * f(t + 2 * h) + 16 * f(t + 3 * h) - 3 * f(t + 4 * h)) /
           (12 * h);
}

RateTriple::RateTriple(TimeFunction gamma_plus, TimeFunction gamma_minus, TimeFunction gamma_z,
                       TimeFunction d_gamma_z)
    : gamma_plus_(std::move(gamma_plus)),
      gamma_minus_(std::move(gamma_minus)),
      gamma_z_(std::move(gamma_z)),
      d_gamma_z_(std::move(d_gamma_z)) {
    if (!gamma_plus_ || !gamma_minus_ || !gamma_z_) {
        throw ValidationError("rate triple requires all three rate functions");
    }
}

RateTriple RateTriple::constant(double gamma_plus, double gamma_minus, double gamma_z) {
    if (!std::isfinite(gamma_plus) || !std::isfinite(gamma_minus) || !std::isfinite(gamma_z)) {
        throw ValidationError("constant rates must be finite");
    }
    return RateTriple([gamma_plus](double) { return gamma_plus; },
                      [gamma_minus](double) { return gamma_minus; },
                      [gamma_z](double) { return gamma_z; }, [](double) { return 0.0; });
}

RateValues RateTriple::at(double t) const {
    RateValues r{gamma_plus_(t), gamma_minus_(t), gamma_z_(t)};
    if (!std::isfinite(r.gamma_plus) || !std::isfinite(r.gamma_minus) || !std::isfinite(r.gamma_z)) {
        throw ValidationError("rates are not finite" + at_time(t));
    }
    return r;
}

double RateTriple::d_gamma_z(double t) const {
    return d_gamma_z_ ? d_gamma_z_(t) : differentiate(gamma_z_, t);
}

Trajectory::Trajectory(TimeFunction lambda, TimeFunction lambda_z, TimeFunction t_z,
                       TimeFunction d_lambda, TimeFunction d_lambda_z, TimeFunction d_t_z)
    : lambda_(std::move(lambda)),
      lambda_z_(std::move(lambda_z)),
      t_z_(std::move(t_z)),
      d_lambda_(std::move(d_lambda)),
      d_lambda_z_(std::move(d_lambda_z)),
      d_t_z_(std::move(d_t_z)) {
    if (!lambda_ || !lambda_z_ || !t_z_) {
        throw ValidationError("trajectory requires lambda, lambda_z and t_z functions");
    }
}

Trajectory Trajectory::identity() {
    const auto one = [](double) { return 1.0; };
    const auto zero = [](double) { return 0.0; };
    return {one, one, zero, zero, zero, zero};
}

TrajectoryPoint Trajectory::at(double t) const { return {lambda_(t), lambda_z_(t), t_z_(t)}; }

TrajectoryPoint Trajectory::derivative_at(double t) const {
    return {d_lambda_ ? d_lambda_(t) : differentiate(lambda_, t),
            d_lambda_z_ ? d_lambda_z_(t) : differentiate(lambda_z_, t),
            d_t_z_ ? d_t_z_(t) : differentiate(t_z_, t)};
}

PhaseCovChannel Trajectory::channel_at(double t) const {
    const TrajectoryPoint p = at(t);
    return {p.lambda, p.lambda_z, p.t_z};
}

bool Trajectory::has_analytic_derivatives() const noexcept {
    return d_lambda_ && d_lambda_z_ && d_t_z_;
}

RateValues rates_from_trajectory(const Trajectory& tr, double t) {
    const TrajectoryPoint p = tr.at(t);
    if (std::abs(p.lambda) <= kInvertibilityThreshold || std::abs(p.lambda_z) <= kInvertibilityThreshold) {
        throw SingularChannel("dynamical map is not invertible" + at_time(t));
    }
    const TrajectoryPoint d = tr.derivative_at(t);
    const double log_rate_z = d.lambda_z / p.lambda_z;
    return {0.5 * (d.t_z - (1.0 + p.t_z) * log_rate_z),
            0.5 * (-d.t_z - (1.0 - p.t_z) * log_rate_z),
            0.25 * log_rate_z - 0.5 * d.lambda / p.lambda};
}

RateTriple rates_of(const Trajectory& tr) {
    return RateTriple([tr](double t) { return rates_from_trajectory(tr, t).gamma_plus; },
                      [tr](double t) { return rates_from_trajectory(tr, t).gamma_minus; },
                      [tr](double t) { return rates_from_trajectory(tr, t).gamma_z; });
}

Trajectory trajectory_from_rates(const RateTriple& rates, const QuadratureOptions& opts) {
    auto sweep = std::make_shared<const RateSweep>(rates, opts);
    const auto lambda = [sweep](double t) {
        const auto s = sweep->at(t);
        return std::exp(-0.5 * s.gamma_sum - 2.0 * s.gamma_z);
    };
    const auto lambda_z = [sweep](double t) { return std::exp(-sweep->at(t).gamma_sum); };
    const auto t_z = [sweep](double t) { return sweep->at(t).t_z; };
    const auto d_lambda = [rates, lambda](double t) {
        const RateValues r = rates.at(t);
        return -(0.5 * (r.gamma_plus + r.gamma_minus) + 2.0 * r.gamma_z) * lambda(t);
    };
    const auto d_lambda_z = [rates, lambda_z](double t) {
        const RateValues r = rates.at(t);
        return -(r.gamma_plus + r.gamma_minus) * lambda_z(t);
    };
    const auto d_t_z = [rates, t_z](double t) {
        const RateValues r = rates.at(t);
        return (r.gamma_plus - r.gamma_minus) - (r.gamma_plus + r.gamma_minus) * t_z(t);
    };
    return {lambda, lambda_z, t_z, d_lambda, d_lambda_z, d_t_z};
}

PhaseCovChannel intermediate_map(const Trajectory& tr, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= t1)) {
        throw DomainError("intermediate map requires t2 >= t1 >= 0 (t1=" + std::to_string(t1) +
                          ", t2=" + std::to_string(t2) + ")");
    }
    return compose(tr.channel_at(t2), invert(tr.channel_at(t1)));
}

PauliTransfer generator_pauli_transfer(const RateValues& r) {
    const double sum = r.gamma_plus + r.gamma_minus;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(1, 1) = m(2, 2) = -0.5 * sum - 2.0 * r.gamma_z;
    m(3, 0) = r.gamma_plus - r.gamma_minus;
    m(3, 3) = -sum;
    return PauliTransfer(m);
}

PhaseCovChannel infinitesimal_channel(const RateValues& r, double dt) {
    const double sum = r.gamma_plus + r.gamma_minus;
    return {1.0 - (0.5 * sum + 2.0 * r.gamma_z) * dt, 1.0 - sum * dt,
            (r.gamma_plus - r.gamma_minus) * dt};
}

Verdict is_cp_divisible(const RateValues& r, double tol) {
    return Verdict::from_margin(std::min({r.gamma_plus, r.gamma_minus, r.gamma_z}), tol);
}

Verdict is_p_divisible(const RateValues& r, double d_gamma_z, double tol) {
    const double smallest = std::min(r.gamma_plus, r.gamma_minus);
    if (smallest < -tol) return Verdict::from_margin(smallest, tol);
    // With γ± ≥ 0 the first-order criterion is decided by √(γ₊γ₋) + 2γz alone;
    // a vanishing γ± with γz > 0 is the CP case and lands here as well.
    const double geometric = std::sqrt(std::max(0.0, r.gamma_plus) * std::max(0.0, r.gamma_minus));
    const double first_order = geometric + 2.0 * r.gamma_z;
    if (std::abs(first_order) > tol) return Verdict::from_margin(first_order, tol);
    // Second-order condition on the boundary.
    const double second_order = d_gamma_z - r.gamma_z * (r.gamma_plus + r.gamma_minus);
    return Verdict::from_margin(second_order, tol);
}

Verdict blp_monotone(const RateValues& r, double tol) {
    const double sum = r.gamma_plus + r.gamma_minus;
    return Verdict::from_margin(std::min(sum, sum + 4.0 * r.gamma_z), tol);
}

Verdict is_cp_divisible_at(const RateTriple& r, double t, double tol) {
    return is_cp_divisible(r.at(t), tol);
}

Verdict is_p_divisible_at(const RateTriple& r, double t, double tol) {
    const RateValues v = r.at(t);
    const double smallest = std::min(v.gamma_plus, v.gamma_minus);
    const double first_order =
        std::sqrt(std::max(0.0, v.gamma_plus) * std::max(0.0, v.gamma_minus)) + 2.0 * v.gamma_z;
    // Only pay for dγz/dt when the boundary rule needs it.
    const bool boundary = smallest >= -tol && std::abs(first_order) <= tol;
    return is_p_divisible(v, boundary ? r.d_gamma_z(t) : 0.0, tol);
}

Verdict blp_monotone_at(const RateTriple& r, double t, double tol) { return blp_monotone(r.at(t), tol); }

double population(const Trajectory& tr, double rho0_z, double t) {
    if (!(rho0_z >= -1.0 && rho0_z <= 1.0)) {
        throw DomainError("initial tr[rho sigma_z] must lie in [-1, 1], got " + std::to_string(rho0_z));
    }
    const TrajectoryPoint p = tr.at(t);
    return 0.5 * (1.0 + p.t_z + p.lambda_z * rho0_z);
}

double population_rate(const Trajectory& tr, double rho0_z, double t) {
    if (!(rho0_z >= -1.0 && rho0_z <= 1.0)) {
        throw DomainError("initial tr[rho sigma_z] must lie in [-1, 1], got " + std::to_string(rho0_z));
    }
    const TrajectoryPoint d = tr.derivative_at(t);
    return 0.5 * (d.t_z + d.lambda_z * rho0_z);
}

namespace {

template <typename Classifier>
PropertyTimeline build_timeline(const std::vector<double>& grid, Classifier&& classify) {
    PropertyTimeline timeline;
    timeline.verdicts.reserve(grid.size());
    for (double t : grid) timeline.verdicts.push_back(classify(t));

    Interval current{grid.front(), grid.front(), timeline.verdicts.front().status};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const Status next = timeline.verdicts[i].status;
        if (next == current.status) continue;
        double lo = grid[i - 1], hi = grid[i];
        while (hi - lo > kCrossingResolution) {
            const double mid = 0.5 * (lo + hi);
            (classify(mid).status == current.status ? lo : hi) = mid;
        }
        const double crossing = 0.5 * (lo + hi);
        timeline.crossings.push_back({crossing, current.status, next});
        current.end = crossing;
        timeline.intervals.push_back(current);
        current = {crossing, crossing, next};
    }
    current.end = grid.back();
    timeline.intervals.push_back(current);
    return timeline;
}

} // namespace

DivisibilityReport classify_intervals(const RateTriple& r, double t_max, std::size_t n_grid, double tol) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive and finite");
    if (n_grid < 2) throw ValidationError("n_grid must be at least 2");

    DivisibilityReport report;
    report.grid.resize(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        report.grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    }

    const auto guarded = [&r, tol](auto classifier) {
        return [&r, tol, classifier](double t) {
            try {
                return classifier(r, t, tol);
            } catch (const Error& e) {
                throw Error(e.kind(), e.category(), std::string(e.what()) + " (classifying" + at_time(t) + ")");
            }
        };
    };
    report.cp_divisible = build_timeline(report.grid, guarded(is_cp_divisible_at));
    report.p_divisible = build_timeline(report.grid, guarded(is_p_divisible_at));
    report.blp_monotone = build_timeline(report.grid, guarded(blp_monotone_at));

    for (std::size_t i = 0; i < n_grid; ++i) {
        const bool cp_breaks = report.cp_divisible.verdicts[i].holds() && report.p_divisible.verdicts[i].fails();
        const bool p_breaks = report.p_divisible.verdicts[i].holds() && report.blp_monotone.verdicts[i].fails();
        if (cp_breaks || p_breaks) ++report.chain_violations;
    }
    return report;
}

} // namespace phasecov
