#include "phasecov/attainability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasecov/error.hpp"
#include "phasecov/families.hpp"

namespace phasecov {

namespace {

double lambda_gap(const PhaseCovChannel& ch) { return ch.lambda_z() - ch.lambda() * ch.lambda(); }

} // namespace

Verdict in_class_L(const PhaseCovChannel& ch, double tol) {
    return Verdict::from_margin(std::min({is_cp(ch, tol).margin, ch.lambda(), lambda_gap(ch)}), tol);
}

Verdict in_class_L_rotated(const PhaseCovChannel& ch, double tol) {
    return Verdict::from_margin(std::min(is_cp(ch, tol).margin, lambda_gap(ch)), tol);
}

Verdict in_class_phcov_cp(const PhaseCovChannel& ch, double tol) { return in_class_L(ch, tol); }

Verdict in_class_cp(const PhaseCovChannel& ch, double tol) {
    const double either = std::max(lambda_gap(ch), -std::abs(ch.lambda()));
    return Verdict::from_margin(std::min(is_cp(ch, tol).margin, either), tol);
}

ClassMembership classify_membership(const PhaseCovChannel& ch, double tol) {
    return {in_class_L(ch, tol), in_class_L_rotated(ch, tol), in_class_phcov_cp(ch, tol), in_class_cp(ch, tol)};
}

RateValues semigroup_generator_from_channel(const PhaseCovChannel& ch, double tol) {
    const double l = ch.lambda(), lz = ch.lambda_z(), tz = ch.t_z();
    const auto reject = [&](const std::string& why) {
        std::ostringstream os;
        os << "channel (" << l << ", " << lz << ", " << tz << ") is not in the semigroup interior: " << why;
        throw NotInInterior(os.str());
    };
    if (is_cp(ch, tol).fails()) reject("not completely positive");
    if (!(l > tol)) reject("lambda must be positive");
    if (!(lz < 1.0 - tol)) reject("lambda_z must be below 1");
    if (!(lambda_gap(ch) > tol)) reject("lambda_z must exceed lambda^2");

    const double log_ratio = -std::log(lz) / (2.0 * (1.0 - lz));
    const RateValues r{(1.0 - lz + tz) * log_ratio, (1.0 - lz - tz) * log_ratio, 0.25 * std::log(lz / (l * l))};

    const PhaseCovChannel back =
        semigroup(std::max(0.0, r.gamma_plus), std::max(0.0, r.gamma_minus), r.gamma_z).trajectory.channel_at(1.0);
    const double residual = std::max({std::abs(back.lambda() - l), std::abs(back.lambda_z() - lz),
                                      std::abs(back.t_z() - tz)});
    if (residual > 1e-9) reject("generator does not reproduce the channel (residual " + std::to_string(residual) + ")");
    return r;
}

} // namespace phasecov
