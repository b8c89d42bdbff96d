#include "phasecov/verdict.hpp"

#include <cmath>

namespace phasecov {

std::string_view to_string(Status s) noexcept {
    switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::marginal: return "marginal";
    }
    return "unknown";
}

Verdict Verdict::from_margin(double margin, double tol) noexcept {
    if (std::isnan(margin)) return {Status::fails, margin};
    if (margin > tol) return {Status::holds, margin};
    if (margin < -tol) return {Status::fails, margin};
    return {Status::marginal, margin};
}

} // namespace phasecov
