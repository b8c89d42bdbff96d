#pragma once

#include <string_view>

namespace phasecov {

/// Global classification tolerance. A slack within this band of zero is
/// reported as marginal rather than forced to one side.
inline constexpr double kTolerance = 1e-9;

/// Channels with |λ| or |λz| at or below this are treated as non-invertible.
inline constexpr double kInvertibilityThreshold = 1e-12;

enum class Status { holds, fails, marginal };

std::string_view to_string(Status s) noexcept;

/// Tri-state outcome of an inequality test. `margin` is the signed slack of
/// the tightest inequality; status is marginal iff |margin| <= tolerance.
struct Verdict {
    Status status = Status::marginal;
    double margin = 0.0;

    static Verdict from_margin(double margin, double tol = kTolerance) noexcept;

    bool holds() const noexcept { return status == Status::holds; }
    bool fails() const noexcept { return status == Status::fails; }
    bool marginal() const noexcept { return status == Status::marginal; }
    // Holds in the closure sense: strictly inside or on the boundary band.
    bool satisfied() const noexcept { return status != Status::fails; }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

} // namespace phasecov
