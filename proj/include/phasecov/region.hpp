#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "phasecov/channel.hpp"
#include "phasecov/verdict.hpp"

namespace phasecov {

enum class Predicate { cp, positive, polyhedron, class_l, class_l_rotated, class_cp };

std::string_view to_string(Predicate p) noexcept;
/// Throws ValidationError for an unknown name.
Predicate predicate_from_string(std::string_view name);
const std::vector<Predicate>& all_predicates();

Verdict evaluate(Predicate p, const PhaseCovChannel& ch, double tol = kTolerance);

struct AxisRange {
    double min = -1.5;
    double max = 1.5;
    int steps = 101;

    double value(int i) const;
};

struct ScanConfig {
    AxisRange lambda;
    AxisRange lambda_z;
    AxisRange t_z;
    std::vector<Predicate> predicates = all_predicates();
};

/// Throws ValidationError naming the offending field.
void validate(const ScanConfig& cfg);

/// Statuses on the grid, λ outermost and t_z innermost, predicates fastest.
struct RegionScan {
    ScanConfig config;
    std::vector<std::uint8_t> statuses;

    std::size_t points() const;
    Status status(std::size_t point, std::size_t predicate) const {
        return static_cast<Status>(statuses[point * config.predicates.size() + predicate]);
    }
    PhaseCovChannel channel(std::size_t point) const;
};

/// Rows are computed on `threads` workers; the result does not depend on the
/// thread count.
RegionScan scan_region(const ScanConfig& cfg, unsigned threads = 1, double tol = kTolerance);

struct StatusCounts {
    std::size_t holds = 0;
    std::size_t fails = 0;
    std::size_t marginal = 0;
};

std::vector<StatusCounts> count_statuses(const RegionScan& scan);

/// inner ⊂ outer: no point where inner is satisfied and outer fails.
struct Containment {
    Predicate inner;
    Predicate outer;
    std::size_t inner_satisfied = 0;
    std::size_t violations = 0;
};

/// Known inclusions among the scanned predicates.
std::vector<Containment> check_containments(const RegionScan& scan);
const std::vector<std::pair<Predicate, Predicate>>& known_containments();

} // namespace phasecov
