#include "phasecov/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <optional>
#include <thread>

#include "phasecov/attainability.hpp"
#include "phasecov/error.hpp"

namespace phasecov {

std::string_view to_string(Predicate p) noexcept {
    switch (p) {
    case Predicate::cp: return "cp";
    case Predicate::positive: return "positive";
    case Predicate::polyhedron: return "polyhedron";
    case Predicate::class_l: return "class_l";
    case Predicate::class_l_rotated: return "class_l_rotated";
    case Predicate::class_cp: return "class_cp";
    }
    return "cp";
}

const std::vector<Predicate>& all_predicates() {
    static const std::vector<Predicate> all = {Predicate::cp,      Predicate::positive,        Predicate::polyhedron,
                                               Predicate::class_l, Predicate::class_l_rotated, Predicate::class_cp};
    return all;
}

Predicate predicate_from_string(std::string_view name) {
    for (Predicate p : all_predicates()) {
        if (to_string(p) == name) return p;
    }
    throw ValidationError("predicates: unknown predicate '" + std::string(name) +
                          "' (expected cp, positive, polyhedron, class_l, class_l_rotated, class_cp)");
}

Verdict evaluate(Predicate p, const PhaseCovChannel& ch, double tol) {
    switch (p) {
    case Predicate::cp: return is_cp(ch, tol);
    case Predicate::positive: return is_positive(ch, tol);
    case Predicate::polyhedron: return in_polyhedron(ch, tol);
    case Predicate::class_l: return in_class_L(ch, tol);
    case Predicate::class_l_rotated: return in_class_L_rotated(ch, tol);
    case Predicate::class_cp: return in_class_cp(ch, tol);
    }
    return is_cp(ch, tol);
}

double AxisRange::value(int i) const {
    if (i == steps - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void validate(const ScanConfig& cfg) {
    const auto check = [](const AxisRange& r, const std::string& name) {
        if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw ValidationError(name + ": range must be finite");
        if (r.min > r.max) throw ValidationError(name + ": min must not exceed max");
        if (r.steps < 2) throw ValidationError(name + ".steps: must be at least 2");
    };
    check(cfg.lambda, "lambda");
    check(cfg.lambda_z, "lambda_z");
    check(cfg.t_z, "t_z");
    if (cfg.predicates.empty()) throw ValidationError("predicates: at least one predicate is required");
}

std::size_t RegionScan::points() const {
    return static_cast<std::size_t>(config.lambda.steps) * static_cast<std::size_t>(config.lambda_z.steps) *
           static_cast<std::size_t>(config.t_z.steps);
}

PhaseCovChannel RegionScan::channel(std::size_t point) const {
    const auto nz = static_cast<std::size_t>(config.t_z.steps);
    const auto ny = static_cast<std::size_t>(config.lambda_z.steps);
    const auto k = static_cast<int>(point % nz);
    const auto j = static_cast<int>((point / nz) % ny);
    const auto i = static_cast<int>(point / (nz * ny));
    return {config.lambda.value(i), config.lambda_z.value(j), config.t_z.value(k)};
}

RegionScan scan_region(const ScanConfig& cfg, unsigned threads, double tol) {
    validate(cfg);
    RegionScan scan{cfg, {}};
    const std::size_t np = cfg.predicates.size();
    const std::size_t per_row = static_cast<std::size_t>(cfg.lambda_z.steps) * static_cast<std::size_t>(cfg.t_z.steps);
    scan.statuses.resize(scan.points() * np);

    const auto rows = static_cast<std::size_t>(cfg.lambda.steps);
    const auto worker = [&](std::size_t first_row, std::size_t stride) {
        for (std::size_t row = first_row; row < rows; row += stride) {
            for (std::size_t q = row * per_row; q < (row + 1) * per_row; ++q) {
                const PhaseCovChannel ch = scan.channel(q);
                for (std::size_t p = 0; p < np; ++p) {
                    scan.statuses[q * np + p] = static_cast<std::uint8_t>(evaluate(cfg.predicates[p], ch, tol).status);
                }
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows)));
    if (n == 1) {
        worker(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker, w, n);
    }
    return scan;
}

std::vector<StatusCounts> count_statuses(const RegionScan& scan) {
    std::vector<StatusCounts> counts(scan.config.predicates.size());
    for (std::size_t q = 0; q < scan.points(); ++q) {
        for (std::size_t p = 0; p < counts.size(); ++p) {
            switch (scan.status(q, p)) {
            case Status::holds: ++counts[p].holds; break;
            case Status::fails: ++counts[p].fails; break;
            case Status::marginal: ++counts[p].marginal; break;
            }
        }
    }
    return counts;
}

const std::vector<std::pair<Predicate, Predicate>>& known_containments() {
    static const std::vector<std::pair<Predicate, Predicate>> pairs = {
        {Predicate::polyhedron, Predicate::cp},           {Predicate::cp, Predicate::positive},
        {Predicate::class_l, Predicate::class_l_rotated}, {Predicate::class_l_rotated, Predicate::cp},
        {Predicate::class_l_rotated, Predicate::class_cp}, {Predicate::class_cp, Predicate::cp},
    };
    return pairs;
}

std::vector<Containment> check_containments(const RegionScan& scan) {
    const auto& preds = scan.config.predicates;
    const auto index = [&](Predicate p) -> std::optional<std::size_t> {
        const auto it = std::find(preds.begin(), preds.end(), p);
        if (it == preds.end()) return std::nullopt;
        return static_cast<std::size_t>(std::distance(preds.begin(), it));
    };
    std::vector<Containment> out;
    for (const auto& [inner, outer] : known_containments()) {
        const auto a = index(inner), b = index(outer);
        if (!a || !b) continue;
        Containment c{inner, outer};
        for (std::size_t q = 0; q < scan.points(); ++q) {
            if (scan.status(q, *a) == Status::fails) continue;
            ++c.inner_satisfied;
            if (scan.status(q, *b) == Status::fails) ++c.violations;
        }
        out.push_back(c);
    }
    return out;
}

} // namespace phasecov
