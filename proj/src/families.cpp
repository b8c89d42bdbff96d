#include "phasecov/families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "phasecov/error.hpp"
#include "phasecov/quadrature.hpp"

namespace phasecov {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

void require_finite(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw ValidationError("family parameters must be finite");
    }
}

TimeFunction zero_fn() {
    return [](double) { return 0.0; };
}

TimeFunction constant_fn(double c) {
    return [c](double) { return c; };
}

} // namespace

std::string_view to_string(FamilyKind k) noexcept {
    switch (k) {
    case FamilyKind::semigroup: return "semigroup";
    case FamilyKind::rotated_semigroup: return "rotated_semigroup";
    case FamilyKind::nonmonotone_population: return "nonmonotone_population";
    case FamilyKind::eternal_commutative: return "eternal_commutative";
    case FamilyKind::eternal_noncommutative: return "eternal_noncommutative";
    case FamilyKind::kernel_example: return "kernel_example";
    }
    return "semigroup";
}

FamilyKind family_kind_from_string(std::string_view name) {
    for (const auto& info : family_catalog()) {
        if (to_string(info.kind) == name) return info.kind;
    }
    throw ValidationError("unknown family kind '" + std::string(name) + "'");
}

const std::vector<FamilyInfo>& family_catalog() {
    static const std::vector<FamilyInfo> catalog = {
        {FamilyKind::semigroup, {"gamma_plus", "gamma_minus", "gamma_z"},
         "dissipative semigroup with constant non-negative rates"},
        {FamilyKind::rotated_semigroup, {"gamma_plus", "gamma_minus", "gamma_z", "omega"},
         "semigroup plus coherent rotation about z at angular rate omega (co-rotating frame)"},
        {FamilyKind::nonmonotone_population, {"nu", "omega"},
         "CP-divisible map whose excited population oscillates for every initial state"},
        {FamilyKind::eternal_commutative, {"a", "nu"},
         "commutative eternally CP-indivisible map, |a| < 1"},
        {FamilyKind::eternal_noncommutative, {"b", "nu"},
         "non-commutative eternally CP-indivisible map, 0 < |b| <= 1"},
        {FamilyKind::kernel_example, {"a", "a_plus", "a_minus"},
         "memory-kernel example driven by f(t), a >= a_plus, a_minus > 0"},
    };
    return catalog;
}

Family semigroup(double gamma_plus, double gamma_minus, double gamma_z) {
    require_finite({gamma_plus, gamma_minus, gamma_z});
    if (gamma_plus < 0.0 || gamma_minus < 0.0 || gamma_z < 0.0) {
        throw DomainError("semigroup rates must be non-negative, got (" + num(gamma_plus) + ", " +
                          num(gamma_minus) + ", " + num(gamma_z) + ")");
    }
    const double sum = gamma_plus + gamma_minus;
    const double transverse = 0.5 * sum + 2.0 * gamma_z;
    const double diff = gamma_plus - gamma_minus;
    const double asymptote = sum > 0.0 ? diff / sum : 0.0;

    Trajectory tr([=](double t) { return std::exp(-transverse * t); },
                  [=](double t) { return std::exp(-sum * t); },
                  [=](double t) { return sum > 0.0 ? -asymptote * std::expm1(-sum * t) : 0.0; },
                  [=](double t) { return -transverse * std::exp(-transverse * t); },
                  [=](double t) { return -sum * std::exp(-sum * t); },
                  [=](double t) { return diff * std::exp(-sum * t); });
    return {std::move(tr), RateTriple::constant(gamma_plus, gamma_minus, gamma_z), 0.0};
}

Family rotated_semigroup(double gamma_plus, double gamma_minus, double gamma_z, double omega) {
    require_finite({omega});
    Family f = semigroup(gamma_plus, gamma_minus, gamma_z);
    f.rotation_rate = omega;
    return f;
}

Family nonmonotone_population(double nu, double omega) {
    require_finite({nu, omega});
    if (!(nu > 0.0) || !(omega > 0.0)) {
        throw DomainError("nonmonotone_population requires nu > 0 and omega > 0");
    }
    const double root = std::sqrt(4.0 * nu * nu + omega * omega);
    const double amp = 2.0 * nu / root;
    const double k = nu / root;

    Trajectory tr([=](double t) { return std::exp(-nu * t); },
                  [=](double t) { return std::exp(-2.0 * nu * t); },
                  [=](double t) { return amp * std::sin(omega * t); },
                  [=](double t) { return -nu * std::exp(-nu * t); },
                  [=](double t) { return -2.0 * nu * std::exp(-2.0 * nu * t); },
                  [=](double t) { return amp * omega * std::cos(omega * t); });
    const auto swing = [=](double t) { return k * (2.0 * nu * std::sin(omega * t) + omega * std::cos(omega * t)); };
    RateTriple rates([=](double t) { return nu + swing(t); }, [=](double t) { return nu - swing(t); },
                     zero_fn(), zero_fn());
    return {std::move(tr), std::move(rates), 0.0};
}

Family eternal_commutative(double a, double nu) {
    require_finite({a, nu});
    if (!(std::abs(a) < 1.0) || !(nu > 0.0)) {
        throw DomainError("eternal_commutative requires |a| < 1 and nu > 0, got a=" + num(a) + ", nu=" + num(nu));
    }
    const double a2 = a * a;
    const auto x = [=](double t) { return std::exp(-2.0 * nu * t); };
    const auto lambda = [=](double t) {
        const double e = x(t);
        return 0.5 * std::sqrt((1.0 + e) * (1.0 + e) - a2 * (1.0 - e) * (1.0 - e));
    };
    Trajectory tr(lambda, x, [=](double t) { return -a * std::expm1(-2.0 * nu * t); },
                  [=](double t) {
                      const double e = x(t);
                      const double de = -2.0 * nu * e;
                      return ((1.0 + e) + a2 * (1.0 - e)) * de / (4.0 * lambda(t));
                  },
                  [=](double t) { return -2.0 * nu * x(t); },
                  [=](double t) { return 2.0 * a * nu * x(t); });

    const double c = 1.0 - a2, d = 1.0 + a2;
    RateTriple rates(constant_fn(nu * (1.0 + a)), constant_fn(nu * (1.0 - a)),
                     [=](double t) {
                         const double u = 2.0 * nu * t;
                         return -nu * c * std::tanh(u) / (2.0 * (d / std::cosh(u) + c));
                     },
                     [=](double t) {
                         const double sech = 1.0 / std::cosh(2.0 * nu * t);
                         const double den = d * sech + c;
                         return -nu * nu * c * sech * (d + c * sech) / (den * den);
                     });
    return {std::move(tr), std::move(rates), 0.0};
}

Family eternal_noncommutative(double b, double nu) {
    require_finite({b, nu});
    if (!(b != 0.0 && std::abs(b) <= 1.0) || !(nu > 0.0)) {
        throw DomainError("eternal_noncommutative requires 0 < |b| <= 1 and nu > 0, got b=" + num(b) +
                          ", nu=" + num(nu));
    }
    const double b2 = b * b;
    const auto x = [=](double t) { return std::exp(-2.0 * nu * t); };
    const auto y = [=](double t) { return std::exp(-nu * t); };
    const auto lambda = [=](double t) {
        const double e = x(t);
        return 0.5 * std::sqrt((1.0 + e) * (1.0 + e) - b2 * e * (1.0 - e) * (1.0 - e));
    };
    Trajectory tr(lambda, x,
                  [=](double t) {
                      const double v = y(t);
                      return b * v * (1.0 - v * v);
                  },
                  [=](double t) {
                      const double e = x(t);
                      const double de = -2.0 * nu * e;
                      return 0.25 * de * (2.0 * (1.0 + e) - b2 * (1.0 - e) * (1.0 - 3.0 * e)) / (2.0 * lambda(t));
                  },
                  [=](double t) { return -2.0 * nu * x(t); },
                  [=](double t) {
                      const double v = y(t);
                      return -b * nu * v * (1.0 - 3.0 * v * v);
                  });

    const auto swing = [=](double t) { return b * std::exp(-2.0 * nu * t) * std::cosh(nu * t); };
    RateTriple rates([=](double t) { return nu * (1.0 + swing(t)); },
                     [=](double t) { return nu * (1.0 - swing(t)); },
                     [=](double t) {
                         const double ch = std::cosh(nu * t), sh = std::sinh(nu * t);
                         const double num = -nu * (-std::expm1(-2.0 * nu * t)) * (std::exp(3.0 * nu * t) * ch - b2);
                         const double den = 4.0 * (std::exp(2.0 * nu * t) * ch * ch - b2 * sh * sh);
                         return num / den;
                     });
    return {std::move(tr), std::move(rates), 0.0};
}

Family kernel_example(double a, double a_plus, double a_minus, const NamedFunction& f, double horizon,
                      std::size_t n_check) {
    require_finite({a, a_plus, a_minus, horizon});
    if (!(a_plus > 0.0) || !(a_minus > 0.0) || !(a >= a_plus) || !(a >= a_minus)) {
        throw DomainError("kernel_example requires a >= a_plus > 0 and a >= a_minus > 0, got a=" + num(a) +
                          ", a_plus=" + num(a_plus) + ", a_minus=" + num(a_minus));
    }
    if (!(horizon > 0.0) || n_check < 2) throw ValidationError("kernel_example needs a positive horizon");

    auto big_f = std::make_shared<const CumulativeIntegral>([f](double t) { return f(t); });
    const double upper = 2.0 / (a + std::max(a_plus, a_minus));
    for (std::size_t i = 0; i < n_check; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(n_check - 1);
        const double value = (*big_f)(t);
        if (value < -kTolerance || value > upper + kTolerance) {
            throw DomainError("kernel_example: F(t) = " + num(value) + " at t=" + num(t) + " leaves [0, " +
                              num(upper) + "]");
        }
    }

    const double sum = a_plus + a_minus, diff = a_plus - a_minus;
    Trajectory tr([=](double t) { return 1.0 - a * (*big_f)(t); },
                  [=](double t) { return 1.0 - sum * (*big_f)(t); },
                  [=](double t) { return diff * (*big_f)(t); },
                  [=](double t) { return -a * f(t); },
                  [=](double t) { return -sum * f(t); },
                  [=](double t) { return diff * f(t); });
    RateTriple rates = rates_of(tr);
    return {std::move(tr), std::move(rates), 0.0};
}

Family make_family(const FamilySpec& spec, double horizon) {
    const FamilyInfo& info = *std::find_if(family_catalog().begin(), family_catalog().end(),
                                           [&](const FamilyInfo& i) { return i.kind == spec.kind; });
    const std::set<std::string> known(info.parameters.begin(), info.parameters.end());
    for (const auto& [name, value] : spec.params) {
        if (!known.count(name)) {
            throw ValidationError("params." + name + ": not a parameter of family " + std::string(to_string(spec.kind)));
        }
    }
    const auto p = [&](const std::string& name) {
        const auto it = spec.params.find(name);
        if (it == spec.params.end()) {
            throw ValidationError("params." + name + ": required by family " + std::string(to_string(spec.kind)));
        }
        return it->second;
    };

    switch (spec.kind) {
    case FamilyKind::semigroup: return semigroup(p("gamma_plus"), p("gamma_minus"), p("gamma_z"));
    case FamilyKind::rotated_semigroup:
        return rotated_semigroup(p("gamma_plus"), p("gamma_minus"), p("gamma_z"), p("omega"));
    case FamilyKind::nonmonotone_population: return nonmonotone_population(p("nu"), p("omega"));
    case FamilyKind::eternal_commutative: return eternal_commutative(p("a"), p("nu"));
    case FamilyKind::eternal_noncommutative: return eternal_noncommutative(p("b"), p("nu"));
    case FamilyKind::kernel_example:
        if (!spec.f) throw ValidationError("f: required by family kernel_example");
        return kernel_example(p("a"), p("a_plus"), p("a_minus"), *spec.f, horizon);
    }
    throw ValidationError("unknown family kind");
}

std::optional<PhaseCovChannel> lab_frame_channel(const Family& family, double t) {
    const PhaseCovChannel co = family.trajectory.channel_at(t);
    if (family.rotation_rate == 0.0) return co;
    const double turns = 2.0 * family.rotation_rate * t / std::numbers::pi;
    const double nearest = std::round(turns);
    if (std::abs(turns - nearest) > kTolerance) return std::nullopt;
    const double sign = std::fmod(std::abs(nearest), 2.0) == 0.0 ? 1.0 : -1.0;
    return PhaseCovChannel(sign * co.lambda(), co.lambda_z(), co.t_z());
}

} // namespace phasecov
