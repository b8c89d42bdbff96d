#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "phasecov/families.hpp"
#include "phasecov/error.hpp"

using namespace phasecov;
using doctest::Approx;

namespace {

double commutative_gamma_z(double a, double nu, double t) {
    return -nu * (1 - a * a) * std::sinh(2 * nu * t) / (2 * (1 + a * a + (1 - a * a) * std::cosh(2 * nu * t)));
}

double noncommutative_gamma_z(double b, double nu, double t) {
    const double ch = std::cosh(nu * t), sh = std::sinh(nu * t);
    return -nu * (1 - std::exp(-2 * nu * t)) * (std::exp(3 * nu * t) * ch - b * b) /
           (4 * (std::exp(2 * nu * t) * ch * ch - b * b * sh * sh));
}

std::vector<Family> sample_families() {
    return {semigroup(2, 1, 0.25),
            semigroup(0, 0, 0.3),
            rotated_semigroup(0.4, 0.1, 0.2, 1.5),
            nonmonotone_population(1, 2),
            nonmonotone_population(0.3, 5),
            eternal_commutative(0.5, 1),
            eternal_commutative(-0.9, 0.4),
            eternal_noncommutative(1, 1),
            eternal_noncommutative(-0.5, 2),
            kernel_example(1, 0.5, 0.5, NamedFunction::exp_decay(1, 1)),
            kernel_example(1, 0.6, 0.4, NamedFunction::exp_decay(1, 1))};
}

} // namespace

TEST_CASE("family catalog and names") {
    CHECK(family_catalog().size() == 6);
    for (const auto& info : family_catalog()) CHECK(family_kind_from_string(to_string(info.kind)) == info.kind);
    CHECK_THROWS_AS(family_kind_from_string("lindblad"), ValidationError);
}

TEST_CASE("families are self-consistent and CP") {
    for (const Family& fam : sample_families()) {
        for (int i = 0; i <= 40; ++i) {
            const double t = 0.25 * i;
            if (t <= 5.0) {  // later the fastest semigroup is numerically singular
                const RateValues got = rates_from_trajectory(fam.trajectory, t), want = fam.rates.at(t);
                CHECK(std::abs(got.gamma_plus - want.gamma_plus) < 1e-8);
                CHECK(std::abs(got.gamma_minus - want.gamma_minus) < 1e-8);
                CHECK(std::abs(got.gamma_z - want.gamma_z) < 1e-8);
            }
            const TrajectoryPoint p = fam.trajectory.at(t);
            CHECK(is_cp(fam.trajectory.channel_at(t)).satisfied());
            CHECK(oracle::choi_min_eigenvalue(p.lambda, p.lambda_z, p.t_z) > -1e-9);
        }
    }
}

TEST_CASE("semigroup") {
    const Family f = semigroup(2, 1, 0.25);
    const TrajectoryPoint p = f.trajectory.at(1.0);
    CHECK(p.lambda == Approx(0.135335).epsilon(1e-5));
    CHECK(p.lambda_z == Approx(0.049787).epsilon(1e-5));
    CHECK(p.t_z == Approx(0.316738).epsilon(1e-5));
    const TrajectoryPoint far = f.trajectory.at(60.0);
    CHECK(std::abs(far.t_z - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(far.lambda) < 1e-12);

    const TrajectoryPoint deph = semigroup(0, 0, 0.3).trajectory.at(2.0);
    CHECK(deph.lambda == Approx(std::exp(-1.2)));
    CHECK(deph.lambda_z == 1.0);
    CHECK(deph.t_z == 0.0);

    CHECK_THROWS_AS(semigroup(-1, 1, 1), DomainError);
    CHECK_THROWS_AS(semigroup(1, 1, -0.1), DomainError);
}

TEST_CASE("nonmonotone population family") {
    const Family f = nonmonotone_population(1, 2);
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.05 * i;
        const RateValues r = f.rates.at(t);
        CHECK(r.gamma_plus >= 0);
        CHECK(r.gamma_minus >= 0);
        CHECK(r.gamma_z == 0.0);
        CHECK(f.trajectory.at(t).t_z == Approx(2 / std::sqrt(8.0) * std::sin(2 * t)));
    }
    const Family fast = nonmonotone_population(0.01, 10);
    double hi = -1;
    for (int i = 0; i <= 1000; ++i) hi = std::max(hi, fast.trajectory.at(0.001 * i).t_z);
    CHECK(hi == Approx(0.002).epsilon(1e-3));
    CHECK_THROWS_AS(nonmonotone_population(0, 1), DomainError);
    CHECK_THROWS_AS(nonmonotone_population(1, -1), DomainError);
}

TEST_CASE("eternal commutative family") {
    for (double a : {0.25, 0.5, 0.9, -0.5}) {
        const Family f = eternal_commutative(a, 1);
        for (int i = 1; i <= 50; ++i) {
            const double t = 0.1 * i;
            const RateValues r = rates_from_trajectory(f.trajectory, t);
            CHECK(std::abs(r.gamma_plus - (1 + a)) < 1e-10);
            CHECK(std::abs(r.gamma_minus - (1 - a)) < 1e-10);
            CHECK(std::abs(r.gamma_z - commutative_gamma_z(a, 1, t)) < 1e-10);
            CHECK(r.gamma_z < 0);
            const TrajectoryPoint p = f.trajectory.at(t);
            CHECK(std::abs(4 * p.lambda * p.lambda + p.t_z * p.t_z - (1 + p.lambda_z) * (1 + p.lambda_z)) < 1e-9);
        }
    }
    SUBCASE("a = 0 is the unital case") {
        const Family f = eternal_commutative(0, 0.7);
        for (double t : {0.1, 1.0, 3.0}) {
            CHECK(f.rates.at(t).gamma_z == Approx(-0.35 * std::tanh(0.7 * t)));
            CHECK(f.trajectory.at(t).t_z == 0.0);
        }
    }
    SUBCASE("CP at sample times") {
        const Family f = eternal_commutative(0.5, 1);
        for (double t : {0.1, 1.0, 10.0}) CHECK(is_cp(f.trajectory.channel_at(t)).satisfied());
    }
    SUBCASE("commutes with itself") {
        const Family f = eternal_commutative(0.5, 1);
        for (double s : {0.2, 0.9}) {
            for (double t : {0.5, 2.0}) {
                const PhaseCovChannel st = compose(f.trajectory.channel_at(s), f.trajectory.channel_at(t));
                const PhaseCovChannel ts = compose(f.trajectory.channel_at(t), f.trajectory.channel_at(s));
                CHECK(std::abs(st.t_z() - ts.t_z()) < 1e-12);
            }
        }
    }
    SUBCASE("intermediate maps are never CP") {
        const Family f = eternal_commutative(0.5, 1);
        CHECK(is_cp(intermediate_map(f.trajectory, 0.1, 0.2)).fails());
        const PhaseCovChannel m = intermediate_map(f.trajectory, 0.1, 0.2);
        CHECK(oracle::choi_min_eigenvalue(m.lambda(), m.lambda_z(), m.t_z()) < 0);
        for (int i = 1; i <= 10; ++i)
            for (int j = i + 1; j <= 10; ++j) CHECK(is_cp(intermediate_map(f.trajectory, 0.5 * i, 0.5 * j)).fails());
    }
    CHECK_THROWS_AS(eternal_commutative(1.0, 1), DomainError);
    CHECK_THROWS_AS(eternal_commutative(0.5, 0), DomainError);
}

TEST_CASE("eternal non-commutative family") {
    for (double b : {0.25, 0.5, 1.0, -1.0}) {
        const Family f = eternal_noncommutative(b, 1);
        for (int i = 1; i <= 50; ++i) {
            const double t = 0.1 * i;
            const RateValues r = rates_from_trajectory(f.trajectory, t);
            const double swing = b * std::exp(-2 * t) * std::cosh(t);
            CHECK(std::abs(r.gamma_plus - (1 + swing)) < 1e-10);
            CHECK(std::abs(r.gamma_minus - (1 - swing)) < 1e-10);
            CHECK(std::abs(r.gamma_z - noncommutative_gamma_z(b, 1, t)) < 1e-10);
            CHECK(r.gamma_z < 0);
            const TrajectoryPoint p = f.trajectory.at(t);
            CHECK(std::abs(4 * p.lambda * p.lambda + p.t_z * p.t_z - (1 + p.lambda_z) * (1 + p.lambda_z)) < 1e-9);
        }
    }
    SUBCASE("non-commutativity witness") {
        const Family f = eternal_noncommutative(0.5, 1);
        const TrajectoryPoint p1 = f.trajectory.at(1.0), p2 = f.trajectory.at(2.0);
        const double witness = p2.t_z * (1 - p1.lambda_z) - p1.t_z * (1 - p2.lambda_z);
        CHECK(std::abs(witness) > 1e-3);
        const PhaseCovChannel st = compose(f.trajectory.channel_at(1.0), f.trajectory.channel_at(2.0));
        const PhaseCovChannel ts = compose(f.trajectory.channel_at(2.0), f.trajectory.channel_at(1.0));
        CHECK(std::abs(st.t_z() - ts.t_z()) == Approx(std::abs(witness)));
    }
    SUBCASE("small b approaches the unital case") {
        const Family f = eternal_noncommutative(1e-9, 1), g = eternal_commutative(0, 1);
        for (double t : {0.3, 2.0}) {
            CHECK(std::abs(f.rates.at(t).gamma_z - g.rates.at(t).gamma_z) < 1e-8);
            CHECK(std::abs(f.trajectory.at(t).lambda - g.trajectory.at(t).lambda) < 1e-8);
        }
    }
    SUBCASE("intermediate maps are never CP") {
        const Family f = eternal_noncommutative(1, 1);
        for (int i = 1; i <= 10; ++i)
            for (int j = i + 1; j <= 10; ++j) CHECK(is_cp(intermediate_map(f.trajectory, 0.5 * i, 0.5 * j)).fails());
    }
    CHECK_NOTHROW(eternal_noncommutative(-1.0, 1));
    CHECK_THROWS_AS(eternal_noncommutative(0.0, 1), DomainError);
    CHECK_THROWS_AS(eternal_noncommutative(1.1, 1), DomainError);
}

TEST_CASE("kernel example family") {
    SUBCASE("reduces to a semigroup") {
        const Family f = kernel_example(1, 0.5, 0.5, NamedFunction::exp_decay(1, 1));
        const Family g = semigroup(0.5, 0.5, 0.25);
        for (int i = 0; i <= 20; ++i) {
            const double t = 0.5 * i;
            const TrajectoryPoint p = f.trajectory.at(t), q = g.trajectory.at(t);
            CHECK(std::abs(p.lambda - q.lambda) < 1e-10);
            CHECK(std::abs(p.lambda_z - q.lambda_z) < 1e-10);
            CHECK(std::abs(p.t_z) < 1e-12);
        }
    }
    SUBCASE("asymmetric example stays in the polyhedron") {
        const Family f = kernel_example(1, 0.6, 0.4, NamedFunction::exp_decay(1, 1));
        for (int i = 0; i <= 100; ++i) CHECK(in_polyhedron(f.trajectory.channel_at(0.1 * i)).satisfied());
        CHECK(f.trajectory.at(2.0).t_z == Approx(0.2 * (1 - std::exp(-2.0))));
    }
    SUBCASE("sign-changing f gives negative dephasing") {
        const NamedFunction f = NamedFunction::exp_decay(2, 2) + NamedFunction::exp_decay(-1, 1);
        const Family fam = kernel_example(1, 0.5, 0.5, f);
        bool negative = false;
        for (int i = 1; i <= 100; ++i) negative |= fam.rates.at(0.1 * i).gamma_z < 0;
        CHECK(negative);
    }
    CHECK_THROWS_AS(kernel_example(1, 0.5, 0.5, NamedFunction::exp_decay(-0.1, 1)), DomainError);
    CHECK_THROWS_AS(kernel_example(1, 0.5, 0.5, NamedFunction::constant(1)), DomainError);
    CHECK_THROWS_AS(kernel_example(0.4, 0.5, 0.5, NamedFunction::exp_decay(1, 1)), DomainError);
    CHECK_THROWS_AS(kernel_example(1, 0, 0.5, NamedFunction::exp_decay(1, 1)), DomainError);
}

TEST_CASE("make_family") {
    FamilySpec spec{FamilyKind::eternal_commutative, {{"a", 0.5}, {"nu", 1}}, std::nullopt};
    CHECK(make_family(spec).rates.at(0).gamma_plus == 1.5);
    spec.params["mu"] = 1;
    CHECK_THROWS_WITH_AS(make_family(spec), doctest::Contains("params.mu"), ValidationError);
    spec.params = {{"a", 0.5}};
    CHECK_THROWS_WITH_AS(make_family(spec), doctest::Contains("params.nu"), ValidationError);
    CHECK_THROWS_AS(make_family({FamilyKind::kernel_example, {{"a", 1}, {"a_plus", 0.5}, {"a_minus", 0.5}}, {}}),
                    ValidationError);
    CHECK_THROWS_AS(make_family({FamilyKind::semigroup, {{"gamma_plus", -1}, {"gamma_minus", 0}, {"gamma_z", 0}}, {}}),
                    DomainError);
}

TEST_CASE("lab frame channel") {
    const Family plain = semigroup(1, 0.5, 0.1);
    REQUIRE(lab_frame_channel(plain, 0.7).has_value());
    CHECK(*lab_frame_channel(plain, 0.7) == plain.trajectory.channel_at(0.7));

    const double omega = 2.0;
    const Family rot = rotated_semigroup(1, 0.5, 0.1, omega);
    const double quarter = std::numbers::pi / (2 * omega);  // 2ωt = π
    const auto flipped = lab_frame_channel(rot, quarter);
    REQUIRE(flipped.has_value());
    CHECK(flipped->lambda() == Approx(-rot.trajectory.at(quarter).lambda));
    const auto back = lab_frame_channel(rot, 2 * quarter);
    REQUIRE(back.has_value());
    CHECK(back->lambda() == Approx(rot.trajectory.at(2 * quarter).lambda));
    CHECK_FALSE(lab_frame_channel(rot, 0.3).has_value());
    // The co-rotating rates are those of the underlying semigroup.
    CHECK(rot.rates.at(1.0).gamma_z == 0.1);
}
