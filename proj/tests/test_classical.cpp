#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "penning/classical.hpp"

using namespace penning;

namespace {

TrapParameters reference_trap() {
    TrapParameters p;
    p.mass = 1.0;
    p.charge = 1.0;
    p.B = 2.0;
    p.D = 0.5;
    p.hbar = 1.0;
    return p;
}

PhaseSpacePoint random_state(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

double max_diff(const PhaseSpacePoint& a, const PhaseSpacePoint& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z),
                     std::abs(a.px - b.px), std::abs(a.py - b.py), std::abs(a.pz - b.pz)});
}

}  // namespace

TEST_CASE("trajectory at t = 0 returns the initial state") {
    const PhaseSpacePoint s0{0.3, -0.7, 1.1, 0.2, -0.5, 0.9};
    const Trajectory traj(reference_trap(), s0);
    CHECK(max_diff(traj.at(0.0), s0) == 0.0);
}

TEST_CASE("momentum-kick initial conditions follow the rotated-sine pattern") {
    const TrapParameters params = reference_trap();
    const double p = 0.8, q = -1.3;
    const Trajectory traj(params, {0, 0, 0, p, 0, q});
    const DerivedFrequencies f = traj.freqs();
    const double lp = p / (params.mass * f.omega_perp);
    const double lz = q / (params.mass * f.omega_z);

    for (double t : {0.37, 1.9, 5.21, 12.0}) {
        const PhaseSpacePoint s = traj.at(t);
        const double ch = std::cos(0.5 * f.omega_c * t), sh = std::sin(0.5 * f.omega_c * t);
        const double sp = std::sin(f.omega_perp * t);
        CHECK(s.x == doctest::Approx(lp * ch * sp).epsilon(1e-13));
        CHECK(s.y == doctest::Approx(-lp * sh * sp).epsilon(1e-13));
        CHECK(s.z == doctest::Approx(lz * std::sin(f.omega_z * t)).epsilon(1e-13));
    }
}

TEST_CASE("canonical right-hand side at simple states") {
    const TrapParameters params = reference_trap();
    const DerivedFrequencies f = derive_frequencies(params);

    const PhaseSpacePoint at_rest{};
    const PhaseSpacePoint d0 = canonical_rhs(at_rest, params, f);
    CHECK(max_diff(d0, PhaseSpacePoint{}) == 0.0);

    const PhaseSpacePoint unit_x{1, 0, 0, 0, 0, 0};
    const PhaseSpacePoint d1 = canonical_rhs(unit_x, params, f);
    CHECK(d1.x == 0.0);
    CHECK(d1.y == doctest::Approx(-0.5 * f.omega_c).epsilon(1e-15));
    CHECK(d1.px == doctest::Approx(-params.mass * f.omega_perp * f.omega_perp).epsilon(1e-15));
    CHECK(d1.py == 0.0);
    CHECK(d1.z == 0.0);
    CHECK(d1.pz == 0.0);
}

TEST_CASE("closed form satisfies the canonical equations (central differences)") {
    const TrapParameters params = reference_trap();
    const DerivedFrequencies f = derive_frequencies(params);
    std::mt19937_64 rng(3);
    const Trajectory traj(params, random_state(rng));
    const double h = 1e-5;
    std::uniform_real_distribution<double> ut(0.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double t = ut(rng);
        const PhaseSpacePoint rhs = canonical_rhs(traj.at(t), params, f);
        const PhaseSpacePoint sp = traj.at(t + h), sm = traj.at(t - h);
        const PhaseSpacePoint fd{(sp.x - sm.x) / (2 * h), (sp.y - sm.y) / (2 * h),
                                 (sp.z - sm.z) / (2 * h), (sp.px - sm.px) / (2 * h),
                                 (sp.py - sm.py) / (2 * h), (sp.pz - sm.pz) / (2 * h)};
        CHECK(max_diff(fd, rhs) < 1e-6);
    }
}

TEST_CASE("rk4 oracle") {
    const TrapParameters params = reference_trap();
    std::mt19937_64 rng(5);
    const PhaseSpacePoint s0 = random_state(rng);

    SUBCASE("t_final = 0 returns the initial state") {
        CHECK(max_diff(integrate_rk4(s0, params, 0.0, 1e-3), s0) == 0.0);
    }

    SUBCASE("agrees with the closed form at t = 10") {
        const Trajectory traj(params, s0);
        CHECK(max_diff(integrate_rk4(s0, params, 10.0, 1e-4), traj.at(10.0)) < 1e-8);
    }

    SUBCASE("halving dt reduces the error about 16x") {
        const Trajectory traj(params, s0);
        const PhaseSpacePoint exact = traj.at(5.0);
        const double e1 = max_diff(integrate_rk4(s0, params, 5.0, 0.02), exact);
        const double e2 = max_diff(integrate_rk4(s0, params, 5.0, 0.01), exact);
        CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
    }

    SUBCASE("rejects unstable or nonpositive steps") {
        CHECK_THROWS_AS(integrate_rk4(s0, params, 1.0, 0.06), std::invalid_argument);
        CHECK_THROWS_AS(integrate_rk4(s0, params, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(integrate_rk4(s0, params, 1.0, -0.01), std::invalid_argument);
    }

    SUBCASE("integrates backward in time") {
        const Trajectory traj(params, s0);
        CHECK(max_diff(integrate_rk4(s0, params, -3.0, 1e-3), traj.at(-3.0)) < 1e-8);
    }
}

TEST_CASE("hamiltonian value") {
    const TrapParameters params = reference_trap();
    const DerivedFrequencies f = derive_frequencies(params);

    CHECK(hamiltonian_value(PhaseSpacePoint{}, params, f) == 0.0);

    const PhaseSpacePoint kinetic{0, 0, 0, 0.8, 0, -1.3};
    CHECK(hamiltonian_value(kinetic, params, f)
          == doctest::Approx((0.64 + 1.69) / 2.0).epsilon(1e-15));
}

TEST_CASE("H and Q are constant along the closed form over 100 periods") {
    const TrapParameters params = reference_trap();
    const DerivedFrequencies f = derive_frequencies(params);
    std::mt19937_64 rng(9);
    const PhaseSpacePoint s0 = random_state(rng);
    const Trajectory traj(params, s0);
    const double h0 = hamiltonian_value(s0, params, f);
    const double q0 = quadratic_form_q(s0, params, f);
    const double t_max = 100.0 * 2.0 * M_PI / std::min(f.omega_perp, f.omega_z);
    for (int i = 1; i <= 100; ++i) {
        const PhaseSpacePoint s = traj.at(t_max * i / 100.0);
        CHECK(hamiltonian_value(s, params, f) == doctest::Approx(h0).epsilon(1e-12));
        CHECK(quadratic_form_q(s, params, f) == doctest::Approx(q0).epsilon(1e-12));
    }
}

TEST_CASE("quadratic form Q") {
    // trap tuned so omega_perp = 1: B^2/4 - D = 1 with m = e = 1
    TrapParameters params;
    params.mass = 1.0;
    params.charge = 1.0;
    params.B = 2.5;
    params.D = 0.5625;
    const DerivedFrequencies f = derive_frequencies(params);
    REQUIRE(f.omega_perp == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(quadratic_form_q(PhaseSpacePoint{}, params, f) == 0.0);
    CHECK(quadratic_form_q(PhaseSpacePoint{1, 0, 0, 0, 0, 0}, params, f)
          == doctest::Approx(0.5).epsilon(1e-15));

    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const PhaseSpacePoint s = random_state(rng);
        if (max_diff(s, PhaseSpacePoint{}) > 0.0)
            CHECK(quadratic_form_q(s, params, f) > 0.0);
    }
}

TEST_CASE("trajectories superpose and compose in time") {
    const TrapParameters params = reference_trap();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uc(-2.0, 2.0), ut(0.0, 10.0);
    for (int i = 0; i < 30; ++i) {
        const PhaseSpacePoint s1 = random_state(rng), s2 = random_state(rng);
        const double a = uc(rng), b = uc(rng), t = ut(rng);
        const PhaseSpacePoint mixed{a * s1.x + b * s2.x, a * s1.y + b * s2.y,
                                    a * s1.z + b * s2.z, a * s1.px + b * s2.px,
                                    a * s1.py + b * s2.py, a * s1.pz + b * s2.pz};
        const PhaseSpacePoint e1 = Trajectory(params, s1).at(t);
        const PhaseSpacePoint e2 = Trajectory(params, s2).at(t);
        const PhaseSpacePoint expect{a * e1.x + b * e2.x, a * e1.y + b * e2.y,
                                     a * e1.z + b * e2.z, a * e1.px + b * e2.px,
                                     a * e1.py + b * e2.py, a * e1.pz + b * e2.pz};
        CHECK(max_diff(Trajectory(params, mixed).at(t), expect) < 1e-12);

        const double t1 = ut(rng), t2 = ut(rng);
        const PhaseSpacePoint s0 = random_state(rng);
        const PhaseSpacePoint leg = Trajectory(params, Trajectory(params, s0).at(t1)).at(t2);
        CHECK(max_diff(leg, Trajectory(params, s0).at(t1 + t2)) < 1e-12);
    }
}

TEST_CASE("classical velocity includes the omega_c/2 sweep") {
    const TrapParameters params = reference_trap();
    const DerivedFrequencies f = derive_frequencies(params);
    const PhaseSpacePoint s{0.4, -0.9, 0.0, 0.3, 0.1, 0.7};
    const Vec3 v = classical_velocity(s, params, f);
    CHECK(v.x == doctest::Approx(s.px / params.mass + 0.5 * f.omega_c * s.y).epsilon(1e-15));
    CHECK(v.y == doctest::Approx(s.py / params.mass - 0.5 * f.omega_c * s.x).epsilon(1e-15));
    CHECK(v.z == doctest::Approx(s.pz / params.mass).epsilon(1e-15));
}
