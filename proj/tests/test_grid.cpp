#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "penning/grid.hpp"
#include "penning/stationary.hpp"

using namespace penning;

namespace {

GridSpec cube(double half, int points, Vec3 center = {}) {
    GridSpec g;
    g.center = center;
    g.half_extent = {half, half, half};
    g.points = {points, points, points};
    return g;
}

const Evaluator gaussian = [](const Vec3& r, double) {
    return Complex{std::exp(-(r.x * r.x + r.y * r.y + r.z * r.z)), 0.0};
};

}  // namespace

TEST_CASE("grid spec validation and geometry") {
    CHECK_THROWS_AS(cube(0.0, 32).validate(), std::invalid_argument);
    CHECK_THROWS_AS(cube(1.0, 8).validate(), std::invalid_argument);
    CHECK_NOTHROW(cube(1.0, 16).validate());

    const GridSpec g = cube(2.0, 17, {1.0, -1.0, 0.5});
    CHECK(g.size() == 17 * 17 * 17);
    // first node sits at center - half_extent
    const Vec3 n0 = g.node(0, 0, 0);
    CHECK(n0.x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(n0.y == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(n0.z == doctest::Approx(-1.5).epsilon(1e-15));
    // last node at center + half_extent (endpoints included)
    const Vec3 n1 = g.node(16, 16, 16);
    CHECK(n1.x == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("sampling: indexing contract, constants, determinism") {
    const GridSpec g = cube(1.5, 20);
    const GridField f = sample([](const Vec3& r, double) { return Complex{r.z, r.x}; }, g, 0.0);
    // z fastest: consecutive values step in z
    CHECK(f.at(0, 0, 1).real() == doctest::Approx(g.node(0, 0, 1).z).epsilon(1e-15));
    CHECK(f.at(3, 5, 7) == f.values[(3 * 20 + 5) * 20 + 7]);
    CHECK(f.at(0, 0, 0).real() == doctest::Approx(-1.5).epsilon(1e-15));

    const GridField c = sample([](const Vec3&, double) { return Complex{4.2, -1.0}; }, g, 0.0);
    for (const Complex& v : c.values) CHECK(v == Complex{4.2, -1.0});

    const GridField again = sample([](const Vec3& r, double) { return Complex{r.z, r.x}; }, g, 0.0);
    CHECK(std::equal(f.values.begin(), f.values.end(), again.values.begin()));
}

TEST_CASE("thread count does not change the reduction") {
    const GridSpec g = cube(4.0, 48);
    setenv("PENNING_THREADS", "1", 1);
    const GridField f1 = sample(gaussian, g, 0.0);
    const Complex v1 = integrate(f1).value;
    setenv("PENNING_THREADS", "2", 1);
    const GridField f2 = sample(gaussian, g, 0.0);
    const Complex v2 = integrate(f2).value;
    unsetenv("PENNING_THREADS");
    CHECK(std::equal(f1.values.begin(), f1.values.end(), f2.values.begin()));
    CHECK(v1.real() == v2.real());
    CHECK(v1.imag() == v2.imag());
}

TEST_CASE("3d gaussian integrates to pi^(3/2)") {
    const GridField f = sample(gaussian, cube(8.0, 96), 0.0);
    const IntegralResult res = integrate(f);
    CHECK(res.boundary_ok);
    CHECK(res.value.real() == doctest::Approx(std::pow(M_PI, 1.5)).epsilon(1e-8));
    CHECK(res.value.imag() == 0.0);
}

TEST_CASE("odd integrand over a symmetric box vanishes") {
    const GridField f = sample(
        [](const Vec3& r, double) {
            return Complex{r.x * std::exp(-(r.x * r.x + r.y * r.y + r.z * r.z)), 0.0};
        },
        cube(8.0, 96), 0.0);
    CHECK(std::abs(integrate(f).value.real()) < 1e-12);
}

TEST_CASE("weighted integration matches direct sampling of the product") {
    const GridSpec g = cube(6.0, 40);
    const GridField f = sample(gaussian, g, 0.0);
    const double weighted = integrate(f, [](const Vec3& r) { return r.x * r.x; }).value.real();
    const GridField direct = sample(
        [](const Vec3& r, double) {
            return Complex{r.x * r.x * std::exp(-(r.x * r.x + r.y * r.y + r.z * r.z)), 0.0};
        },
        g, 0.0);
    CHECK(weighted == doctest::Approx(integrate(direct).value.real()).epsilon(1e-14));
}

TEST_CASE("trapezoid converges at second order on a truncated gaussian") {
    // box cut at one sigma so the boundary derivatives dominate the error
    const double exact = std::pow(std::sqrt(M_PI) * std::erf(1.0), 3);
    auto error_at = [&](int points) {
        return std::abs(integrate(sample(gaussian, cube(1.0, points), 0.0)).value.real() - exact);
    };
    const double e16 = error_at(16), e32 = error_at(32), e64 = error_at(64);
    CHECK(std::log2(e16 / e32) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(e32 / e64) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("boundary-decay guard fires on undersized grids") {
    TrapParameters params;
    params.B = 2.0;
    params.D = 0.5;
    const DerivedFrequencies f = derive_frequencies(params);
    const StationaryState state({1, 1, 0}, params);
    const Evaluator density = [&state](const Vec3& r, double) {
        return Complex{state.density_current(r).rho, 0.0};
    };
    const double a = length_perp(params, f);

    const IntegralResult undersized = integrate(sample(density, cube(2.0 * a, 48), 0.0));
    CHECK_FALSE(undersized.boundary_ok);
    CHECK(undersized.boundary_ratio > 1e-12);

    const GridSpec good = auto_grid(state.qn(), params, f, Vec3{});
    const IntegralResult sized = integrate(sample(density, good, 0.0));
    CHECK(sized.boundary_ok);
    CHECK(sized.value.real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("auto grid covers the packet and recenters on request") {
    TrapParameters params;
    params.B = 2.0;
    params.D = 0.5;
    const DerivedFrequencies f = derive_frequencies(params);
    const double ap = length_perp(params, f), az = length_z(params, f);

    const GridSpec ground = auto_grid({0, 0, 0}, params, f, Vec3{});
    CHECK(ground.half_extent.x == doctest::Approx(8.0 * ap).epsilon(1e-15));
    CHECK(ground.half_extent.z == doctest::Approx(8.0 * az).epsilon(1e-15));
    CHECK(ground.points[0] == 96);

    const Vec3 off{1.0, -2.0, 0.5};
    const GridSpec moved = auto_grid({0, 0, 0}, params, f, off);
    CHECK(moved.center.x == off.x);
    CHECK(moved.center.y == off.y);
    CHECK(moved.center.z == off.z);

    // larger states get more points to hold the node spacing
    const GridSpec big = auto_grid({3, 3, 3}, params, f, Vec3{});
    CHECK(big.points[0] > 96);
    CHECK(big.half_extent.x == doctest::Approx(8.0 * std::sqrt(10.0) * ap).epsilon(1e-15));

    // absurd quantum numbers fail loudly instead of exhausting memory
    CHECK_THROWS_AS(auto_grid({40, 40, 40}, params, f, Vec3{}), std::invalid_argument);
}

TEST_CASE("overlap of a field with itself is the squared norm") {
    const GridSpec g = cube(8.0, 64);
    const GridField f = sample(
        [](const Vec3& r, double) {
            return Complex{std::exp(-0.5 * (r.x * r.x + r.y * r.y + r.z * r.z)), 0.0}
                 * std::polar(1.0, 0.3 * r.x);
        },
        g, 0.0);
    GridField density{g, f.values};
    for (auto& v : density.values) v = std::norm(v);
    CHECK(overlap(f, f).value.real()
          == doctest::Approx(integrate(density).value.real()).epsilon(1e-13));
    CHECK(std::abs(overlap(f, f).value.imag()) < 1e-16);
}
