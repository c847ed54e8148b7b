#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mildeig/lattice.hpp"

using namespace mildeig;

namespace {

GridFunction sine_profile(int n, double length = std::numbers::pi) {
    return GridFunction::sample(length, n,
                                [&](double x) { return std::sin(std::numbers::pi * x / length); });
}

GridFunction random_profile(int n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    GridFunction v = GridFunction::zeros(std::numbers::pi, n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("norm_sup basics") {
    CHECK(norm_sup(GridFunction::zeros(std::numbers::pi, 17)) == 0.0);

    // n odd puts a grid point at pi/2, so the sampled sine attains 1 exactly.
    GridFunction s = sine_profile(63);
    CHECK(norm_sup(s) == doctest::Approx(1.0).epsilon(1e-15));

    GridFunction scaled = (1.0 / std::numbers::e) * s;
    CHECK(norm_sup(scaled) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
}

TEST_CASE("norm_c basics") {
    const int n = 31, m = 16;
    CHECK(norm_c(Trajectory::zeros(std::numbers::pi, n, m)) == 0.0);

    GridFunction s = sine_profile(n);
    Trajectory ramp = Trajectory::zeros(std::numbers::pi, n, m);
    for (int j = 0; j <= m; ++j) ramp.node(j) = ramp.time(j) * s;
    CHECK(norm_c(ramp) == doctest::Approx(1.0).epsilon(1e-15));

    Trajectory quarter = Trajectory::constant(0.25 * s, m);
    CHECK(norm_c(quarter) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("is_in_cone classification") {
    ConeTolerance tol;
    GridFunction v = GridFunction::zeros(1.0, 4);

    v[1] = 2.0;
    CHECK(is_in_cone(v, tol).status == ConeStatus::Inside);

    v[2] = -1e-12;
    ConeCheck clamped = is_in_cone(v, tol);
    CHECK(clamped.status == ConeStatus::ClampedInside);
    CHECK(clamped.violation == doctest::Approx(1e-12));

    v[2] = -0.5;
    ConeCheck outside = is_in_cone(v, tol);
    CHECK(outside.status == ConeStatus::Outside);
    CHECK(outside.violation == doctest::Approx(0.5));

    // Between clamp_eps and violation_eps still reports ClampedInside.
    v[2] = -1e-9;
    CHECK(is_in_cone(v, tol).status == ConeStatus::ClampedInside);
}

TEST_CASE("clamp_to_cone") {
    ConeTolerance tol;
    GridFunction v = GridFunction::zeros(1.0, 3);
    v[0] = 0.3;
    CHECK(clamp_to_cone(v, tol)[0] == 0.3);

    v[1] = -1e-12;
    GridFunction repaired = clamp_to_cone(v, tol);
    CHECK(repaired[1] == 0.0);
    CHECK(repaired[0] == 0.3);

    v[1] = -0.5;
    CHECK_THROWS_AS(clamp_to_cone(v, tol), ConeViolation);
}

TEST_CASE("order_leq") {
    ConeTolerance tol;
    GridFunction zero = GridFunction::zeros(1.0, 5);
    GridFunction v = zero;
    for (int i = 0; i < 5; ++i) v[i] = 0.1 * (i + 1);

    CHECK(order_leq(zero, v, tol));
    CHECK(order_leq(v, v, tol));

    GridFunction w = v;
    w[3] -= 0.1;  // v exceeds w by 0.1 at one entry
    CHECK_FALSE(order_leq(v, w, tol));

    GridFunction other_size = GridFunction::zeros(1.0, 4);
    CHECK_THROWS_AS(order_leq(v, other_size, tol), DimensionMismatch);
}

TEST_CASE("cone axioms on random data") {
    std::mt19937_64 rng(91);
    ConeTolerance tol;
    for (int trial = 0; trial < 200; ++trial) {
        GridFunction u = random_profile(17, rng, 0.0, 1.0);
        GridFunction v = random_profile(17, rng, 0.0, 1.0);
        const double a = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        CHECK(is_in_cone(u + v, tol).status == ConeStatus::Inside);       // (C1)
        CHECK(is_in_cone(a * u, tol).status == ConeStatus::Inside);      // (C2)
    }
    // (C3): u and -u both inside forces u = 0.
    GridFunction u = GridFunction::zeros(1.0, 9);
    GridFunction neg = -1.0 * u;
    REQUIRE(is_in_cone(u, tol).status == ConeStatus::Inside);
    REQUIRE(is_in_cone(neg, tol).status == ConeStatus::Inside);
    for (int i = 0; i < u.size(); ++i) CHECK(u[i] == 0.0);
}

TEST_CASE("normality with constant 1: entrywise order implies norm order") {
    std::mt19937_64 rng(92);
    ConeTolerance tol;
    for (int trial = 0; trial < 200; ++trial) {
        GridFunction u = random_profile(23, rng, 0.0, 1.0);
        GridFunction v = u;
        for (int i = 0; i < v.size(); ++i)
            v[i] += std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        REQUIRE(order_leq(u, v, tol));
        CHECK(norm_sup(u) <= norm_sup(v));
    }
}

TEST_CASE("order_leq is a partial order at zero tolerance") {
    std::mt19937_64 rng(93);
    ConeTolerance exact{0.0, 0.0};
    for (int trial = 0; trial < 200; ++trial) {
        GridFunction a = random_profile(11, rng, -1.0, 1.0);
        GridFunction b = random_profile(11, rng, -1.0, 1.0);
        GridFunction c = random_profile(11, rng, -1.0, 1.0);

        CHECK(order_leq(a, a, exact));  // reflexive

        if (order_leq(a, b, exact) && order_leq(b, a, exact)) {  // antisymmetric
            for (int i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        }
        if (order_leq(a, b, exact) && order_leq(b, c, exact)) {  // transitive
            CHECK(order_leq(a, c, exact));
        }
    }
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(GridFunction(0.0, {1.0}), Error);
    CHECK_THROWS_AS(GridFunction(1.0, {}), Error);
    CHECK_THROWS_AS(GridFunction(1.0, {std::nan("")}), Error);
    CHECK_THROWS_AS(Trajectory::zeros(1.0, 3, 0), Error);

    GridFunction a = GridFunction::zeros(1.0, 3);
    GridFunction b = GridFunction::zeros(2.0, 3);
    CHECK_THROWS_AS(a += b, DimensionMismatch);
}

TEST_CASE("grid placement") {
    GridFunction v = GridFunction::zeros(std::numbers::pi, 63);
    CHECK(v.x(31) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(v.x(0) == doctest::Approx(std::numbers::pi / 64).epsilon(1e-15));
}
