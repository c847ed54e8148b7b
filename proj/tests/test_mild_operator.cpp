#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mildeig/mild_operator.hpp"

using namespace mildeig;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction mode(int k, int n) {
    return GridFunction::sample(kPi, n, [&](double x) { return std::sin(k * x); });
}

NonlocalFn zero_b() {
    return [](const Trajectory& y) { return GridFunction::zeros(y.length(), y.space_size()); };
}

TimeSliceFn zero_f() {
    return [](double, const GridFunction& v) { return GridFunction::zeros(v.length(), v.size()); };
}

TimeSliceFn identity_f() {
    return [](double, const GridFunction& v) { return v; };
}

}  // namespace

TEST_CASE("apply_h: zero map, example profile, constant trajectory") {
    const int n = 63, m = 16;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    Trajectory y = Trajectory::zeros(kPi, n, m);

    Trajectory h0 = apply_h(u, zero_b(), y);
    CHECK(norm_c(h0) == 0.0);

    // B(y) = sin profile: node at t = 1 carries (1/e) sin.
    NonlocalFn b_sin = [&](const Trajectory& traj) { return mode(1, traj.space_size()); };
    Trajectory h = apply_h(u, b_sin, y);
    CHECK(norm_sup(h.node(m)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // Node 0 equals B(y) exactly.
    for (int i = 0; i < n; ++i) CHECK(h.node(0)[i] == mode(1, n)[i]);

    // Periodic-style B(y) = y(1) on a constant trajectory: node j is U(t_j)v.
    GridFunction v = mode(2, n);
    Trajectory yc = Trajectory::constant(v, m);
    NonlocalFn b_periodic = [](const Trajectory& traj) { return traj.node(traj.steps()); };
    Trajectory hp = apply_h(u, b_periodic, yc);
    for (int j = 0; j <= m; ++j) {
        GridFunction expected = u.apply(yc.time(j), v);
        GridFunction d = hp.node(j) - expected;
        CHECK(norm_sup(d) <= 1e-14);
    }
}

TEST_CASE("apply_g: zero integrand gives the zero trajectory") {
    const int n = 31, m = 8;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    Trajectory y = Trajectory::zeros(kPi, n, m);
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};
    CHECK(norm_c(apply_g(u, zero_f(), y, cfg)) == 0.0);
    CHECK(norm_sup(apply_g(u, identity_f(), y, cfg).node(0)) == 0.0);  // node 0 always zero
}

TEST_CASE("apply_g: fixed-profile integrand matches the mode-wise closed form") {
    // f(t, v) = w fixed; node j must equal the integral of U(s)w over [0, t_j]:
    // mode k coefficient w_k (1 - exp(-k^2 t_j)) / k^2.
    const int n = 63, m = 1024;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    const double coeffs[3] = {1.0, 0.4, 0.2};
    GridFunction w = GridFunction::zeros(kPi, n);
    for (int k = 1; k <= 3; ++k) w.axpy(coeffs[k - 1], mode(k, n));
    TimeSliceFn f = [&](double, const GridFunction&) { return w; };

    Trajectory y = Trajectory::zeros(kPi, n, m);
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};
    Trajectory g = apply_g(u, f, y, cfg);

    for (int j : {1, 7, 128, 512, 1024}) {
        const double t = y.time(j);
        GridFunction expected = GridFunction::zeros(kPi, n);
        for (int k = 1; k <= 3; ++k)
            expected.axpy(coeffs[k - 1] * (1.0 - std::exp(-k * k * t)) / (k * k), mode(k, n));
        GridFunction d = g.node(j) - expected;
        CHECK(norm_sup(d) <= 1e-8);
    }
}

TEST_CASE("apply_g: linear f on the constant sine trajectory") {
    const int n = 15;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    const double exact = 1.0 - std::exp(-1.0);

    std::vector<double> errors;
    for (int m : {16, 32, 64, 128}) {
        Trajectory y = Trajectory::constant(mode(1, n), m);
        MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};
        Trajectory g = apply_g(u, identity_f(), y, cfg);
        errors.push_back(std::abs(norm_sup(g.node(m)) - exact));
    }
    CHECK(errors.back() <= 1e-6);  // m = 128
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double order = std::log2(errors[i] / errors[i + 1]);
        CHECK(order >= 1.9);
    }
}

TEST_CASE("quadrature routes agree") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 31, m = 24;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);

    Trajectory y = Trajectory::zeros(kPi, n, m);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i) y.node(j)[i] = unit(rng);

    TimeSliceFn f = [](double t, const GridFunction& v) {
        GridFunction out = v;
        for (int i = 0; i < out.size(); ++i) out[i] = (1.0 + t) * v[i] * v[i];
        return out;
    };
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};
    const double delta = cross_validate_quadratures(u, f, y, cfg);
    CHECK(delta <= 1e-10 * std::max(1.0, norm_c(y)));
    if (delta > 0.0) {
        CHECK_THROWS_AS(cross_validate_quadratures(u, f, y, cfg, delta / 2),
                        QuadratureMismatch);
    }
}

TEST_CASE("duhamel weights are positive and sum to the interval length") {
    for (int j : {1, 2, 3, 4, 9, 16}) {
        double sum = 0.0;
        for (int i = 0; i <= j; ++i) {
            const double w = duhamel_weight(i, j);
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(static_cast<double>(j)).epsilon(1e-14));
    }
}

TEST_CASE("apply_t: splitting additivity and zero parts") {
    const int n = 31, m = 16;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    ConeTolerance tol;
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};

    Trajectory zero = Trajectory::zeros(kPi, n, m);
    CHECK(norm_c(apply_t(u, zero_b(), zero_f(), zero, cfg, tol)) == 0.0);

    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Trajectory y = Trajectory::zeros(kPi, n, m);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i) y.node(j)[i] = unit(rng);

    NonlocalFn b = [](const Trajectory& traj) { return traj.node(0); };
    TimeSliceFn f = [](double t, const GridFunction& v) {
        GridFunction out = v;
        for (int i = 0; i < out.size(); ++i) out[i] = t * v[i];
        return out;
    };
    Trajectory t_whole = apply_t(u, b, f, y, cfg, tol);
    Trajectory t_split = apply_h(u, b, y);
    t_split += apply_g(u, f, y, cfg);
    t_whole -= t_split;
    CHECK(norm_c(t_whole) <= 1e-14 * norm_c(t_split));
}

TEST_CASE("quadrature monotonicity in the integrand") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 21, m = 12;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    ConeTolerance tol;
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};

    for (int trial = 0; trial < 50; ++trial) {
        Trajectory y = Trajectory::zeros(kPi, n, m);
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i < n; ++i) y.node(j)[i] = unit(rng);

        const double bump = unit(rng);
        TimeSliceFn f1 = [](double, const GridFunction& v) { return v; };
        TimeSliceFn f2 = [bump](double, const GridFunction& v) {
            GridFunction out = v;
            for (int i = 0; i < out.size(); ++i) out[i] += bump;
            return out;
        };
        Trajectory g1 = apply_g(u, f1, y, cfg);
        Trajectory g2 = apply_g(u, f2, y, cfg);
        for (int j = 0; j <= m; ++j)
            CHECK(order_leq(g1.node(j), g2.node(j), tol));
    }
}

TEST_CASE("residual definition") {
    const int n = 63, m = 16;
    SemigroupHandle u = SemigroupHandle::spectral_heat(kPi, n);
    ConeTolerance tol;
    MildConfig cfg{QuadratureRoute::TrapezoidRecurrence, m};

    // B(y) = sin (the worked example's B at y = 0 where beta = 1), lambda = 1:
    // the residual at y = 0 is ||H||_C = 1, attained at t = 0.
    NonlocalFn b_sin = [&](const Trajectory& traj) { return mode(1, traj.space_size()); };
    Trajectory zero = Trajectory::zeros(kPi, n, m);
    CHECK(mild_residual(u, b_sin, zero_f(), zero, 1.0, cfg, tol) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // lambda = 0 reduces the residual to ||y||_C.
    Trajectory y = Trajectory::constant(0.7 * mode(1, n), m);
    CHECK(mild_residual(u, b_sin, zero_f(), y, 0.0, cfg, tol) ==
          doctest::Approx(0.7).epsilon(1e-12));
}
