#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"

#include "asymcom/singular.hpp"

using namespace asymcom;
using namespace testutil;

TEST_CASE("riccati: arctan-type F0 along the positive ray") {
    auto ode = make_riccati(2);
    auto s = build_singular(ode, cplx(1.0), 2);
    CHECK(s.m0 == 2);
    CHECK(s.q == 0);
    FContinuation fc(s.series);
    fc.move_to(cplx(0.0));
    // F0(y) = pi/2 - arctan(y), so F0(0) = pi/2 (x_sing = x0 + F0(y0))
    CHECK(std::abs(fc.state().F[0] - cplx(PI / 2)) < 1e-8);
    CHECK(std::abs(fc.state().F[1]) < 1e-12);
    CHECK(std::abs(fc.state().F[2]) < 1e-12);
}

TEST_CASE("riccati singularity locations are exact") {
    auto ode = make_riccati(2);
    auto s = build_singular(ode, cplx(1.0), 2);
    auto r1 = locate_singularity(s, cplx(0.0), cplx(0.0));
    CHECK(std::abs(r1.x_sing - cplx(PI / 2)) < 1e-8);
    auto r2 = locate_singularity(s, cplx(1.0), cplx(1.0));
    CHECK(std::abs(r2.x_sing - cplx(1.0 + PI / 4)) < 1e-8);
    r2 = verify_singularity(ode, r2);
    CHECK(r2.shot);
    CHECK(r2.verified);
    CHECK(std::abs(r2.x_blow - r2.x_sing) < 1e-8);
}

TEST_CASE("riccati pole array is pi-periodic") {
    auto ode = make_riccati(2);
    auto s = build_singular(ode, cplx(1.0), 2);
    auto reports = singularity_array(s, cplx(1.0), cplx(1.0),
                                     {{0, 0}, {1, 0}, {2, 0}});
    REQUIRE(reports.size() == 3);
    const cplx spacing = reports[1].x_sing - reports[0].x_sing;
    CHECK(std::abs(std::abs(spacing) - PI) < 1e-8);
    CHECK(std::abs((reports[2].x_sing - reports[1].x_sing) - spacing) < 1e-8);
    // shift 0 reproduces locate_singularity
    auto base = locate_singularity(s, cplx(1.0), cplx(1.0));
    CHECK(std::abs(reports[0].x_sing - base.x_sing) < 1e-14);
}

TEST_CASE("abel singular F values match the closed forms") {
    auto ode = make_abel(1);
    auto s = build_singular(ode, cplx(1.0), 1);
    CHECK(s.m0 == 3);
    CHECK(s.q == 2);
    FContinuation f1(s.series);
    f1.move_to(cplx(1.0));
    CHECK(std::abs(f1.state().F[0] - cplx(abel_F0_sing_closed(1.0))) < 1e-8);
    FContinuation f2(s.series);
    f2.move_to(cplx(2.0));
    CHECK(std::abs(f2.state().F[1] - cplx(abel_F1_sing_closed(2.0))) < 1e-8);
}

TEST_CASE("abel paper singularity: six digits and RK confirmation") {
    auto ode = make_abel(1);
    auto s = build_singular(ode, cplx(1.0), 1);
    auto rep = locate_singularity(s, cplx(10.0, 60.0), cplx(0.7, 0.3));
    CHECK(std::abs(rep.x_sing - cplx(9.80628, 60.2167)) < 6e-4);  // 6 significant digits
    rep = verify_singularity(ode, rep);
    CHECK(rep.verified);
    CHECK(rep.digits >= 6.0);
}

TEST_CASE("abel singularity array around 1/3") {
    auto ode = make_abel(1);
    auto s = build_singular(ode, cplx(1.0), 2);
    const cplx x0(10.0, 60.0), y0(0.7, 0.3);
    const int j = abel_third_index(ode);
    // first-order period formula holds for the one-term series; the n=2
    // series adds an O(x^-2) correction on top of it
    auto s1 = build_singular(ode, cplx(1.0), 1);
    auto periods1 = singular_periods(s1, x0, y0);
    const cplx expected = cplx(0.0, 2 * PI) * (1.0 + 1.0 / (5.0 * x0));
    CHECK(std::abs(periods1[(size_t)j] - expected) < 1e-6);

    std::vector<std::vector<int>> shifts;
    for (int k = 0; k < 4; ++k) {
        std::vector<int> m(ode.roots.roots.size(), 0);
        m[(size_t)j] = k;
        shifts.push_back(m);
    }
    auto reports = singularity_array(s, x0, y0, shifts);
    const auto base = reports.front();  // zero shift
    for (auto& r : reports) {
        // tight RK tolerance: the winding shoot path is long and integration
        // error otherwise dominates the blow-up location
        r = verify_singularity(ode, r, 1e-12, verification_waypoints(ode, base, r));
        CHECK(r.verified);
        CHECK(r.digits >= 4.0);
    }
}

TEST_CASE("negative control: a wrong prediction is flagged") {
    auto ode = make_abel(1);
    auto s = build_singular(ode, cplx(1.0), 1);
    auto rep = locate_singularity(s, cplx(10.0, 60.0), cplx(0.7, 0.3));
    rep.x_sing += 0.5;
    bool flagged = false;
    try {
        rep = verify_singularity(ode, rep);
        flagged = !rep.verified || rep.digits < 3.0;
    } catch (const NoBlowup&) {
        flagged = true;
    }
    CHECK(flagged);
}

TEST_CASE("tail cutoff independence") {
    auto ode = make_abel(1);
    auto s1 = build_singular(ode, cplx(1.0), 1, 1e3);
    auto s2 = build_singular(ode, cplx(1.0), 1, 2e3);
    FContinuation a(s1.series), b(s2.series);
    a.move_to(cplx(0.7, 0.3));
    b.move_to(cplx(0.7, 0.3));
    for (int k = 0; k <= 1; ++k)
        CHECK(std::abs(a.state().F[(size_t)k] - b.state().F[(size_t)k]) < 1e-9);
}

TEST_CASE("singular F_k decay exponents") {
    // Y_max = 10 keeps |F_1| well above integration noise on the fit range
    auto abel = make_abel(1);
    auto sa = build_singular(abel, cplx(1.0), 1, 10.0);
    auto slope = [&](const SingularSeries& s, int level, double r0) {
        // fit log|F_level| vs log|y| on [r0, 4 r0]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int N = 10;
        for (int i = 0; i < N; ++i) {
            const double r = r0 * std::pow(4.0, (double)i / (N - 1));
            FContinuation fc(s.series);
            fc.move_to(r * s.direction);
            const double lx = std::log(r);
            const double ly = std::log(std::abs(fc.state().F[(size_t)level]));
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        return (N * sxy - sx * sy) / (N * sxx - sx * sx);
    };
    // |F_1| ~ |y|^{-(m0+q-1)} = |y|^{-4} for Abel
    CHECK(slope(sa, 1, 10.0) == doctest::Approx(-4.0).epsilon(0.05));
    // |F_0| ~ |y|^{-(m0-1)} = |y|^{-1} for Riccati
    auto ric = make_riccati(1);
    auto sr = build_singular(ric, cplx(1.0), 1);
    CHECK(slope(sr, 0, 1e3) == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("order improvement on an integrable family") {
    // y = tan(x + 1/x) solves y' = (y^2+1)(1 - 1/x^2): P0 = y^2+1, P2 = -(y^2+1)
    ComplexPoly p0(std::vector<cplx>{1.0, 0.0, 1.0});
    ComplexPoly p2(std::vector<cplx>{-1.0, 0.0, -1.0});
    auto x_true = [&](double x0) {
        const double w0 = x0 + 1.0 / x0;
        double target = PI / 2;
        while (target < w0) target += PI;  // first pole ahead of x0
        // solve x + 1/x = target for x near target
        double x = target;
        for (int i = 0; i < 60; ++i) x = x - (x + 1.0 / x - target) / (1.0 - 1.0 / (x * x));
        return x;
    };
    auto predict = [&](double x0, int n) {
        OdeSpec ode({p0, ComplexPoly(), p2}, n);
        auto s = build_singular(ode, cplx(1.0), n);
        const double y0 = std::tan(x0 + 1.0 / x0);
        return locate_singularity(s, cplx(x0), cplx(y0)).x_sing;
    };
    for (double x0 : {20.0, 40.0}) {
        const double xt = x_true(x0);
        const double e1 = std::abs(predict(x0, 1) - cplx(xt));
        const double e2 = std::abs(predict(x0, 2) - cplx(xt));
        CHECK(e2 < e1 * (8.0 / x0));  // O(1/|x0|) improvement, generous constant
    }
}

TEST_CASE("degree and decay guards") {
    CHECK_THROWS_AS(build_singular(make_linear(1), cplx(1.0), 1), DegreeTooLow);
    // P1 growing faster than P0 violates the decay condition
    OdeSpec bad({ComplexPoly(std::vector<cplx>{1.0, 0.0, 1.0}),
                 ComplexPoly(std::vector<cplx>{0.0, 0.0, 0.0, 1.0})},
                1);
    CHECK_THROWS_AS(build_singular(bad, cplx(1.0), 1), DecayViolation);
}

TEST_CASE("partial sums are Cauchy for large x0") {
    auto ode = make_abel(4);
    auto s = build_singular(ode, cplx(1.0), 4);
    FContinuation fc(s.series);
    fc.move_to(cplx(0.7, 0.3));
    const cplx x0(10.0, 60.0);
    cplx partial = 0.0, xk = 1.0;
    std::vector<double> increments;
    for (int k = 0; k <= 4; ++k) {
        const cplx term = fc.state().F[(size_t)k] / xk;
        partial += term;
        if (k >= 1) increments.push_back(std::abs(term));
        xk *= x0;
    }
    for (size_t i = 1; i < increments.size(); ++i)
        CHECK(increments[i] < increments[i - 1]);
}