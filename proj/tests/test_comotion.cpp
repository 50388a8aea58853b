#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"

using namespace asymcom;
using namespace testutil;

namespace {

ConstantSeries abel_series(int n) {
    auto ode = make_abel(n);
    Contour c = default_contour(ode.roots, abel_third_index(ode), 1);
    return build_constant(ode, c, cplx(1.1), n);
}

} // namespace

TEST_CASE("f_derivative closed values at y=1") {
    auto ode = make_abel(2);
    auto d = f_derivative(ode, SeriesKind::RDomain, cplx(0.2), cplx(1.0),
                          {cplx(0.0), cplx(0.0), cplx(0.0)});
    CHECK(std::abs(d[0] - cplx(-9.0 / 26)) < 1e-14);
    CHECK(std::abs(d[1] - cplx(63.0 / 676)) < 1e-14);
}

TEST_CASE("f_derivative refuses points near roots") {
    auto ode = make_abel(2);
    CHECK_THROWS_AS(f_derivative(ode, SeriesKind::RDomain, cplx(0.2),
                                 cplx(1.0 / 3 + 1e-4), {cplx(0.0)}),
                    NearRoot);
}

TEST_CASE("solve_a: Abel loop around 1/3 gives 1/5") {
    auto ode = make_abel(2);
    Contour c = default_contour(ode.roots, abel_third_index(ode), 1);
    CHECK(std::abs(solve_a(ode, c) - cplx(0.2)) < 1e-9);
}

TEST_CASE("solve_a: P0=y^2-1, P1=1, loop around +1 gives 1/2") {
    OdeSpec ode({ComplexPoly(std::vector<cplx>{-1.0, 0.0, 1.0}),
                 ComplexPoly(std::vector<cplx>{1.0})},
                2);
    Contour c = default_contour(ode.roots, abel_root_index(ode, cplx(1.0)), 1);
    CHECK(std::abs(solve_a(ode, c) - cplx(0.5)) < 1e-9);
}

TEST_CASE("solve_a is orientation invariant") {
    auto ode = make_abel(2);
    Contour c = default_contour(ode.roots, abel_third_index(ode), 1);
    c.orientation = -1;
    CHECK(std::abs(solve_a(ode, c) - cplx(0.2)) < 1e-9);
}

TEST_CASE("solve_c: Abel c_1 = 1/25") {
    auto ode = make_abel(2);
    Contour c = default_contour(ode.roots, abel_third_index(ode), 1);
    CHECK(std::abs(solve_c(ode, c, cplx(0.2), 1) - cplx(0.04)) < 1e-8);
}

TEST_CASE("solve_c vanishes when all higher P_k vanish") {
    OdeSpec ode({ComplexPoly(std::vector<cplx>{-1.0, 0.0, 1.0})}, 2);
    Contour c = default_contour(ode.roots, 0, 1);
    CHECK(std::abs(solve_a(ode, c)) < 1e-10);
    CHECK(std::abs(solve_c(ode, c, cplx(0.0), 1)) < 1e-9);
}

TEST_CASE("monodromy closure with canonical constants") {
    ConstantSeries s = abel_series(2);
    const int j = abel_third_index(s.ode);
    const cplx w = s.ode.roots.roots[(size_t)j] + 2.0 * s.contour.radii[(size_t)j];
    FContinuation fc(s);
    fc.move_to(w);
    auto delta = monodromy(s.ode, SeriesKind::RDomain, s.a, fc.state().F, w, s.contour);
    // F_0 picks up its period, the canonical higher levels close
    CHECK(std::abs(delta[0] - cplx(0.0, -2 * PI)) < 1e-9);
    CHECK(std::abs(delta[1]) < 1e-9);
    CHECK(std::abs(delta[2]) < 1e-9);
    // quadrature verification: doubled circle resolution agrees
    auto delta2 = monodromy(s.ode, SeriesKind::RDomain, s.a, fc.state().F, w,
                            s.contour, 192);
    for (size_t k = 0; k < delta.size(); ++k)
        CHECK(std::abs(delta2[k] - delta[k]) < 1e-9);
}

TEST_CASE("build_constant reports a and c and zeroes F0 at base") {
    ConstantSeries s = abel_series(3);
    CHECK(std::abs(s.a - cplx(0.2)) < 1e-9);
    REQUIRE(s.c.size() == 2);
    CHECK(std::abs(s.c[0] - cplx(0.04)) < 1e-8);
    CHECK(std::abs(s.base_F[0]) < 1e-15);
}

TEST_CASE("homotopy invariance of continuation") {
    ConstantSeries s = abel_series(2);
    FContinuation direct(s);
    direct.move_to(cplx(2.0, 2.0));
    FContinuation dogleg(s);
    dogleg.move_to(cplx(3.0, 0.5));
    dogleg.move_to(cplx(2.0, 2.0));
    for (int k = 0; k <= 2; ++k)
        CHECK(std::abs(direct.state().F[(size_t)k] - dogleg.state().F[(size_t)k]) < 1e-8);
}

TEST_CASE("residual decays at order n+1") {
    ConstantSeries s = abel_series(2);
    const cplx y(0.9, 0.1);
    const double r30 = std::abs(residual_at(s, cplx(30.0), y));
    const double r120 = std::abs(residual_at(s, cplx(120.0), y));
    const double slope = std::log(r120 / r30) / std::log(120.0 / 30.0);
    CHECK(slope == doctest::Approx(-3.0).epsilon(0.2));
}

TEST_CASE("path admissibility statistic is bounded on a safe ray") {
    ConstantSeries s = abel_series(2);
    std::vector<cplx> xs, ys;
    for (int i = 0; i < 12; ++i) {
        xs.push_back(cplx(20.0 + 10.0 * i, 5.0));
        ys.push_back(cplx(0.9, 0.3));
    }
    CHECK(path_admissibility(s, xs, ys) < 10.0);
}

TEST_CASE("coefficient growth stays factorially bounded") {
    ConstantSeries s = abel_series(6);
    double A = 0.0;
    double fact = 1.0;
    for (int k = 1; k <= 6; ++k) {
        fact *= k;
        A = std::max(A, std::abs(s.base_F[(size_t)k]) / fact);
    }
    // |F_k| <= A k! with a modest A for the Abel equation
    CHECK(A < 50.0);
}

TEST_CASE("anchored presentation reproduces the reference F-values") {
    ConstantSeries s = abel_series(1);
    anchor_level(s, 0, cplx(1.1), cplx(abel_F0_closed(1.1)));
    anchor_level(s, 1, cplx(1.1), cplx(abel_F1_closed(1.1)));
    FContinuation fc(s);
    fc.move_to(cplx(2.0));
    CHECK(std::abs(fc.state().F[0] + s.offsets[0] - cplx(abel_F0_closed(2.0))) < 1e-8);
    CHECK(std::abs(fc.state().F[1] + s.offsets[1] - cplx(abel_F1_closed(2.0))) < 1e-8);
}

TEST_CASE("eval_C tracks the branch of log x") {
    ConstantSeries s = abel_series(1);
    FContinuation fc(s);
    // walk x once around the origin: log x gains 2 pi i, so C shifts by 2 pi i a
    BranchState b = BranchState::principal(cplx(50.0));
    const cplx c0 = eval_C(s, cplx(50.0), b, fc.state());
    cplx x = cplx(50.0);
    for (int i = 1; i <= 64; ++i) {
        const double th = 2 * PI * i / 64;
        const cplx xn = 50.0 * std::polar(1.0, th);
        b.advance(xn);
        x = xn;
    }
    const cplx c1 = eval_C(s, x, b, fc.state());
    CHECK(std::abs(c1 - c0 - s.a * cplx(0.0, 2 * PI)) < 1e-12);
}

TEST_CASE("zero contour winding is rejected") {
    auto ode = make_abel(2);
    Contour c = default_contour(ode.roots, 0, 0);  // loops = 0
    CHECK_THROWS_AS(solve_a(ode, c), MathError);
}
