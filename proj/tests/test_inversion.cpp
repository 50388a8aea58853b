#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"

#include "asymcom/inversion.hpp"
#include "asymcom/oracle.hpp"

using namespace asymcom;
using namespace testutil;

namespace {

ConstantSeries abel_series(int n) {
    auto ode = make_abel(n);
    Contour c = default_contour(ode.roots, abel_third_index(ode), 1);
    return build_constant(ode, c, cplx(1.1), n);
}

} // namespace

TEST_CASE("newton_invert round-trips the implicit relation") {
    ConstantSeries s = abel_series(2);
    const cplx x0(40.0, 15.0), y0(0.9, 0.2);
    const cplx K = constant_from_ic(s, x0, y0);
    FContinuation fc(s);
    fc.move_to(y0 + cplx(0.05, -0.03));  // start from a perturbed guess
    const cplx y = newton_invert(s, fc, x0, BranchState::principal(x0), K);
    CHECK(std::abs(y - y0) < 1e-9);
}

TEST_CASE("newton_invert diverges gracefully on an absurd target") {
    ConstantSeries s = abel_series(2);
    FContinuation fc(s);
    fc.move_to(cplx(0.9, 0.2));
    CHECK_THROWS_AS(newton_invert(s, fc, cplx(40.0, 15.0),
                                  BranchState::principal(cplx(40.0, 15.0)),
                                  cplx(1e7, 1e7)),
                    MathError);
}

TEST_CASE("continue_trajectory conserves K and matches RK") {
    ConstantSeries s = abel_series(2);
    Path xp;
    xp.plane = Plane::X;
    // keep the x span short: y - 1/3 shrinks like e^{-Re x} and the Newton
    // continuation must stay clear of the root
    xp.nodes = {cplx(30.0, 10.0), cplx(31.2, 10.48)};
    const cplx y0(0.9, 0.2);
    auto samples = continue_trajectory(s, xp, y0);
    REQUIRE(samples.size() > 5);
    const cplx K = samples.front().K_check;
    for (const auto& t : samples) {
        CHECK(std::abs(t.K_check - K) < 1e-8);
        CHECK(t.region == "r-domain");
    }
    // against the RK oracle
    auto rk = rk_integrate(s.ode, xp, y0, 1e-12);
    auto rp = path_params(xp, rk.xs);
    std::vector<cplx> sx;
    for (auto& t : samples) sx.push_back(t.x);
    auto sp = path_params(xp, sx);
    for (size_t i = 0; i < samples.size(); ++i) {
        const cplx yr = rk_value_at(rk, rp, sp[i]);
        CHECK(std::abs(samples[i].y - yr) / std::abs(yr) < 1e-2);  // O(|x|^-2) truncation drift
    }
}

TEST_CASE("pinned K starts from the inverted branch") {
    ConstantSeries s = abel_series(2);
    Path xp;
    xp.plane = Plane::X;
    xp.nodes = {cplx(30.0, 10.0), cplx(31.0, 10.4)};
    const cplx y0(0.9, 0.2);
    const cplx K = constant_from_ic(s, xp.nodes[0], y0);
    auto pinned = continue_trajectory(s, xp, y0 + cplx(0.02, 0.01), &K);
    CHECK(std::abs(pinned.front().y - y0) < 1e-9);
}

TEST_CASE("linear equation: the constant vanishes identically") {
    auto ode = make_linear(2);
    Contour c = default_contour(ode.roots, 0, 1);
    ConstantSeries s = build_constant(ode, c, cplx(1.0), 2);
    CHECK(std::abs(s.a) < 1e-10);
    for (const cplx& ck : s.c) CHECK(std::abs(ck) < 1e-9);
    // y(x) = e^{-x} with y(0) = base_y = 1: C(x, y(x)) == 0 everywhere
    for (double x = 0.25; x <= 2.0; x += 0.25) {
        const cplx y = std::exp(-x);
        FContinuation fc(s);
        fc.move_to(y);
        const cplx C = eval_C(s, cplx(x), BranchState::principal(cplx(x)), fc.state());
        CHECK(std::abs(C) < 1e-9);
    }
}

TEST_CASE("region tags follow the geometry") {
    auto ode = make_abel(2);
    CHECK(region_tag(ode, cplx(100.0), cplx(0.34)) == "near-root");
    CHECK(region_tag(ode, cplx(100.0), cplx(1.0, 0.5)) == "r-domain");
    CHECK(region_tag(ode, cplx(2.0), cplx(1.0, 0.5)) == "unknown");
}
