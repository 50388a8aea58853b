#include "asymcom/comotion.hpp"

#include <cmath>
#include <limits>

namespace asymcom {

std::vector<cplx> f_derivative(const OdeSpec& ode, SeriesKind kind, cplx a,
                               cplx y, const std::vector<cplx>& F) {
    if (distance_to_roots(y, ode.roots) < 0.8 * ode.eps_root)
        throw NearRoot("f_derivative evaluated too close to a root of P0");
    const cplx p0 = ode.P[0].eval(y);
    const int m = (int)F.size();
    std::vector<cplx> d((size_t)m);
    d[0] = (kind == SeriesKind::RDomain ? cplx(1.0) : cplx(-1.0)) / p0;
    if (m > 1) {
        const cplx p1 = ode.Pk(1, y);
        d[1] = (kind == SeriesKind::RDomain ? -(a + p1 * d[0]) : -(p1 * d[0])) / p0;
    }
    for (int k = 2; k < m; ++k) {
        cplx s = cplx((double)(k - 1)) * F[(size_t)k - 1];
        for (int j = 0; j < k; ++j) s -= ode.Pk(k - j, y) * d[(size_t)j];
        d[(size_t)k] = s / p0;
    }
    return d;
}

std::vector<FVector> integrate_F(const OdeSpec& ode, SeriesKind kind, cplx a,
                                 const Path& ypath, const std::vector<cplx>& F_start,
                                 const RkOptions& opt) {
    std::vector<FVector> out;
    if (ypath.nodes.empty()) return out;
    State F = F_start;
    auto snapshot = [&](cplx y) {
        FVector v;
        v.y = y;
        v.F = F;
        v.dF = f_derivative(ode, kind, a, y, F);
        out.push_back(std::move(v));
    };
    snapshot(ypath.nodes.front());
    for (size_t i = 0; i + 1 < ypath.nodes.size(); ++i) {
        const cplx ya = ypath.nodes[i], yb = ypath.nodes[i + 1];
        const cplx dy = yb - ya;
        if (std::abs(dy) == 0.0) { snapshot(yb); continue; }
        auto deriv = [&](double t, const State& s, State& ds) {
            auto fd = f_derivative(ode, kind, a, ya + t * dy, s);
            for (size_t q = 0; q < s.size(); ++q) ds[q] = fd[q] * dy;
        };
        rk_adaptive(deriv, 0.0, 1.0, F, opt);
        snapshot(yb);
    }
    return out;
}

std::vector<cplx> monodromy(const OdeSpec& ode, SeriesKind kind, cplx a,
                            const std::vector<cplx>& F_base, cplx base_y,
                            const Contour& contour, int circle_nodes) {
    Path loop = contour_to_path(contour, ode.roots, base_y, ode.eps_root, circle_nodes);
    auto states = integrate_F(ode, kind, a, loop, F_base);
    std::vector<cplx> delta(F_base.size());
    for (size_t k = 0; k < F_base.size(); ++k)
        delta[k] = states.back().F[k] - F_base[k];
    return delta;
}

cplx contour_integral(const std::function<cplx(cplx)>& f, const RootSet& roots,
                      const Contour& contour, double tol) {
    cplx total = 0.0;
    const double pi2 = 2.0 * std::acos(-1.0);
    for (size_t j = 0; j < roots.roots.size(); ++j) {
        const int w = (j < contour.winding.size()) ? contour.winding[j] : 0;
        if (w == 0) continue;
        const double r = contour.radii[j];
        const cplx p = roots.roots[j];
        auto value = [&](int M) {
            cplx s = 0.0;
            for (int m = 0; m < M; ++m) {
                const double th = pi2 * m / M;
                const cplx e = std::polar(r, th);
                s += f(p + e) * cplx(0.0, 1.0) * e;
            }
            return s * (pi2 / (double)M) * (double)(contour.orientation * w);
        };
        int M = 64;
        cplx prev = value(M);
        for (;;) {
            M *= 2;
            cplx cur = value(M);
            if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) { prev = cur; break; }
            prev = cur;
            if (M > 65536) throw NoConvergence("contour quadrature did not settle");
        }
        total += prev;
    }
    return total;
}

cplx solve_a(const OdeSpec& ode, const Contour& contour) {
    auto& P0 = ode.P[0];
    auto i0 = contour_integral([&](cplx y) { return 1.0 / P0.eval(y); },
                               ode.roots, contour);
    if (std::abs(i0) < 1e-10)
        throw ZeroDenominator("contour integral of 1/P0 vanishes");
    auto i1 = contour_integral([&](cplx y) {
                  cplx p0 = P0.eval(y);
                  return ode.Pk(1, y) / (p0 * p0);
              },
              ode.roots, contour);
    return -i1 / i0;
}

namespace {

int main_root(const Contour& contour) {
    for (size_t j = 0; j < contour.winding.size(); ++j)
        if (contour.winding[j] != 0) return (int)j;
    throw MathError("BadContour", "contour has no nonzero winding");
}

// Values F_1..F_kmax at base_w that make each level single-valued around the
// contour: an additive shift d on level i moves the loop change of level i+1
// by i*d*I0, so one affine solve per level pins it.
struct Canonical {
    cplx I0;
    std::vector<cplx> t;  // t[i-1] = canonical F_i(base_w)
};

Canonical canonical_levels(const OdeSpec& ode, const Contour& contour, cplx a,
                           cplx base_w, int kmax, bool assert_slope) {
    Canonical out;
    out.I0 = contour_integral([&](cplx y) { return 1.0 / ode.P[0].eval(y); },
                              ode.roots, contour);
    if (std::abs(out.I0) < 1e-10)
        throw ZeroDenominator("contour integral of 1/P0 vanishes");
    for (int i = 1; i <= kmax; ++i) {
        std::vector<cplx> Fb((size_t)i + 2, 0.0);
        for (int q = 1; q < i; ++q) Fb[(size_t)q] = out.t[(size_t)q - 1];
        auto d0 = monodromy(ode, SeriesKind::RDomain, a, Fb, base_w, contour);
        const cplx slope = cplx((double)i) * out.I0;
        if (assert_slope && i == kmax) {
            Fb[(size_t)i] = 1.0;
            auto d1 = monodromy(ode, SeriesKind::RDomain, a, Fb, base_w, contour);
            const cplx measured = d1[(size_t)i + 1] - d0[(size_t)i + 1];
            if (std::abs(measured - slope) > 1e-6 * std::max(1.0, std::abs(slope)))
                throw NoConvergence("monodromy slope disagrees with loop integral of 1/P0");
            Fb[(size_t)i] = 0.0;
        }
        out.t.push_back(-d0[(size_t)i + 1] / slope);
    }
    return out;
}

// Mean of each level over M uniform nodes of the main circle, continued from
// canonical values at base_w.  Levels 1..kmax are single-valued there, so the
// trapezoid mean is well defined.
std::vector<cplx> circle_averages(const OdeSpec& ode, const Contour& contour, cplx a,
                                  cplx base_w, const std::vector<cplx>& t, int kmax,
                                  std::vector<FVector>* spine) {
    const int j0 = main_root(contour);
    const cplx p = ode.roots.roots[(size_t)j0];
    const double r = contour.radii[(size_t)j0];
    const int M = 256;
    auto circle = circle_nodes_around(p, r, contour.orientation, 1, M, 0.0);
    Path path;
    path.plane = Plane::Y;
    path.nodes.push_back(base_w);
    path.nodes.insert(path.nodes.end(), circle.begin(), circle.end());
    std::vector<cplx> F0((size_t)kmax + 1, 0.0);
    for (int q = 1; q <= kmax; ++q) F0[(size_t)q] = t[(size_t)q - 1];
    auto states = integrate_F(ode, SeriesKind::RDomain, a, path, F0);
    std::vector<cplx> ca((size_t)kmax + 1, 0.0);
    const size_t first = states.size() - circle.size();
    for (int m = 0; m < M; ++m)
        for (int k = 0; k <= kmax; ++k)
            ca[(size_t)k] += states[first + (size_t)m].F[(size_t)k];
    for (auto& v : ca) v /= (double)M;
    if (spine) {
        spine->clear();
        for (size_t m = first; m < states.size(); m += 8) spine->push_back(states[m]);
    }
    return ca;
}

// Sum over the other roots of the simple-pole coefficient of F_1 there,
// evaluated at the main root; removing it leaves the reported c_1.
cplx cross_pole_sum(const OdeSpec& ode, const Contour& contour) {
    const int j0 = main_root(contour);
    const cplx p = ode.roots.roots[(size_t)j0];
    const ComplexPoly dP0 = ode.P[0].derivative();
    cplx s = 0.0;
    for (size_t j = 0; j < ode.roots.roots.size(); ++j) {
        if ((int)j == j0) continue;
        const cplx pj = ode.roots.roots[j];
        const cplx dp = dP0.eval(pj);
        s += ode.Pk(1, pj) / (dp * dp) / (p - pj);
    }
    return s;
}

cplx loop_base(const OdeSpec& ode, const Contour& contour) {
    const int j0 = main_root(contour);
    return ode.roots.roots[(size_t)j0] + 2.0 * contour.radii[(size_t)j0];
}

} // namespace

cplx solve_c(const OdeSpec& ode, const Contour& contour, cplx a, int k) {
    if (k < 1) throw MathError("BadLevel", "solve_c needs k >= 1");
    const cplx w = loop_base(ode, contour);
    auto can = canonical_levels(ode, contour, a, w, k, true);
    auto ca = circle_averages(ode, contour, a, w, can.t, k, nullptr);
    cplx c = ca[(size_t)k];
    if (k == 1) c -= cross_pole_sum(ode, contour);
    return c;
}

ConstantSeries build_constant(const OdeSpec& ode, const Contour& contour,
                              cplx base_y, int n) {
    ConstantSeries s;
    s.kind = SeriesKind::RDomain;
    s.ode = ode;
    s.ode.n = n;
    s.contour = contour;
    s.base_y = base_y;
    s.n = n;
    s.a = solve_a(ode, contour);
    const cplx w = loop_base(ode, contour);
    auto can = canonical_levels(ode, contour, s.a, w, n, true);
    auto ca = circle_averages(ode, contour, s.a, w, can.t, n, &s.spine);
    for (int k = 1; k < n; ++k) {
        cplx c = ca[(size_t)k];
        if (k == 1) c -= cross_pole_sum(ode, contour);
        s.c.push_back(c);
    }
    // carry the canonical stack to base_y and zero F_0 there
    std::vector<cplx> Fw((size_t)n + 1, 0.0);
    for (int q = 1; q <= n; ++q) Fw[(size_t)q] = can.t[(size_t)q - 1];
    Path leg;
    leg.plane = Plane::Y;
    leg.nodes = {w, base_y};
    leg = deform_path(leg, ode.roots, ode.eps_root);
    auto states = integrate_F(ode, SeriesKind::RDomain, s.a, leg, Fw);
    s.base_F = states.back().F;
    s.base_F[0] = 0.0;
    s.offsets.assign((size_t)n + 1, 0.0);
    return s;
}

FContinuation::FContinuation(const ConstantSeries& s) : s_(&s) {
    cur_.y = s.base_y;
    cur_.F = s.base_F;
    cur_.dF = f_derivative(s.ode, s.kind, s.a, cur_.y, cur_.F);
    turns_.assign(s.ode.roots.roots.size(), 0.0);
}

FContinuation::FContinuation(const ConstantSeries& s, cplx y0, std::vector<cplx> F0)
    : s_(&s) {
    cur_.y = y0;
    cur_.F = std::move(F0);
    cur_.dF = f_derivative(s.ode, s.kind, s.a, cur_.y, cur_.F);
    turns_.assign(s.ode.roots.roots.size(), 0.0);
}

void FContinuation::track_turns(const Path& leg) {
    for (size_t j = 0; j < turns_.size(); ++j) {
        const cplx p = s_->ode.roots.roots[j];
        for (size_t i = 0; i + 1 < leg.nodes.size(); ++i)
            turns_[j] += std::arg((leg.nodes[i + 1] - p) / (leg.nodes[i] - p));
    }
}

void FContinuation::move_to(cplx y_next) {
    if (y_next == cur_.y) return;
    Path leg;
    leg.plane = Plane::Y;
    leg.nodes = {cur_.y, y_next};
    leg = deform_path(leg, s_->ode.roots, s_->ode.eps_root);
    auto states = integrate_F(s_->ode, s_->kind, s_->a, leg, cur_.F);
    track_turns(leg);
    cur_ = states.back();
}

void anchor_level(ConstantSeries& s, int k, cplx y_anchor, cplx value) {
    if (k < 0 || k > s.n) throw MathError("BadLevel", "anchor level out of range");
    FContinuation fc(s);
    fc.move_to(y_anchor);
    s.offsets[(size_t)k] = value - fc.state().F[(size_t)k];
}

cplx eval_C(const ConstantSeries& s, cplx x, const BranchState& branch,
            const FVector& F) {
    cplx acc = (s.kind == SeriesKind::RDomain) ? (-x + s.a * branch.log_x()) : x;
    cplx xk = 1.0;
    for (int k = 0; k <= s.n; ++k) {
        cplx off = (k < (int)s.offsets.size()) ? s.offsets[(size_t)k] : cplx(0.0);
        const cplx num = F.F[(size_t)k] + off;
        if (num != cplx(0.0)) acc += num / xk;  // allow x = 0 when the term is absent
        xk *= x;
    }
    return acc;
}

cplx eval_C(const ConstantSeries& s, cplx x, cplx y,
            const std::vector<cplx>& y_history) {
    FContinuation fc(s);
    for (cplx node : y_history) fc.move_to(node);
    fc.move_to(y);
    return eval_C(s, x, BranchState::principal(x), fc.state());
}

cplx residual(const ConstantSeries& s, cplx x, const FVector& F) {
    const cplx q = s.ode.q1(F.y, x);
    const auto& dF = F.dF;
    cplx r = (s.kind == SeriesKind::RDomain) ? (-1.0 + s.a / x) : cplx(1.0);
    cplx xk = 1.0;  // x^k
    for (int k = 0; k <= s.n; ++k) {
        cplx off = (k < (int)s.offsets.size()) ? s.offsets[(size_t)k] : cplx(0.0);
        r += -cplx((double)k) * (F.F[(size_t)k] + off) / (xk * x);
        r += dF[(size_t)k] / xk * q;
        xk *= x;
    }
    return r;
}

cplx residual_at(const ConstantSeries& s, cplx x, cplx y) {
    FContinuation fc(s);
    fc.move_to(y);
    return residual(s, x, fc.state());
}

double path_admissibility(const ConstantSeries& s, const std::vector<cplx>& xs,
                          const std::vector<cplx>& ys) {
    if (xs.size() != ys.size())
        throw MathError("BadSamples", "x and y sample counts differ");
    FContinuation fc(s);
    double sup = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        fc.move_to(ys[i]);
        const double v = std::abs(residual(s, xs[i], fc.state())) *
                         std::pow(std::abs(xs[i]), (double)s.n + 1.0);
        sup = std::max(sup, v);
    }
    return sup;
}

} // namespace asymcom
