#include "asymcom/singular.hpp"

#include <cmath>

namespace asymcom {

namespace {

// Least-squares slope of log|f| vs log|y| sampled on the ray.
double ray_slope(const std::function<cplx(cplx)>& f, cplx dir, double r0, double r1) {
    const int N = 24;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i < N; ++i) {
        const double r = r0 * std::pow(r1 / r0, (double)i / (N - 1));
        const double v = std::abs(f(r * dir));
        if (v <= 0.0) continue;
        const double lx = std::log(r), ly = std::log(v);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++used;
    }
    if (used < 2) return -1e9;  // identically zero: decays faster than any power
    return (used * sxy - sx * sy) / (used * sxx - sx * sx);
}

} // namespace

SingularSeries build_singular(const OdeSpec& ode, cplx direction, int n,
                              double Y_max) {
    const int m0 = ode.P[0].degree();
    if (m0 < 2) throw DegreeTooLow("singular series needs deg P0 >= 2");
    SingularSeries out;
    out.direction = direction / std::abs(direction);
    out.Y_max = Y_max;
    out.m0 = m0;

    // decay exponent q: slope of log|P_k/P_0| must be <= -q with q >= 0
    int q = 0;
    bool have = false;
    for (int k = 1; k < (int)ode.P.size(); ++k) {
        if (ode.P[(size_t)k].is_zero()) continue;
        const double sl = ray_slope(
            [&](cplx y) { return ode.P[(size_t)k].eval(y) / ode.P[0].eval(y); },
            out.direction, Y_max, 16.0 * Y_max);
        if (sl > 0.1) throw DecayViolation("P_k/P_0 grows along the singular ray");
        const int qk = (int)std::lround(std::max(0.0, -sl));
        q = have ? std::min(q, qk) : qk;
        have = true;
    }
    out.q = have ? q : 0;

    // integrate the F system down the compactified ray s = 1/|y|: starting
    // the quadrature at |y| = 1/s0 leaves a tail error ~ s0^{m0-1} <= 1e-12
    const double s0 = 1e-12;
    const double s1 = 1.0 / Y_max;
    State F((size_t)n + 1, 0.0);
    auto deriv = [&](double s, const State& Fs, State& dFs) {
        const cplx y = out.direction / s;
        auto fd = f_derivative(ode, SeriesKind::Singular, 0.0, y, Fs);
        const cplx dyds = -out.direction / (s * s);
        for (size_t i = 0; i < Fs.size(); ++i) dFs[i] = fd[i] * dyds;
    };
    rk_adaptive(deriv, s0, s1, F, RkOptions{});

    ConstantSeries& s = out.series;
    s.kind = SeriesKind::Singular;
    s.ode = ode;
    s.ode.n = n;
    s.n = n;
    s.a = 0.0;
    s.base_y = Y_max * out.direction;
    s.base_F = F;
    s.offsets.assign((size_t)n + 1, 0.0);
    return out;
}

SingularityReport locate_singularity(const SingularSeries& sing, cplx x0, cplx y0) {
    const ConstantSeries& s = sing.series;
    if (distance_to_roots(y0, s.ode.roots) < s.ode.eps_root)
        throw PathThroughRoot("y0 too close to a root of P0");
    FContinuation fc(s);
    fc.move_to(y0);
    SingularityReport rep;
    rep.x_sing = eval_C(s, x0, BranchState::principal(x0), fc.state());
    rep.branch_shift.assign(s.ode.roots.roots.size(), 0);
    rep.order_used = s.n;
    rep.x0 = x0;
    rep.y0 = y0;
    return rep;
}

std::vector<cplx> singular_periods(const SingularSeries& sing, cplx x0, cplx y0) {
    const ConstantSeries& s = sing.series;
    const auto& roots = s.ode.roots;
    std::vector<cplx> omega(roots.roots.size(), 0.0);
    for (size_t j = 0; j < roots.roots.size(); ++j) {
        Contour c = default_contour(roots, (int)j, 1);
        const cplx w = roots.roots[j] + 2.0 * c.radii[j];
        // loop must start from values continued in the same homotopy class
        FContinuation fc(s);
        fc.move_to(y0);
        fc.move_to(w);
        auto delta = monodromy(s.ode, SeriesKind::Singular, 0.0,
                               fc.state().F, w, c);
        cplx om = 0.0, xk = 1.0;
        for (int k = 0; k <= s.n; ++k) {
            om += delta[(size_t)k] / xk;
            xk *= x0;
        }
        omega[j] = om;
    }
    return omega;
}

std::vector<SingularityReport> singularity_array(const SingularSeries& sing,
                                                 cplx x0, cplx y0,
                                                 const std::vector<std::vector<int>>& shifts) {
    SingularityReport base = locate_singularity(sing, x0, y0);
    auto omega = singular_periods(sing, x0, y0);
    std::vector<SingularityReport> out;
    for (const auto& m : shifts) {
        SingularityReport r = base;
        r.branch_shift.assign(omega.size(), 0);
        for (size_t j = 0; j < omega.size() && j < m.size(); ++j) {
            r.branch_shift[j] = m[j];
            r.x_sing += cplx((double)m[j]) * omega[j];
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<cplx> verification_waypoints(const OdeSpec& ode,
                                         const SingularityReport& base,
                                         const SingularityReport& shifted) {
    size_t j = 0;
    int biggest = 0;
    for (size_t i = 0; i < shifted.branch_shift.size(); ++i)
        if (std::abs(shifted.branch_shift[i]) > biggest) {
            biggest = std::abs(shifted.branch_shift[i]);
            j = i;
        }
    if (biggest == 0) return {};
    const cplx mu = ode.P[0].derivative().eval(ode.roots.roots[j]);
    const cplx d = -std::conj(mu) / std::abs(mu);
    const cplx w1 = base.x0 + 20.0 / std::abs(mu) * d;
    return {w1, w1 + (shifted.x_sing - base.x_sing)};
}

SingularityReport verify_singularity(const OdeSpec& ode, SingularityReport report,
                                     double rk_tol,
                                     const std::vector<cplx>& waypoints) {
    RkOptions opt;
    opt.rel_tol = rk_tol;
    opt.abs_tol = rk_tol * 1e-2;
    // For m0 > 2 the blow-up is an algebraic branch point and |y| grows only
    // like |x - x_sing|^{-1/(m0-1)}, so stop where y^{1-m0} reaches 1e-6 and
    // let the closed-form remainder cover the rest of the approach.
    const int m0 = ode.P[0].degree();
    const double y_stop = std::pow(1e6, 1.0 / (double)(m0 - 1));
    const cplx lc = ode.P[0].leading();
    // remaining distance to the pole, from y' ~ lc y^{m0}
    auto remainder = [&](cplx yv) {
        return std::pow(yv, 1.0 - (double)m0) / (cplx((double)(m0 - 1)) * lc);
    };
    double max_root = 0.0;
    for (cplx p : ode.roots.roots) max_root = std::max(max_root, std::abs(p));

    report.shot = true;
    // A straight shoot can miss the pole by the (order-n) prediction error of
    // x_sing itself; when the final leg only grazes it (|y| peaks without
    // crossing y_stop), re-aim at the peak-based estimate and shoot again.
    cplx aim = report.x_sing;
    bool stopped = false;
    cplx x_stop{}, y_b{};
    for (int attempt = 0; attempt < 5 && !stopped; ++attempt) {
        std::vector<cplx> nodes{report.x0};
        for (cplx w : waypoints) nodes.push_back(w);
        const cplx x_pre = nodes.back();
        nodes.push_back(aim + 0.05 * (aim - x_pre));  // overshoot
        State y{report.y0};
        double peak = 0.0;
        cplx x_peak{}, y_peak{};
        for (size_t leg = 0; leg + 1 < nodes.size() && !stopped; ++leg) {
            const cplx xa = nodes[leg], xb = nodes[leg + 1];
            std::vector<RkStep> trace;
            auto deriv = [&](double t, const State& ys, State& dy) {
                dy[0] = ode.q1(ys[0], xa + t * (xb - xa)) * (xb - xa);
            };
            stopped = rk_adaptive(deriv, 0.0, 1.0, y, opt, &trace,
                                  [&](double, const State& ys) { return std::abs(ys[0]) > y_stop; });
            x_stop = xa + trace.back().t * (xb - xa);
            y_b = trace.back().y[0];
            if (leg + 2 == nodes.size())
                for (const RkStep& st : trace)
                    if (std::abs(st.y[0]) > peak) {
                        peak = std::abs(st.y[0]);
                        x_peak = xa + st.t * (xb - xa);
                        y_peak = st.y[0];
                    }
        }
        if (!stopped) {
            // A graze at miss-distance d peaks near (|lc| (m0-1) d)^{-1/(m0-1)},
            // which can be a small multiple of the root scale; anything clearly
            // above that scale is treated as a graze and re-aimed.
            if (peak <= 1.5 * (1.0 + max_root))
                throw NoBlowup("trajectory stayed bounded along the shoot");
            aim = x_peak + remainder(y_peak);
        }
    }
    if (!stopped) throw NoBlowup("shoot kept grazing the pole without blowing up");
    cplx x_blow = x_stop + remainder(y_b);
    report.x_blow = x_blow;
    const double delta = std::abs(x_blow - report.x_sing);
    report.digits = -std::log10(delta / std::abs(report.x_sing));
    report.verified = report.digits >= 3.0;
    return report;
}

} // namespace asymcom
