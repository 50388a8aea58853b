#include "asymcom/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace asymcom {

RkTrajectory rk_integrate(const OdeSpec& ode, const Path& xpath, cplx y0,
                          double tol) {
    if (xpath.nodes.empty()) throw MathError("BadPath", "empty x path");
    RkTrajectory out;
    out.rel_tol = tol;
    out.abs_tol = tol * 1e-2;
    RkOptions opt;
    opt.rel_tol = out.rel_tol;
    opt.abs_tol = out.abs_tol;

    State y{y0};
    out.xs.push_back(xpath.nodes.front());
    out.ys.push_back(y0);
    out.dydx.push_back(ode.q1(y0, xpath.nodes.front()));

    for (size_t seg = 0; seg + 1 < xpath.nodes.size(); ++seg) {
        const cplx xa = xpath.nodes[seg], xb = xpath.nodes[seg + 1];
        const cplx dx = xb - xa;
        if (std::abs(dx) == 0.0) continue;
        std::vector<RkStep> trace;
        auto deriv = [&](double t, const State& ys, State& dy) {
            dy[0] = ode.q1(ys[0], xa + t * dx) * dx;
        };
        bool stopped = rk_adaptive(deriv, 0.0, 1.0, y, opt, &trace,
                                   [](double, const State& ys) { return std::abs(ys[0]) > 1e6; },
                                   &out.rejected);
        for (size_t i = 1; i < trace.size(); ++i) {
            const cplx x = xa + trace[i].t * dx;
            out.xs.push_back(x);
            out.ys.push_back(trace[i].y[0]);
            out.dydx.push_back(trace[i].dydt[0] / dx);
        }
        if (stopped) {
            const cplx lx = out.xs.back();
            throw BlowupDetected("|y| exceeded 1e6", lx.real(), lx.imag());
        }
    }
    return out;
}

cplx rk_interpolate(const RkTrajectory& t, size_t seg, double frac) {
    if (seg + 1 >= t.xs.size()) throw MathError("BadIndex", "interpolation bracket out of range");
    const cplx h = t.xs[seg + 1] - t.xs[seg];
    const double u = frac;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * t.ys[seg] + h10 * h * t.dydx[seg] + h01 * t.ys[seg + 1] +
           h11 * h * t.dydx[seg + 1];
}

cplx rk_value_at(const RkTrajectory& t, const std::vector<double>& t_params, double s) {
    if (t_params.size() != t.xs.size() || t_params.empty())
        throw MathError("BadIndex", "trajectory parameters missing");
    auto it = std::upper_bound(t_params.begin(), t_params.end(), s);
    size_t i = (it == t_params.begin()) ? 0 : (size_t)(it - t_params.begin()) - 1;
    if (i + 1 >= t_params.size()) i = t_params.size() - 2;
    const double span = t_params[i + 1] - t_params[i];
    const double frac = (span <= 0.0) ? 0.0 : std::clamp((s - t_params[i]) / span, 0.0, 1.0);
    return rk_interpolate(t, i, frac);
}

namespace {

// coefficient arithmetic for truncated series in z = 1/x
using Series = std::vector<cplx>;

Series smul(const Series& a, const Series& b, size_t len) {
    Series c(len, 0.0);
    for (size_t i = 0; i < len; ++i)
        for (size_t j = 0; i + j < len && j < b.size(); ++j)
            if (i < a.size()) c[i + j] += a[i] * b[j];
    return c;
}

} // namespace

RootExpansion power_series_at_root(const OdeSpec& ode, cplx p, int M) {
    const ComplexPoly& P0 = ode.P[0];
    const ComplexPoly dP0 = P0.derivative();
    const cplx mu = dP0.eval(p);
    const double thresh = 1e-8 * P0.max_coeff() *
                          std::pow(1.0 + std::abs(p), (double)P0.degree() - 1.0);
    if (std::abs(P0.eval(p)) > thresh || std::abs(mu) < thresh)
        throw MultipleRoot("p is not a simple root of P0");

    const size_t len = (size_t)M + 1;
    Series u(len, 0.0);  // y - p
    auto rhs = [&]() {
        Series R(len, 0.0);
        for (size_t j = 0; j < ode.P.size() && j < len; ++j) {
            // evaluate P_j(p + u) by Horner on series
            Series acc(len, 0.0);
            const auto& co = ode.P[j].coeffs();
            for (int d = (int)co.size() - 1; d >= 0; --d) {
                Series next = smul(acc, u, len);
                // next += acc[0]*p? No: acc*(p+u) = acc*p + acc*u
                for (size_t i = 0; i < len; ++i) next[i] += acc[i] * p;
                next[0] += co[(size_t)d];
                acc = std::move(next);
            }
            for (size_t i = 0; i + j < len; ++i) R[i + j] += acc[i];
        }
        return R;
    };

    RootExpansion e;
    e.p = p;
    e.mu = mu;
    for (int m = 1; m <= M; ++m) {
        Series R = rhs();
        // y' = -sum k b_k z^{k+1}: coefficient of z^m is -(m-1) b_{m-1}
        cplx lhs = (m >= 2) ? -cplx((double)(m - 1)) * u[(size_t)m - 1] : cplx(0.0);
        const cplx bm = (lhs - R[(size_t)m]) / mu;
        u[(size_t)m] = bm;
        e.b.push_back(bm);
    }
    const cplx b1 = (M >= 1) ? e.b[0] : cplx(0.0);
    e.nu = P0.derivative().derivative().eval(p) * b1 +
           (ode.P.size() > 1 ? ode.P[1].derivative().eval(p) : cplx(0.0));
    return e;
}

cplx root_expansion_eval(const RootExpansion& e, cplx x) {
    cplx s = e.p, xk = x;
    for (const cplx& bk : e.b) {
        s += bk / xk;
        xk *= x;
    }
    return s;
}

TransseriesFit transseries_fit(const RootExpansion& e, const RkTrajectory& traj,
                               std::pair<size_t, size_t> window) {
    const size_t w0 = window.first, w1 = std::min(window.second, traj.xs.size());
    if (w1 <= w0 + 1) throw MathError("BadWindow", "transseries window too small");
    for (size_t i = w0; i < w1; ++i)
        if (std::abs(traj.ys[i] - e.p) >= 0.1)
            throw NotInRootRegion("trajectory leaves |y - p| < 0.1 inside the window");

    // branch of log x carried continuously from the first trajectory sample
    double argx = std::arg(traj.xs[0]);
    std::vector<cplx> est;
    for (size_t i = 0; i + 1 <= w1 && i < traj.xs.size(); ++i) {
        if (i > 0) argx += std::arg(traj.xs[i] / traj.xs[i - 1]);
        if (i < w0) continue;
        const cplx logx(std::log(std::abs(traj.xs[i])), argx);
        const cplx delta = traj.ys[i] - root_expansion_eval(e, traj.xs[i]);
        est.push_back(delta * std::exp(-e.nu * logx - e.mu * traj.xs[i]));
    }

    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    std::vector<double> re, im;
    for (auto& c : est) { re.push_back(c.real()); im.push_back(c.imag()); }
    TransseriesFit fit;
    fit.C_trans = cplx(median_of(re), median_of(im));
    fit.window = {w0, w1};
    std::vector<double> dev;
    for (auto& c : est) dev.push_back(std::abs(c - fit.C_trans));
    const double scale = std::max(std::abs(fit.C_trans), 1e-300);
    fit.stability = median_of(dev) / scale;
    if (fit.stability >= 0.05)
        throw UnstableFit("per-sample transseries estimates spread by >= 5%");
    return fit;
}

RegionTag detect_region(const OdeSpec& ode, cplx x, cplx y, double eps_near,
                        double R0) {
    RegionTag tag;
    double best = 1e300;
    for (size_t j = 0; j < ode.roots.roots.size(); ++j) {
        const double d = std::abs(y - ode.roots.roots[j]);
        if (d < best) { best = d; tag.root_index = (int)j; }
    }
    if (best < eps_near) { tag.kind = RegionKind::NearRoot; return tag; }
    tag.root_index = -1;
    if (best >= ode.eps_root && std::abs(x) >= R0) tag.kind = RegionKind::RDomain;
    else tag.kind = RegionKind::Unknown;
    return tag;
}

PhaseField phase_field(const OdeSpec& ode, cplx x0, double t,
                       const std::vector<cplx>& grid) {
    PhaseField pf;
    const cplx rot = std::polar(1.0, t);
    for (cplx y : grid) pf.samples.push_back({y, rot * ode.q1(y, x0)});
    const ComplexPoly dP0 = ode.P[0].derivative();
    for (cplx p : ode.roots.roots) {
        Equilibrium eq;
        eq.p = p;
        eq.indicator = (rot * dP0.eval(p)).real();
        const double tol = 1e-9 * std::max(1.0, std::abs(dP0.eval(p)));
        eq.stability = (std::abs(eq.indicator) <= tol)
                           ? "marginal"
                           : (eq.indicator < 0 ? "attracting" : "repelling");
        pf.equilibria.push_back(eq);
    }
    return pf;
}

} // namespace asymcom
