#include "asymcom/inversion.hpp"

#include <cmath>

namespace asymcom {

std::string region_tag(const OdeSpec& ode, cplx x, cplx y, double R0,
                       double eps_near) {
    const double d = distance_to_roots(y, ode.roots);
    if (d < eps_near) return "near-root";
    if (d >= ode.eps_root && std::abs(x) >= R0) return "r-domain";
    return "unknown";
}

cplx constant_from_ic(const ConstantSeries& s, cplx x0, cplx y0) {
    FContinuation fc(s);
    fc.move_to(y0);
    return eval_C(s, x0, BranchState::principal(x0), fc.state());
}

namespace {

// dC/dy at fixed x.
cplx dC_dy(const ConstantSeries& s, cplx x, const FVector& F) {
    cplx g = 0.0, xk = 1.0;
    for (int k = 0; k <= s.n; ++k) {
        g += F.dF[(size_t)k] / xk;
        xk *= x;
    }
    return g;
}

} // namespace

cplx newton_invert(const ConstantSeries& s, FContinuation& fc, cplx x,
                   const BranchState& bx, cplx K) {
    const double pi2 = 2.0 * std::acos(-1.0);
    const std::vector<double> turn0 = fc.root_turns();
    cplx G = eval_C(s, x, bx, fc.state()) - K;
    for (int it = 0; it < 50; ++it) {
        if (std::abs(G) <= 1e-10) {
            for (size_t j = 0; j < turn0.size(); ++j)
                if (std::abs(fc.root_turns()[j] - turn0[j]) >= pi2)
                    throw JumpedBranch("Newton iterates wound around a root");
            return fc.state().y;
        }
        const cplx dG = dC_dy(s, x, fc.state());
        if (std::abs(dG) < 1e-300)
            throw NewtonDiverged("vanishing derivative in newton_invert");
        cplx step = -G / dG;
        bool accepted = false;
        for (int h = 0; h <= 8; ++h) {
            FContinuation trial = fc;
            trial.move_to(fc.state().y + step);
            const cplx Gt = eval_C(s, x, bx, trial.state()) - K;
            if (std::abs(Gt) < std::abs(G) || std::abs(Gt) <= 1e-10) {
                fc = std::move(trial);
                G = Gt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) throw NewtonDiverged("damping failed to reduce |G|");
    }
    throw NewtonDiverged("newton_invert exceeded 50 iterations");
}

std::vector<TrajectorySample> continue_trajectory(const ConstantSeries& s,
                                                  const Path& xpath, cplx y0,
                                                  const cplx* K_pinned) {
    if (xpath.nodes.size() < 2)
        throw MathError("BadPath", "trajectory path needs at least two nodes");
    std::vector<TrajectorySample> out;
    const cplx x0 = xpath.nodes.front();
    const cplx K = K_pinned ? *K_pinned : constant_from_ic(s, x0, y0);

    FContinuation fc(s);
    fc.move_to(y0);
    BranchState bx = BranchState::principal(x0);
    if (K_pinned) newton_invert(s, fc, x0, bx, K);
    out.push_back({x0, fc.state().y, eval_C(s, x0, bx, fc.state()),
                   region_tag(s.ode, x0, fc.state().y)});

    for (size_t seg = 0; seg + 1 < xpath.nodes.size(); ++seg) {
        const cplx xa = xpath.nodes[seg], xb = xpath.nodes[seg + 1];
        if (std::abs(xb - xa) == 0.0) continue;
        double t = 0.0, dt = 0.05;
        cplx xcur = xa;
        while (t < 1.0) {
            dt = std::min(dt, 1.0 - t);
            cplx xnext, dy;
            for (;;) {
                xnext = xa + (t + dt) * (xb - xa);
                dy = s.ode.q1(fc.state().y, xcur) * (xnext - xcur);
                if (std::abs(dy) <= 0.2 * distance_to_roots(fc.state().y, s.ode.roots))
                    break;
                dt *= 0.5;
                if (dt < 1e-8)
                    throw StepTooLarge("cannot keep |dy| small near a root");
            }
            BranchState bnext = bx;
            bnext.advance(xnext);
            FContinuation trial = fc;
            trial.move_to(fc.state().y + dy);
            newton_invert(s, trial, xnext, bnext, K);
            fc = std::move(trial);
            bx = bnext;
            xcur = xnext;
            t += dt;
            dt = std::min(dt * 1.5, 0.05);
            out.push_back({xcur, fc.state().y, eval_C(s, xcur, bx, fc.state()),
                           region_tag(s.ode, xcur, fc.state().y)});
        }
    }
    return out;
}

} // namespace asymcom
