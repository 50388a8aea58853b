#pragma once
#include "comotion.hpp"
#include <string>
#include <vector>

namespace asymcom {

struct TrajectorySample {
    cplx x{};
    cplx y{};
    cplx K_check{};       // value of the constant at this sample
    std::string region;   // "r-domain", "near-root" or "unknown"
};

// Geometric region tag: near-root when y is within eps_near of a root of P0,
// r-domain when it clears eps_root and |x| >= R0.
std::string region_tag(const OdeSpec& ode, cplx x, cplx y,
                       double R0 = 10.0, double eps_near = 0.05);

// The value K = C_n(x0, y0), continued from the series base point.
cplx constant_from_ic(const ConstantSeries& s, cplx x0, cplx y0);

// Solve C_n(x, y) = K for y by damped Newton iteration starting from the
// state of fc (which must sit at the initial guess).  On success fc sits at
// the solution.  Throws NewtonDiverged or JumpedBranch.
cplx newton_invert(const ConstantSeries& s, FContinuation& fc, cplx x,
                   const BranchState& bx, cplx K);

// March along the x path, inverting the constant at adaptively chosen
// points; step sizes keep the predicted |dy| under 0.2 x distance-to-root.
// By default K = C_n(x0, y0); a pinned K treats y0 as the Newton seed at x0.
std::vector<TrajectorySample> continue_trajectory(const ConstantSeries& s,
                                                  const Path& xpath, cplx y0,
                                                  const cplx* K_pinned = nullptr);

} // namespace asymcom
