#pragma once
#include "comotion.hpp"
#include <vector>

namespace asymcom {

// Constant of motion anchored at y = infinity along a fixed ray:
//   C~ = x + F_0(y) + sum_k F_k(y) x^{-k},  F_k -> 0 as y -> infinity.
struct SingularSeries {
    ConstantSeries series;   // kind = Singular, base at Y_max * direction
    cplx direction{1.0};     // unit ray direction
    int q = 0;               // decay exponent of |P_k/P_0| on the ray
    double Y_max = 1e3;      // where numerical integration hands over to the tail
    int m0 = 0;              // degree of P_0
};

struct SingularityReport {
    cplx x_sing{};
    std::vector<int> branch_shift;  // period multiples per root
    int order_used = 0;
    cplx x0{}, y0{};                // data the prediction came from
    bool shot = false;              // an RK verification was run
    bool verified = false;          // blow-up found close to the prediction
    double digits = 0.0;            // agreement: -log10(|x_blow - x_sing| / |x_sing|)
    cplx x_blow{};
};

SingularSeries build_singular(const OdeSpec& ode, cplx direction, int n,
                              double Y_max = 1e3);

// x_sing = x0 + F_0(y0) + sum_{k<=n} F_k(y0)/x0^k, with F continued from the
// ray base to y0 around the roots of P0.
SingularityReport locate_singularity(const SingularSeries& sing, cplx x0, cplx y0);

// Per-root periods of F_0 + sum F_k/x0^k (loop monodromy of the singular
// system started from the continued values near each root).
std::vector<cplx> singular_periods(const SingularSeries& sing, cplx x0, cplx y0);

std::vector<SingularityReport> singularity_array(const SingularSeries& sing,
                                                 cplx x0, cplx y0,
                                                 const std::vector<std::vector<int>>& shifts);

// Shoot the truncated ODE from (x0, y0) toward x_sing; confirm when |y| blows
// past 1e6 near the predicted point. A branch-shifted prediction lives on the
// sheet reached by the corresponding winding, so the shoot must follow a path
// that realises the shift: pass intermediate x nodes via `waypoints` (the
// final leg still overshoots the prediction by 5%).
SingularityReport verify_singularity(const OdeSpec& ode, SingularityReport report,
                                     double rk_tol = 1e-10,
                                     const std::vector<cplx>& waypoints = {});

// Waypoints that realise a branch shift for the shoot: first run x in the
// direction where y settles onto the shifted root (Re(P0'(p) dx) < 0), then
// translate by the predicted period offset before closing in on the target.
std::vector<cplx> verification_waypoints(const OdeSpec& ode,
                                         const SingularityReport& base,
                                         const SingularityReport& shifted);

} // namespace asymcom
