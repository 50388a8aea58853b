#pragma once
#include "ode.hpp"
#include "path.hpp"
#include "rk.hpp"
#include <string>
#include <utility>
#include <vector>

namespace asymcom {

// Reference solution of the truncated ODE along a polygonal x path.
struct RkTrajectory {
    std::vector<cplx> xs;
    std::vector<cplx> ys;
    std::vector<cplx> dydx;     // for local Hermite interpolation
    double rel_tol = 0.0, abs_tol = 0.0;
    long rejected = 0;
};

// Formal power-series solution at a simple root p of P0:
//   ytilde(x) = p + sum_{k=1..M} b_k x^{-k}
// and the linearization of the deviation:  delta' = (mu + nu/x) delta,
// so the decaying solution behaves like x^nu e^{mu x}.
struct RootExpansion {
    cplx p{};
    std::vector<cplx> b;   // b[k-1] = b_k
    cplx mu{}, nu{};
};

struct TransseriesFit {
    cplx C_trans{};
    std::pair<size_t, size_t> window;  // sample index range [first, last)
    double stability = 0.0;            // relative spread of per-sample estimates
};

enum class RegionKind { NearRoot, RDomain, Unknown };

struct RegionTag {
    RegionKind kind = RegionKind::Unknown;
    int root_index = -1;
    std::string name() const {
        switch (kind) {
            case RegionKind::NearRoot: return "near-root";
            case RegionKind::RDomain: return "r-domain";
            default: return "unknown";
        }
    }
};

struct Equilibrium {
    cplx p{};
    double indicator = 0.0;   // Re(e^{it} P0'(p))
    std::string stability;    // "attracting", "repelling" or "marginal"
};

struct PhaseField {
    std::vector<std::pair<cplx, cplx>> samples;  // (y, field value)
    std::vector<Equilibrium> equilibria;
};

// Adaptive Runge-Kutta along the path; throws BlowupDetected (with the last
// x reached) if |y| exceeds 1e6.
RkTrajectory rk_integrate(const OdeSpec& ode, const Path& xpath, cplx y0,
                          double tol = 1e-10);

// Hermite interpolation of y between recorded samples, parametrised by the
// sample bracket containing x (nearest segment along the path).
cplx rk_interpolate(const RkTrajectory& t, size_t seg, double frac);

// y at arclength position s along the path, with t_params = the precomputed
// arclength positions of the trajectory samples (see path_params).
cplx rk_value_at(const RkTrajectory& t, const std::vector<double>& t_params, double s);

RootExpansion power_series_at_root(const OdeSpec& ode, cplx p, int M);

cplx root_expansion_eval(const RootExpansion& e, cplx x);

// Per-sample estimate C(x) = (y - ytilde(x)) x^{-nu} e^{-mu x} over the
// window, reported as the componentwise median; the power of x follows the
// continuous branch along the trajectory.
TransseriesFit transseries_fit(const RootExpansion& e, const RkTrajectory& traj,
                               std::pair<size_t, size_t> window);

RegionTag detect_region(const OdeSpec& ode, cplx x, cplx y,
                        double eps_near = 0.05, double R0 = 10.0);

// Real 2-D vector field of the flow along the ray x = x0 + s e^{it}, sampled
// at s = 0, with equilibria at the roots of P0 classified by Re(e^{it}P0'(p)).
PhaseField phase_field(const OdeSpec& ode, cplx x0, double t,
                       const std::vector<cplx>& grid);

} // namespace asymcom
