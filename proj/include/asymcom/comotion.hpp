#pragma once
#include "ode.hpp"
#include "path.hpp"
#include "rk.hpp"
#include <vector>

namespace asymcom {

enum class SeriesKind { RDomain, Singular };

// The stack of series coefficients F_0..F_m and their derivatives at a point y.
struct FVector {
    cplx y{};
    std::vector<cplx> F;
    std::vector<cplx> dF;
    int levels() const { return (int)F.size(); }
};

// Tracks the continuous argument of x along a trajectory so that log x (and
// noninteger powers of x) stay on one analytic branch.
struct BranchState {
    double arg_x = 0.0;
    cplx last_x{};
    std::vector<double> turns;  // per-root accumulated argument of y - p_j

    static BranchState principal(cplx x0, size_t nroots = 0) {
        BranchState b;
        b.arg_x = std::arg(x0);
        b.last_x = x0;
        b.turns.assign(nroots, 0.0);
        return b;
    }

    void advance(cplx x_next) {
        cplx q = x_next / last_x;
        double d = std::arg(q);
        if (!(std::abs(d) < 3.0)) throw BranchDiscontinuity("x step turns by >= pi");
        arg_x += d;
        last_x = x_next;
    }

    cplx log_x() const { return cplx(std::log(std::abs(last_x)), arg_x); }
    cplx pow_x(cplx e) const { return std::exp(e * log_x()); }
};

// A fully built asymptotic constant of motion:
//   RDomain:  C_n = -x + a log x + sum_{k<=n} F_k(y) x^{-k}
//   Singular: C~n =  x           + sum_{k<=n} F_k(y) x^{-k}
// base_F holds the canonically normalised values at base_y (F_0(base_y) = 0,
// higher levels fixed so every F_k is single-valued around the contour).
// offsets are optional additive constants applied per level at evaluation
// time only; they never enter the recursion.
struct ConstantSeries {
    SeriesKind kind = SeriesKind::RDomain;
    OdeSpec ode;
    cplx a{};
    std::vector<cplx> c;        // reported constants c_1..c_{n-1}
    cplx base_y{};
    Contour contour;
    int n = 2;
    std::vector<cplx> base_F;   // F_0..F_n at base_y
    std::vector<cplx> offsets;  // evaluation-time constants, size n+1
    std::vector<FVector> spine; // cached states along the contour circle
};

// Derivatives F'_0..F'_{m} from the values F_0..F_m via the recursion.
std::vector<cplx> f_derivative(const OdeSpec& ode, SeriesKind kind, cplx a,
                               cplx y, const std::vector<cplx>& F);

// Integrate the F system along a polyline in the y plane (assumed to clear
// the roots of P0 already). Returns the state at every node of the path.
std::vector<FVector> integrate_F(const OdeSpec& ode, SeriesKind kind, cplx a,
                                 const Path& ypath, const std::vector<cplx>& F_start,
                                 const RkOptions& opt = RkOptions{});

// Net change of (F_0..F_m) around the contour, starting the loop at base_y
// with values F_base. Entries are the loop integrals of F'_k.
std::vector<cplx> monodromy(const OdeSpec& ode, SeriesKind kind, cplx a,
                            const std::vector<cplx>& F_base, cplx base_y,
                            const Contour& contour, int circle_nodes = 96);

// a = -(loop integral of P1/P0^2) / (loop integral of 1/P0) over the contour.
cplx solve_a(const OdeSpec& ode, const Contour& contour);

// Trapezoid quadrature of f on circles |y-p_j| = r_j weighted by winding;
// node count is doubled until the value settles below tol.
cplx contour_integral(const std::function<cplx(cplx)>& f, const RootSet& roots,
                      const Contour& contour, double tol = 1e-9);

// Reported constant c_k of the series (the circle average of the canonical
// F_k around the contour root, with the cross-pole sum removed for k = 1).
cplx solve_c(const OdeSpec& ode, const Contour& contour, cplx a, int k);

// Build the full constant of motion: solves a, fixes the canonical values of
// F_1..F_n by killing their monodromy, normalises F_0(base_y) = 0 and
// computes the reported c_1..c_{n-1}.
ConstantSeries build_constant(const OdeSpec& ode, const Contour& contour,
                              cplx base_y, int n);

// Analytic continuation of the F stack along arbitrary y moves, deforming
// each straight leg around the roots of P0.
class FContinuation {
public:
    explicit FContinuation(const ConstantSeries& s);
    FContinuation(const ConstantSeries& s, cplx y0, std::vector<cplx> F0);
    void move_to(cplx y_next);
    const FVector& state() const { return cur_; }
    const std::vector<double>& root_turns() const { return turns_; }
    const ConstantSeries& series() const { return *s_; }
private:
    void track_turns(const Path& leg);
    const ConstantSeries* s_;
    FVector cur_;
    std::vector<double> turns_;
};

// Pin the displayed value of level k at y_anchor; the induced constant is
// stored in offsets[k] and applied by eval_C only.
void anchor_level(ConstantSeries& s, int k, cplx y_anchor, cplx value);

// Evaluate the constant at (x, y) given a continued F stack.
cplx eval_C(const ConstantSeries& s, cplx x, const BranchState& branch,
            const FVector& F);

// Convenience: continue from base_y along y_history (must start at base_y),
// principal branch of log x.
cplx eval_C(const ConstantSeries& s, cplx x, cplx y,
            const std::vector<cplx>& y_history);

// |d/dx C(x, y(x))| along the truncated flow at (x, y): should be
// O(x^{-(n+1)}) when the series is built correctly.
cplx residual(const ConstantSeries& s, cplx x, const FVector& F);
cplx residual_at(const ConstantSeries& s, cplx x, cplx y);

// Supremum over samples of |x residual| scaled by |x|^n: a bounded value
// certifies conservation at the advertised order along the sampled path.
double path_admissibility(const ConstantSeries& s, const std::vector<cplx>& xs,
                          const std::vector<cplx>& ys);

} // namespace asymcom
