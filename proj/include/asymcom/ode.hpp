#pragma once
#include "poly.hpp"
#include "errors.hpp"
#include <vector>

namespace asymcom {

// Right-hand side data for y' = sum_k P_k(y) / x^k, truncated at order n.
struct OdeSpec {
    std::vector<ComplexPoly> P;   // P[0] must be nonconstant
    int n = 2;                    // truncation order of the constant series
    RootSet roots;                // simple roots of P[0]
    double eps_root = 0.0;        // clearance radius around roots of P[0]

    OdeSpec() = default;

    OdeSpec(std::vector<ComplexPoly> polys, int order) : P(std::move(polys)), n(order) {
        if (P.empty() || P[0].degree() < 1) throw DegreeTooLow("P0 must have degree >= 1");
        roots = poly_roots(P[0]);
        double sep = roots.min_separation;
        double scale = 0.0;
        for (auto& r : roots.roots) scale = std::max(scale, std::abs(r));
        sep = std::min(sep, 2.0 * (1.0 + scale));  // finite fallback for a single root
        eps_root = 0.05 * sep;
    }

    const ComplexPoly& P0() const { return P[0]; }

    cplx Pk(int k, cplx y) const {
        return (k >= 0 && k < (int)P.size()) ? P[(size_t)k].eval(y) : cplx(0.0);
    }

    // Truncated right-hand side Q1(y,x) = sum_{k<=n} P_k(y) x^{-k}.
    cplx q1(cplx y, cplx x) const {
        cplx s = 0.0, xk = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k < (int)P.size()) s += P[(size_t)k].eval(y) / xk;
            xk *= x;
        }
        return s;
    }

    cplx q1_dy(cplx y, cplx x) const {
        cplx s = 0.0, xk = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k < (int)P.size()) s += P[(size_t)k].derivative().eval(y) / xk;
            xk *= x;
        }
        return s;
    }
};

} // namespace asymcom
