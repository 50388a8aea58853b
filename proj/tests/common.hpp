#pragma once
#include "asymcom/comotion.hpp"
#include "asymcom/ode.hpp"

#include <cmath>

namespace testutil {

using namespace asymcom;

// y' = -3y^3 + 1/9 - y/(5x)
inline OdeSpec make_abel(int n) {
    return OdeSpec({ComplexPoly(std::vector<cplx>{1.0 / 9, 0.0, 0.0, -3.0}),
                    ComplexPoly(std::vector<cplx>{0.0, -0.2})},
                   n);
}

// y' = y^2 + 1
inline OdeSpec make_riccati(int n) {
    return OdeSpec({ComplexPoly(std::vector<cplx>{1.0, 0.0, 1.0})}, n);
}

// y' = -y
inline OdeSpec make_linear(int n) {
    return OdeSpec({ComplexPoly(std::vector<cplx>{0.0, -1.0})}, n);
}

inline int abel_root_index(const OdeSpec& ode, cplx target) {
    int best = 0;
    double d = 1e300;
    for (size_t j = 0; j < ode.roots.roots.size(); ++j) {
        const double dj = std::abs(ode.roots.roots[j] - target);
        if (dj < d) { d = dj; best = (int)j; }
    }
    return best;
}

inline int abel_third_index(const OdeSpec& ode) { return abel_root_index(ode, cplx(1.0 / 3)); }

inline const double SQRT3 = std::sqrt(3.0);
inline const double PI = std::acos(-1.0);

// closed forms for the Abel equation (real y > 1/3, principal branches)
inline double abel_F0_closed(double y) {
    return SQRT3 * std::atan((6 * y + 1) / SQRT3) - std::log(3 * y - 1) +
           0.5 * std::log(9 * y * y + 3 * y + 1);
}
inline double abel_F1_closed(double y) {
    return 0.1 * (54 * y * y / (1 - 27 * y * y * y) -
                  4 * SQRT3 * std::atan((6 * y + 1) / SQRT3)) +
           1.0 / 25;
}
// singular-domain closed forms, normalised so F_k -> 0 as y -> +infinity
inline double abel_F0_sing_closed(double y) {
    return -SQRT3 * std::atan((6 * y + 1) / SQRT3) + std::log(3 * y - 1) -
           0.5 * std::log(9 * y * y + 3 * y + 1) + SQRT3 * PI / 2;
}
inline double abel_F1_sing_closed(double y) {
    // closed-form antiderivative minus its value at infinity
    // (sqrt(3) pi / 10), which the x_sing formula itself requires
    return (-54 * y * y / (1 - 27 * y * y * y) +
            2 * SQRT3 * std::atan((6 * y + 1) / SQRT3) + 2 * std::log(3 * y - 1) -
            std::log(9 * y * y + 3 * y + 1)) /
               10.0 -
           SQRT3 * PI / 10;
}

} // namespace testutil
