#ifndef ASYMCOM_RK_HPP
#define ASYMCOM_RK_HPP

#include "asymcom/errors.hpp"
#include "asymcom/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace asymcom {

using State = std::vector<cplx>;

struct RkOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 0.0;        // 0 = automatic
    double h_min = 1e-13;       // relative to interval length
    long max_steps = 4000000;
};

struct RkStep {
    double t;
    State y;
    State dydt;
};

// Adaptive Dormand-Prince 5(4) over a complex vector state on t in [t0, t1].
// deriv(t, y, dydt); stop (optional) halts integration after an accepted
// step.  Returns true if stopped early.  trace (optional) records accepted
// steps including the initial point.
template <typename Deriv>
bool rk_adaptive(Deriv&& deriv, double t0, double t1, State& y, const RkOptions& opt,
                 std::vector<RkStep>* trace = nullptr,
                 const std::function<bool(double, const State&)>& stop = nullptr,
                 long* rejected = nullptr) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th-order weights (b*) for the embedded error estimate.
    static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                        e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const size_t n = y.size();
    const double span = t1 - t0;
    if (span == 0.0) return false;

    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
    double t = t0;
    deriv(t, y, k1);
    if (trace) trace->push_back({t, y, k1});

    double h = (opt.h_init > 0.0 ? opt.h_init : 0.05 * std::abs(span));
    h = std::min(h, std::abs(span));
    const double hmin = opt.h_min * std::abs(span);
    const double dir = (span > 0.0 ? 1.0 : -1.0);

    for (long step = 0; step < opt.max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return false;
        h = std::min(h, std::abs(t1 - t));
        const double hs = h * dir;

        for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        deriv(t + c2 * hs, ytmp, k2);
        for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        deriv(t + c3 * hs, ytmp, k3);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        deriv(t + c4 * hs, ytmp, k4);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        deriv(t + c5 * hs, ytmp, k5);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                   a65 * k5[i]);
        deriv(t + hs, ytmp, k6);
        for (size_t i = 0; i < n; ++i)
            y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        deriv(t + hs, y5, k7);

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            cplx y4 = y[i] + hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(y5[i] - y4) / sc);
        }

        if (err <= 1.0) {
            t += hs;
            y = y5;
            k1 = k7; // FSAL
            if (trace) trace->push_back({t, y, k1});
            if (stop && stop(t, y)) return true;
            double fac = (err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2));
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            if (rejected) ++*rejected;
            double fac = 0.9 * std::pow(err, -0.2);
            h *= std::clamp(fac, 0.1, 0.9);
            if (h < hmin) throw StepUnderflow("step size underflow in rk_adaptive");
        }
    }
    throw StepFailure("rk_adaptive exceeded max_steps");
}

} // namespace asymcom

#endif
