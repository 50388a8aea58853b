#include "asymcom/poly.hpp"
#include "asymcom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asymcom {

void ComplexPoly::trim() {
    if (coeffs_.empty()) coeffs_.push_back(cplx(0.0));
    double scale = max_coeff();
    double cut = scale * 1e-300;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= cut)
        coeffs_.pop_back();
}

double ComplexPoly::max_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

RootSet poly_roots(const ComplexPoly& p, double tol) {
    const int n = p.degree();
    if (n < 1) throw DegreeTooLow("poly_roots needs degree >= 1");

    // Monic normalization.
    std::vector<cplx> a(p.coeffs());
    const cplx lead = a.back();
    for (auto& c : a) c /= lead;

    // Cauchy bound for the root radius.
    double R = 0.0;
    for (int k = 0; k < n; ++k) R = std::max(R, std::abs(a[k]));
    R = 1.0 + R;

    // Initial guesses spread on a circle, angle offset to avoid symmetry
    // traps.
    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * M_PI * k / n + 0.397;
        z[k] = 0.7 * R * std::polar(1.0, th);
    }

    auto eval_monic = [&](cplx y) {
        cplx r = 1.0;
        for (int k = n - 1; k >= 0; --k) r = r * y + a[k];
        return r;
    };

    bool converged = false;
    for (int iter = 0; iter < 600; ++iter) {
        double move = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (denom == cplx(0.0)) denom = cplx(1e-300);
            cplx dz = eval_monic(z[k]) / denom;
            z[k] -= dz;
            move = std::max(move, std::abs(dz));
        }
        if (move < tol * R) { converged = true; break; }
    }
    if (!converged) throw NoConvergence("Durand-Kerner did not converge");

    // One Newton polish per root (keeps simple roots at full precision).
    const ComplexPoly dp = p.derivative();
    for (auto& r : z) {
        for (int i = 0; i < 3; ++i) {
            cplx d = dp.eval(r);
            if (std::abs(d) == 0.0) break;
            r -= p.eval(r) / d;
        }
    }

    // Simplicity check per the |P0'(p)| lower bound.
    const double scale = p.max_coeff();
    for (const auto& r : z) {
        double bound = 1e-8 * scale * std::pow(1.0 + std::abs(r), n - 1);
        if (std::abs(dp.eval(r)) < bound)
            throw MultipleRoot("root fails the simplicity threshold");
    }

    std::sort(z.begin(), z.end(), [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });

    RootSet rs;
    rs.roots = std::move(z);
    rs.min_separation = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rs.roots.size(); ++i)
        for (size_t j = i + 1; j < rs.roots.size(); ++j)
            rs.min_separation = std::min(rs.min_separation, std::abs(rs.roots[i] - rs.roots[j]));
    if (rs.roots.size() == 1) rs.min_separation = std::numeric_limits<double>::infinity();
    return rs;
}

cplx residue(const ComplexPoly& num, cplx den_root, const ComplexPoly& den, int pole_order) {
    const ComplexPoly d1 = den.derivative();
    const cplx dp = d1.eval(den_root);
    double bound = 1e-12 * std::max(1.0, den.max_coeff());
    if (std::abs(dp) < bound) throw DegeneratePole("|den'(root)| below threshold");

    if (pole_order == 1)
        return num.eval(den_root) / dp;
    if (pole_order == 2) {
        // Residue of num/den^2 at a simple root of den.
        const cplx d2 = d1.derivative().eval(den_root);
        const cplx np = num.derivative().eval(den_root);
        return np / (dp * dp) - num.eval(den_root) * d2 / (dp * dp * dp);
    }
    throw MathError("BadPoleOrder", "pole_order must be 1 or 2");
}

double distance_to_roots(cplx y, const RootSet& roots) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : roots.roots) d = std::min(d, std::abs(y - p));
    return d;
}

} // namespace asymcom
