#ifndef ASYMCOM_POLY_HPP
#define ASYMCOM_POLY_HPP

#include <complex>
#include <vector>

namespace asymcom {

using cplx = std::complex<double>;

// Polynomial with complex coefficients, stored ascending by degree.
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{cplx(0.0)} {}
    ComplexPoly(std::initializer_list<cplx> ascending) : coeffs_(ascending) { trim(); }
    explicit ComplexPoly(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) { trim(); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx(0.0); }
    cplx leading() const { return coeffs_.back(); }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    cplx eval(cplx y) const {
        cplx r = coeffs_.back();
        for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
            r = r * y + *it;
        return r;
    }

    ComplexPoly derivative() const {
        if (coeffs_.size() == 1) return ComplexPoly{};
        std::vector<cplx> d(coeffs_.size() - 1);
        for (size_t k = 1; k < coeffs_.size(); ++k)
            d[k - 1] = coeffs_[k] * double(k);
        return ComplexPoly(std::move(d));
    }

    double max_coeff() const;

private:
    void trim();
    std::vector<cplx> coeffs_;
};

struct RootSet {
    std::vector<cplx> roots;
    double min_separation = 0.0;
};

// All roots of p via simultaneous (Durand-Kerner) iteration, with simplicity
// verified through a lower bound on |p'(root)|. Throws MultipleRoot or
// NoConvergence.
RootSet poly_roots(const ComplexPoly& p, double tol = 1e-13);

// Residue of num/den (pole_order 1) or num/den^2 (pole_order 2) at a simple
// root of den.
cplx residue(const ComplexPoly& num, cplx den_root, const ComplexPoly& den, int pole_order);

double distance_to_roots(cplx y, const RootSet& roots);

} // namespace asymcom

#endif
