#pragma once

#include <vector>

#include "qpencil/scalar.hpp"

namespace qp {

// Dense univariate polynomial over Complex, coefficient c[k] on lambda^k.
// Small degrees only (the pencil determinant has degree <= 4).
struct Poly {
    std::vector<Complex> c;

    Poly() = default;
    explicit Poly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {}
    static Poly constant(Complex v) { return Poly({v}); }
    // a + b*lambda
    static Poly linear(Complex a, Complex b) { return Poly({a, b}); }

    // Degree after discarding numerically negligible leading coefficients
    // (relative to the largest coefficient). -1 for the zero polynomial.
    int degree(Real rel_tol = 1e-12) const;
    Real max_coeff() const;

    Complex eval(const Complex& lambda) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
};

// Roots of p (affine ones only), via the companion matrix of the
// monic normalization at the numerically detected degree.
std::vector<Complex> poly_roots(const Poly& p, Real rel_tol = 1e-12);

}  // namespace qp
