#pragma once

#include <array>

#include "qpencil/errors.hpp"
#include "qpencil/scalar.hpp"

namespace qp {

// Homogeneous coordinate of P^1, stored canonically normalized: the
// coordinate of largest modulus (lowest index on ties) equals 1 exactly.
struct ProjPoint1 {
    Complex u{0}, v{1};  // point (u : v), affine value u/v

    ProjPoint1() = default;
    explicit ProjPoint1(const Complex& affine) : u(affine), v(1) { normalize(); }
    ProjPoint1(const Complex& u_, const Complex& v_) : u(u_), v(v_) { normalize(); }

    static ProjPoint1 infinity() { return ProjPoint1(Complex(1), Complex(0)); }

    bool is_finite(Real tol = 1e-13) const { return std::abs(v) > tol * std::abs(u); }
    // Affine value u/v; only meaningful for finite points.
    Complex affine() const;

    void normalize();
};

Real chordal(const ProjPoint1& a, const ProjPoint1& b);

// Homogeneous point of P^3, canonically normalized like ProjPoint1.
struct ProjPoint3 {
    std::array<Complex, 4> x{Complex(0), Complex(0), Complex(0), Complex(1)};

    ProjPoint3() = default;
    ProjPoint3(const Complex& x1, const Complex& x2, const Complex& x3, const Complex& x4)
        : x{x1, x2, x3, x4} {
        normalize();
    }
    explicit ProjPoint3(const std::array<Complex, 4>& coords) : x(coords) { normalize(); }

    const Complex& operator[](int i) const { return x[static_cast<size_t>(i)]; }

    void normalize();
};

// Chordal (Fubini-Study sine) distance, computed through the wedge product
// so nearly-equal points do not lose half the digits to cancellation.
Real chordal(const ProjPoint3& a, const ProjPoint3& b);

// P^1 x P^1 -> P^3, affine (x, y) -> [x : y : xy : 1].
ProjPoint3 segre_embed(const ProjPoint1& x, const ProjPoint1& y);

}  // namespace qp
