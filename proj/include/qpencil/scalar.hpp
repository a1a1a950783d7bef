#pragma once

#include <complex>
#include <cmath>

namespace qp {

// Scalar backend. Everything downstream goes through these aliases so a
// higher-precision type can be swapped in at one place.
using Real = double;
using Complex = std::complex<Real>;

inline constexpr Real kDefaultRelTol = 1e-9;

inline Real mod(const Complex& z) { return std::abs(z); }

// Mixed absolute/relative closeness: |a-b| <= tol * (1 + max(|a|,|b|)).
inline bool near(const Complex& a, const Complex& b, Real tol = kDefaultRelTol) {
    return std::abs(a - b) <= tol * (Real(1) + std::max(std::abs(a), std::abs(b)));
}

// Integer power by repeated squaring; k may be negative.
inline Complex int_pow(Complex base, long long k) {
    if (k < 0) { base = Complex(1) / base; k = -k; }
    Complex out(1);
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

}  // namespace qp
