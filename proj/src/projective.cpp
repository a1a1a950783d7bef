#include "qpencil/projective.hpp"

#include <cmath>

namespace qp {

void ProjPoint1::normalize() {
    const Real au = std::abs(u), av = std::abs(v);
    if (au == 0 && av == 0) throw Error("ProjPoint1: zero coordinate vector");
    if (au >= av) {
        v /= u;
        u = 1;
    } else {
        u /= v;
        v = 1;
    }
}

Complex ProjPoint1::affine() const { return u / v; }

Real chordal(const ProjPoint1& a, const ProjPoint1& b) {
    const Real na = std::sqrt(std::norm(a.u) + std::norm(a.v));
    const Real nb = std::sqrt(std::norm(b.u) + std::norm(b.v));
    return std::abs(a.u * b.v - a.v * b.u) / (na * nb);
}

void ProjPoint3::normalize() {
    int pivot = 0;
    Real best = -1;
    for (int i = 0; i < 4; ++i) {
        const Real m = std::abs(x[static_cast<size_t>(i)]);
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    if (best == 0) throw Error("ProjPoint3: zero coordinate vector");
    const Complex p = x[static_cast<size_t>(pivot)];
    for (int i = 0; i < 4; ++i)
        if (i != pivot) x[static_cast<size_t>(i)] /= p;
    x[static_cast<size_t>(pivot)] = 1;
}

Real chordal(const ProjPoint3& a, const ProjPoint3& b) {
    Real wedge2 = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            wedge2 += std::norm(a[i] * b[j] - a[j] * b[i]);
    Real na2 = 0, nb2 = 0;
    for (int i = 0; i < 4; ++i) {
        na2 += std::norm(a[i]);
        nb2 += std::norm(b[i]);
    }
    return std::sqrt(wedge2 / (na2 * nb2));
}

ProjPoint3 segre_embed(const ProjPoint1& x, const ProjPoint1& y) {
    // [u_x v_y : v_x u_y : u_x u_y : v_x v_y]
    return ProjPoint3(x.u * y.v, x.v * y.u, x.u * y.u, x.v * y.v);
}

}  // namespace qp
