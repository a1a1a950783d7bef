#include "qpencil/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace qp {

Real Poly::max_coeff() const {
    Real m = 0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

int Poly::degree(Real rel_tol) const {
    const Real floor = rel_tol * max_coeff();
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (std::abs(c[static_cast<size_t>(k)]) > floor) return k;
    return -1;
}

Complex Poly::eval(const Complex& lambda) const {
    Complex acc(0);
    for (size_t k = c.size(); k-- > 0;) acc = acc * lambda + c[k];
    return acc;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.c.resize(std::max(c.size(), o.c.size()), Complex(0));
    for (size_t k = 0; k < c.size(); ++k) r.c[k] += c[k];
    for (size_t k = 0; k < o.c.size(); ++k) r.c[k] += o.c[k];
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& v : r.c) v = -v;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (c.empty() || o.c.empty()) return Poly();
    Poly r;
    r.c.assign(c.size() + o.c.size() - 1, Complex(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
}

std::vector<Complex> poly_roots(const Poly& p, Real rel_tol) {
    const int deg = p.degree(rel_tol);
    if (deg <= 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    const Complex lead = p.c[static_cast<size_t>(deg)];
    for (int k = 0; k < deg; ++k) {
        companion(k, deg - 1) = -p.c[static_cast<size_t>(k)] / lead;
        if (k + 1 < deg) companion(k + 1, k) = 1;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(static_cast<size_t>(deg));
    for (int k = 0; k < deg; ++k) roots[static_cast<size_t>(k)] = es.eigenvalues()(k);
    return roots;
}

}  // namespace qp
