#include "qpencil/charts.hpp"

namespace qp {

SymQuadForm segre_quadric() {
    return SymQuadForm::from_monomials({{1, 2, Complex(1)}, {3, 4, Complex(-1)}});
}

SymQuadForm family_q_infinity(FamilyTag t, std::optional<Complex> kappa) {
    using T = std::tuple<int, int, Complex>;
    switch (t) {
        case FamilyTag::dA1:
            // (X1+X2)(X1+X2-X4)
            return SymQuadForm::from_monomials({T{1, 1, 1}, T{2, 2, 1}, T{1, 2, 2},
                                                T{1, 4, -1}, T{2, 4, -1}});
        case FamilyTag::dD4:
            // (X1+X2)^2
            return SymQuadForm::from_monomials({T{1, 1, 1}, T{2, 2, 1}, T{1, 2, 2}});
        case FamilyTag::qA1: {
            // (X3 - kappa^2 X4)(X4 - X3): the sign that makes lambda(w), Delta
            // and A_w mutually consistent. Same zero set as the lifted C_inf.
            if (!kappa) throw Error("family_q_infinity(qA1): kappa required");
            const Complex k2 = (*kappa) * (*kappa);
            return SymQuadForm::from_monomials(
                {T{3, 3, -1}, T{3, 4, Complex(1) + k2}, T{4, 4, -k2}});
        }
        case FamilyTag::dA0: {
            // (X1-X2)^2 - 2 kappa^2 (X1+X2) X4
            if (!kappa) throw Error("family_q_infinity(dA0): kappa required");
            const Complex k2 = (*kappa) * (*kappa);
            return SymQuadForm::from_monomials({T{1, 1, 1}, T{2, 2, 1}, T{1, 2, -2},
                                                T{1, 4, -2.0 * k2}, T{2, 4, -2.0 * k2}});
        }
        case FamilyTag::qA0: {
            // kappa(X1^2+X2^2) - (1+kappa^2) X1X2 + (kappa - 1/kappa)^2 X4^2
            if (!kappa) throw Error("family_q_infinity(qA0): kappa required");
            const Complex k = *kappa;
            const Complex s = k - Complex(1) / k;
            return SymQuadForm::from_monomials(
                {T{1, 1, k}, T{2, 2, k}, T{1, 2, -(Complex(1) + k * k)}, T{4, 4, s * s}});
        }
    }
    throw Error("family_q_infinity: unknown family");
}

QuadricPencil family_pencil(FamilyTag t, std::optional<Complex> kappa) {
    return QuadricPencil(segre_quadric(), family_q_infinity(t, kappa));
}

namespace {

void check_not_degenerate(FamilyTag family, const Complex& v) {
    const char* what = nullptr;
    if (is_multiplicative(family)) {
        if (std::abs(v) < 1e-12) what = "w = 0";
        else if (std::abs(v * v - Complex(1)) < 1e-12) what = "w^2 = 1 (branch fiber)";
        else if (std::abs(v) > 1e12) what = "w at infinity";
    } else {
        if (std::abs(v) < 1e-12) what = "nu = 0 (branch fiber)";
        else if (std::abs(v) > 1e12) what = "nu at infinity";
    }
    if (what)
        throw ChartDegenerate(std::string("chart_matrix(") + to_string(family) + "): " + what);
}

Mat4 chart_a(FamilyTag family, const Complex& v, std::optional<Complex> kappa) {
    Mat4 a = Mat4::Zero();
    switch (family) {
        case FamilyTag::dA1: {
            const Complex p = (Complex(1) + v) / (Real(2) * v);
            const Complex q = (Complex(1) - v) / (Real(2) * v);
            const Complex r = (Complex(1) - v * v) / (Real(4) * v);
            a << p, q, 0, 0, q, p, 0, 0, r, r, 1, 0, 0, 0, 0, 1;
            return a;
        }
        case FamilyTag::dD4: {
            const Complex p = (Complex(1) + v) / (Real(2) * v);
            const Complex q = (Complex(1) - v) / (Real(2) * v);
            a << p, q, 0, 0, q, p, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
            return a;
        }
        case FamilyTag::dA0: {
            if (!kappa) throw Error("chart_matrix(dA0): kappa required");
            const Complex p = (v + Complex(1)) / (Real(2) * v);
            const Complex q = (v - Complex(1)) / (Real(2) * v);
            const Complex r = (*kappa) * (*kappa) / Real(2) * (v * v - Complex(1));
            a << p, q, 0, 0, q, p, 0, 0, r, r, 1, 0, 0, 0, 0, 1;
            return a;
        }
        case FamilyTag::qA1: {
            const Complex k = kappa ? *kappa : throw Error("chart_matrix(qA1): kappa required");
            const Complex s = Complex(1) - v * v;
            a << 1, 0, 0, 0, 0, 1, 0, 0,
                0, 0, (Complex(1) - k * v) / s, v * (k - v) / s,
                0, 0, (k - v) / (k * s), v * (Complex(1) - k * v) / (k * s);
            return a;
        }
        case FamilyTag::qA0: {
            const Complex k = kappa ? *kappa : throw Error("chart_matrix(qA0): kappa required");
            const Complex s = k * (Complex(1) - v * v);
            a << v * (Complex(1) - k * v) / s, v * (k - v) / s, 0, 0,
                v * (k - v) / s, v * (Complex(1) - k * v) / s, 0, 0,
                0, 0, v / k, -(Complex(1) - k * v) * (k - v) / (k * k * v),
                0, 0, 0, 1;
            return a;
        }
    }
    throw Error("chart_a: unknown family");
}

}  // namespace

ChartMatrix chart_matrix(FamilyTag family, const UniformParam& p,
                         std::optional<Complex> kappa) {
    if (p.family != family) throw Error("chart_matrix: parameter belongs to another family");
    const Complex v = p.pos();
    check_not_degenerate(family, v);
    if (is_multiplicative(family)) {
        if (!kappa) throw Error("chart_matrix: kappa required");
        const Complex k = *kappa;
        if (std::abs(k) < 1e-12 || std::abs(k * k - Complex(1)) < 1e-12)
            throw ChartDegenerate("chart_matrix: kappa in {0, 1, -1}");
    }

    ChartMatrix chart;
    chart.a = chart_a(family, v, kappa);
    chart.param = p;
    chart.family = family;
    chart.kappa = kappa;
    chart.scale = (family == FamilyTag::qA0) ? v / *kappa : Complex(1);

    Eigen::FullPivLU<Mat4> lu(chart.a);
    if (!lu.isInvertible()) throw ChartDegenerate("chart_matrix: singular normalizing matrix");
    chart.a_inv = lu.inverse();

    // A^T M_lambda A = scale * M0, to 1e-10 relative in Frobenius norm.
    const QuadricPencil pencil = family_pencil(family, kappa);
    const Mat4 m_lambda = pencil.at(lambda_of(p, kappa));
    const Mat4 m0 = pencil.m0.m;
    const Real resid = (chart.a.transpose() * m_lambda * chart.a - chart.scale * m0).norm() /
                       (std::abs(chart.scale) * m0.norm());
    if (resid > 1e-10)
        throw ChartDegenerate("chart_matrix: normalization identity residual " +
                              std::to_string(resid));
    return chart;
}

ProjPoint3 phi(const ChartMatrix& chart, const ProjPoint1& x, const ProjPoint1& y) {
    Vec4 segre;
    segre << x.u * y.v, x.v * y.u, x.u * y.u, x.v * y.v;
    const Vec4 X = chart.a * segre;
    return ProjPoint3(X(0), X(1), X(2), X(3));
}

ChartCoords phi_inverse(const ChartMatrix& chart, const ProjPoint3& X) {
    Vec4 Xv;
    for (int i = 0; i < 4; ++i) Xv(i) = X[i];
    const Vec4 Y = chart.a_inv * Xv;
    Real maxmod = 0;
    for (int i = 0; i < 4; ++i) maxmod = std::max(maxmod, std::abs(Y(i)));
    if (maxmod == 0) throw Error("phi_inverse: zero preimage");

    ChartCoords out;
    out.residual = std::abs(Y(0) * Y(1) - Y(2) * Y(3)) / (maxmod * maxmod);
    // (x : 1) = (Y1 : Y4) or, when both are negligible, the cone-equivalent (Y3 : Y2).
    const Real tiny = 1e-14 * maxmod;
    if (std::abs(Y(0)) > tiny || std::abs(Y(3)) > tiny)
        out.x = ProjPoint1(Y(0), Y(3));
    else
        out.x = ProjPoint1(Y(2), Y(1));
    if (std::abs(Y(1)) > tiny || std::abs(Y(3)) > tiny)
        out.y = ProjPoint1(Y(1), Y(3));
    else
        out.y = ProjPoint1(Y(2), Y(0));
    return out;
}

Complex lambda_from_point(const QuadricPencil& pencil, const ProjPoint3& X, Real tol) {
    const Complex q0 = eval_quadric(pencil.m0, X);
    const Complex qi = eval_quadric(pencil.mInf, X);
    const Real s0 = pencil.m0.frobenius(), si = pencil.mInf.frobenius();
    const bool z0 = std::abs(q0) <= tol * s0;
    const bool zi = std::abs(qi) <= tol * si;
    if (z0 && zi) throw OnBaseQuadric("lambda_from_point: point on the base curve");
    if (zi) throw InfiniteLambda("lambda_from_point: QInf vanishes, lambda at infinity");
    return q0 / qi;
}

}  // namespace qp
