#include "qpencil/deformation.hpp"

#include "qpencil/errors.hpp"

namespace qp {

DeformationSpec deformation_spec(FamilyTag family, const Complex& step,
                                 std::optional<Complex> kappa) {
    if (is_multiplicative(family) && step == Complex(0))
        throw DegenerateParameter("deformation_spec: q must be nonzero");
    const LVersion v = (family == FamilyTag::qA1) ? LVersion::v2 : LVersion::v1;
    return DeformationSpec{family, v, step, kappa};
}

ProjPoint3 L_homogeneous(const DeformationSpec& spec, const QuadricPencil& pencil,
                         const UniformParam& p, const ProjPoint3& X) {
    const Complex lam = lambda_of(p, spec.kappa);
    const Complex q0 = eval_quadric(pencil.m0, X);
    const Complex qi = eval_quadric(pencil.mInf, X);
    const Real scale = std::max({std::abs(q0), std::abs(lam * qi),
                                 pencil.m0.frobenius() * 1e-4});
    if (std::abs(q0 - lam * qi) > 1e-8 * scale)
        throw OffPencilFiber("L_homogeneous: input not on Q_lambda(p), residual " +
                             std::to_string(std::abs(q0 - lam * qi) / scale));

    const Complex lam_hat = lambda_of(shift(p, 2), spec.kappa);
    const Complex corr = (lam_hat - lam) * qi;

    std::array<Complex, 4> out;
    if (spec.version == LVersion::v1) {
        out = {X[0] * X[3], X[1] * X[3], X[2] * X[3] - corr, X[3] * X[3]};
    } else {
        out = {X[0] * X[1] + corr, X[1] * X[1], X[1] * X[2], X[1] * X[3]};
    }
    Real maxmod = 0;
    for (const auto& c : out) maxmod = std::max(maxmod, std::abs(c));
    if (maxmod < 1e-13)
        throw CollapsedImage("L_homogeneous: image vanishes (base point on the excluded plane)");
    return ProjPoint3(out);
}

namespace {

struct XY {
    ProjPoint1 x, y;
};

// All chart maps are affine-linear or Moebius in one variable and are
// evaluated with homogeneous output so poles pass through cleanly.
XY chart_l(const DeformationSpec& spec, const Complex& v, const ProjPoint1& x,
           const ProjPoint1& y) {
    const Complex d = spec.step;
    auto ax = [&]() { return x.affine(); };
    auto ay = [&]() { return y.affine(); };
    switch (spec.family) {
        case FamilyTag::dA1:
        case FamilyTag::dD4: {
            const Complex t = d / v * (ax() + ay());
            return {ProjPoint1(ax() + t), ProjPoint1(ay() + t)};
        }
        case FamilyTag::dA0: {
            const Complex t = d / v * (ax() - ay());
            return {ProjPoint1(ax() + t), ProjPoint1(ay() - t)};
        }
        case FamilyTag::qA1: {
            const Complex q2 = d * d, w2 = v * v;
            // x_hat = ((q2 w2 - 1) x y - (q2 - 1) w2) / ((w2 - 1) y)
            const ProjPoint1 xh((q2 * w2 - Complex(1)) * ax() * ay() - (q2 - Complex(1)) * w2,
                                (w2 - Complex(1)) * ay());
            // y_hat = q2 (w2 - 1) y / (q2 w2 - 1 - (q2 - 1) x y)
            const ProjPoint1 yh(q2 * (w2 - Complex(1)) * ay(),
                                q2 * w2 - Complex(1) - (q2 - Complex(1)) * ax() * ay());
            return {xh, yh};
        }
        case FamilyTag::qA0: {
            const Complex c = (Complex(1) - Complex(1) / (d * d)) / (v * v - Complex(1));
            return {ProjPoint1(ax() + c * (ax() - v * ay())),
                    ProjPoint1(ay() + c * (ay() - v * ax()))};
        }
    }
    throw Error("chart_l: unknown family");
}

}  // namespace

ChartStep L_chart(const DeformationSpec& spec, const UniformParam& p, const ProjPoint1& x,
                  const ProjPoint1& y) {
    const Complex v = p.pos();
    if (!is_multiplicative(spec.family) && std::abs(v) < 1e-12)
        throw ChartDegenerate("L_chart: nu = 0");
    if (is_multiplicative(spec.family) && std::abs(v * v - Complex(1)) < 1e-12)
        throw ChartDegenerate("L_chart: w^2 = 1");
    const XY out = chart_l(spec, v, x, y);
    return {out.x, out.y, shift(p, 2)};
}

ChartStep factor_map(const DeformationSpec& spec, FactorKind which, const UniformParam& p,
                     const ProjPoint1& x, const ProjPoint1& y) {
    const Complex v = p.pos();
    if (!is_multiplicative(spec.family) && std::abs(v) < 1e-12)
        throw ChartDegenerate("factor_map: nu = 0");
    if (is_multiplicative(spec.family) && std::abs(v * v - Complex(1)) < 1e-12)
        throw ChartDegenerate("factor_map: w^2 = 1");

    const Complex d = spec.step;
    const bool moves_x = (which == FactorKind::L2 || which == FactorKind::R2);
    const Complex xa = x.affine(), ya = y.affine();
    ProjPoint1 nx = x, ny = y;
    switch (spec.family) {
        case FamilyTag::dA1:
        case FamilyTag::dD4: {
            const Complex t = d / v * (xa + ya);
            if (moves_x) nx = ProjPoint1(xa + t);
            else ny = ProjPoint1(ya + t);
            break;
        }
        case FamilyTag::dA0: {
            if (moves_x) nx = ProjPoint1(xa + d / v * (xa - ya));
            else ny = ProjPoint1(ya + d / v * (ya - xa));
            break;
        }
        case FamilyTag::qA1: {
            const Complex q2 = d * d, w2 = v * v;
            if (moves_x) {
                nx = ProjPoint1((q2 * w2 - Complex(1)) * xa * ya - (q2 - Complex(1)) * w2,
                                (w2 - Complex(1)) * ya);
            } else {
                ny = ProjPoint1(q2 * (w2 - Complex(1)) * ya,
                                q2 * w2 - Complex(1) - (q2 - Complex(1)) * xa * ya);
            }
            break;
        }
        case FamilyTag::qA0: {
            const Complex c = (Complex(1) - Complex(1) / (d * d)) / (v * v - Complex(1));
            // The left factors carry the extra q on the cross term; the right
            // ones do not. This family is the one with L1 != R1, L2 != R2.
            switch (which) {
                case FactorKind::L2: nx = ProjPoint1(xa + c * (xa - d * v * ya)); break;
                case FactorKind::R2: nx = ProjPoint1(xa + c * (xa - v * ya)); break;
                case FactorKind::L1: ny = ProjPoint1(ya + c * (ya - d * v * xa)); break;
                case FactorKind::R1: ny = ProjPoint1(ya + c * (ya - v * xa)); break;
            }
            break;
        }
    }
    return {nx, ny, shift(p, 1)};
}

}  // namespace qp
