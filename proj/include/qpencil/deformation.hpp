#pragma once

#include <optional>

#include "qpencil/quadrics.hpp"
#include "qpencil/uniformization.hpp"

namespace qp {

// Which coordinate the homogeneous deformation rewrites: v1 applies when
// Q_inf is free of X3 (dA1, dD4, dA0, qA0), v2 when it is free of X1 (qA1).
enum class LVersion { v1, v2 };

struct DeformationSpec {
    FamilyTag family;
    LVersion version;
    Complex step;                  // delta or q
    std::optional<Complex> kappa;  // needed to evaluate lambda for q-families
};

DeformationSpec deformation_spec(FamilyTag family, const Complex& step,
                                 std::optional<Complex> kappa = {});

// The fiber-shifting map on homogeneous coordinates: sends Q_lambda(p) to
// Q_lambda(shift(p, 2)) and fixes the base curve pointwise (off X4 = 0 for
// v1, off X2 = 0 for v2). The input must lie on its fiber.
ProjPoint3 L_homogeneous(const DeformationSpec& spec, const QuadricPencil& pencil,
                         const UniformParam& p, const ProjPoint3& X);

struct ChartStep {
    ProjPoint1 x, y;
    UniformParam param;
};

// L in pencil-adapted coordinates (two half-steps).
ChartStep L_chart(const DeformationSpec& spec, const UniformParam& p, const ProjPoint1& x,
                  const ProjPoint1& y);

enum class FactorKind { L1, R1, L2, R2 };

// One half-step factor of L: L1/R1 rewrite y, L2/R2 rewrite x. L1 = R1 and
// L2 = R2 for every family except qA0.
ChartStep factor_map(const DeformationSpec& spec, FactorKind which, const UniformParam& p,
                     const ProjPoint1& x, const ProjPoint1& y);

}  // namespace qp
