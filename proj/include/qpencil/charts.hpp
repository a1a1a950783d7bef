#pragma once

#include <optional>

#include "qpencil/quadrics.hpp"
#include "qpencil/uniformization.hpp"

namespace qp {

// The Segre quadric X1X2 - X3X4 and the family's companion form spanning its
// Q-pencil. These depend only on the family tag (and kappa); the base-point
// parameters enter elsewhere.
SymQuadForm segre_quadric();
SymQuadForm family_q_infinity(FamilyTag t, std::optional<Complex> kappa = {});
QuadricPencil family_pencil(FamilyTag t, std::optional<Complex> kappa = {});

// Normalizing chart of the fiber Q_lambda(p): X = A * (x, y, xy, 1) maps
// P^1 x P^1 onto the fiber, with A^T M_lambda A = scale * M0 (scale = 1 for
// all families except qA0, where scale = w/kappa). Verified at construction.
struct ChartMatrix {
    Mat4 a;
    Mat4 a_inv;
    UniformParam param;
    FamilyTag family;
    std::optional<Complex> kappa;
    Complex scale;
};

ChartMatrix chart_matrix(FamilyTag family, const UniformParam& p,
                         std::optional<Complex> kappa = {});

ProjPoint3 phi(const ChartMatrix& chart, const ProjPoint1& x, const ProjPoint1& y);

struct ChartCoords {
    ProjPoint1 x, y;
    Real residual;  // |Y1 Y2 - Y3 Y4| / max|Y|^2, distance of A^{-1}X from the Segre cone
};

ChartCoords phi_inverse(const ChartMatrix& chart, const ProjPoint3& X);

// lambda = Q0(X) / QInf(X). Throws OnBaseQuadric when both forms vanish and
// InfiniteLambda when only QInf does.
Complex lambda_from_point(const QuadricPencil& pencil, const ProjPoint3& X,
                          Real tol = 1e-12);

}  // namespace qp
