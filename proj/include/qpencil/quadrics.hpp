#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpencil/poly.hpp"
#include "qpencil/projective.hpp"
#include "qpencil/scalar.hpp"

namespace qp {

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

// Quadratic form on P^3 stored as its full-coefficient symmetric matrix
// (the Hessian), Q(X) = 1/2 X^T M X. Off-diagonal entries are the complete
// cross-term coefficients, matching the usual displayed pencil matrices.
struct SymQuadForm {
    Mat4 m = Mat4::Zero();

    SymQuadForm() = default;
    explicit SymQuadForm(const Mat4& sym);  // throws Error unless exactly symmetric

    // Build from monomial coefficients {(i, j, c)} of c * X_i X_j, 1-indexed, i <= j.
    static SymQuadForm from_monomials(
        const std::vector<std::tuple<int, int, Complex>>& terms);

    Real frobenius() const { return m.norm(); }
};

Complex eval_quadric(const SymQuadForm& q, const ProjPoint3& p);

// Gradient pairing: d/dt Q(X + tD) at t=0 (= X^T M D).
Complex eval_quadric_dir(const SymQuadForm& q, const ProjPoint3& p, const Vec4& dir);

struct QuadricPencil {
    SymQuadForm m0, mInf;

    QuadricPencil() = default;
    QuadricPencil(SymQuadForm q0, SymQuadForm qInf, Real tol = kDefaultRelTol);

    Mat4 at(const Complex& lambda) const { return m0.m - lambda * mInf.m; }
};

// Biquadratic curve on P^1 x P^1: coefficients c(j, k) of x^j y^k, j,k in {0,1,2}.
struct BiquadraticForm {
    Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();

    Complex eval(const Complex& x, const Complex& y) const;
    // Directional derivative (dx d/dx + dy d/dy) at (x, y).
    Complex eval_dir(const Complex& x, const Complex& y, const Complex& dx,
                     const Complex& dy) const;
    Eigen::Matrix<Complex, 9, 1> vectorized() const;
    static BiquadraticForm from_vector(const Eigen::Matrix<Complex, 9, 1>& v);
    Real max_coeff() const;
};

enum class PencilClass { i, ii, iii, iv, v, vi };
std::string to_string(PencilClass c);

struct PencilRootInfo {
    ProjPoint1 lambda;  // root of the homogenized characteristic polynomial in P^1
    int multiplicity = 0;
    int corank = 0;
};

struct PencilType {
    PencilClass tag;
    std::string segre;
    std::vector<PencilRootInfo> root_data;  // multiplicities over P^1 sum to 4
};

// det(M0 - lambda * MInf), expanded exactly by cofactor expansion in the
// polynomial ring (no sampling).
Poly char_poly(const QuadricPencil& pencil);

// Root-profile classification onto the six non-complete-square classes.
// Roots closer than tol*(1+|root|) are merged; coranks use singular values
// below tol relative to the largest one. Throws UnrecognizedProfile for any
// other profile.
PencilType classify_pencil(const QuadricPencil& pencil, Real tol = kDefaultRelTol);

// Lift of a biquadratic to a quadric via the monomial dictionary
//   1->X4^2, x->X1X4, y->X2X4, xy->X3X4, x^2->X1^2, y^2->X2^2,
//   x^2y->X1X3, xy^2->X2X3, x^2y^2->X3^2.
// Well defined modulo the Segre quadric Q0; this fixes one representative.
SymQuadForm segre_lift(const BiquadraticForm& c);

// Tangency condition at a point: the curve/quadric must vanish at the point
// and have vanishing derivative along the direction (an infinitely-near point).
struct TangentCondition1 {
    Complex x, y;      // base point (affine)
    Complex dx, dy;    // direction
};

// Nullspace basis of the N x 9 point-evaluation matrix; tangent conditions
// contribute one extra derivative row each. The dimension is the caller's to
// interpret (2 = a pencil).
std::vector<BiquadraticForm> biquadratic_space_through(
    const std::vector<std::pair<Complex, Complex>>& points,
    const std::vector<TangentCondition1>& tangents = {}, Real tol = kDefaultRelTol);

struct TangentCondition3 {
    ProjPoint3 p;
    Vec4 dir;
};

// Dimension of the linear space of quadrics vanishing on all points (and
// tangency conditions): 10 minus the numeric rank of the evaluation matrix.
int quadric_space_dim_through(const std::vector<ProjPoint3>& points, Real tol = kDefaultRelTol,
                              const std::vector<TangentCondition3>& tangents = {});

}  // namespace qp
