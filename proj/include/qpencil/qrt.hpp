#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qpencil/families.hpp"
#include "qpencil/projective.hpp"
#include "qpencil/uniformization.hpp"

namespace qp {

// Everything the fibered QRT involutions need at one fiber: the family, the
// cover position, kappa, and the point parameters.
struct FiberContext {
    FamilyTag family;
    UniformParam param;
    std::optional<Complex> kappa;
    std::vector<Complex> points;
};

FiberContext fiber_context(const FamilyConfig& cfg, const UniformParam& at);

// Zero polynomial data U(z) = prod(z - z_i), optionally in the Laurent
// normalization z^-4 prod(z - z_i).
struct UPoly {
    std::array<Complex, 8> roots;
    bool laurent = false;
    Complex eval(const Complex& z) const;
};

// Vertical involution i1 (fixes x, moves y) on the fiber Q_lambda(param).
// Throws Indeterminate within 1e-10 of a base point.
ProjPoint1 i1_fiber(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y);
// Horizontal involution i2 (fixes y, moves x).
ProjPoint1 i2_fiber(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y);

// Internal variants reporting the worst denominator conditioning factor
// (>= 1) encountered, used by the orbit engine's precision budget.
ProjPoint1 i1_fiber_cond(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y,
                         Real* cond);
ProjPoint1 i2_fiber_cond(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y,
                         Real* cond);

// F = i1 . i2
std::pair<ProjPoint1, ProjPoint1> qrt_map(const FiberContext& ctx, const ProjPoint1& x,
                                          const ProjPoint1& y);

// The eight base points s_i(param) of the fiber, as affine pairs.
std::array<std::pair<Complex, Complex>, 8> base_points_fiber(const FiberContext& ctx);

struct ProbeReport {
    int index;           // base point probed (0-based)
    Real eps;
    Real d_pair;         // collapse: distance between the two images
    Real d_point;        // collapse: distance to the target point
    Real d_line;         // re-expansion: distance to the target line
    Real d_pair_fine, d_point_fine, d_line_fine;  // same at eps/100
    Real ratio_point, ratio_line;                 // coarse/fine contractions
};

// Singularity-confinement probe around base point i (0-based): two seeds on
// {x = a_i + eps} must collapse under i1 to s_i and re-expand under i2 toward
// {y = b_i}, with first-order contraction (ratio in [30, 300] between eps and
// eps/100). Throws ProbeFailed otherwise.
ProbeReport confinement_probe_2d(const FiberContext& ctx, int i, Real eps);

}  // namespace qp
