#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "qpencil/charts.hpp"
#include "qpencil/quadrics.hpp"
#include "qpencil/uniformization.hpp"

namespace qp {

// A validated family configuration: the point parameters (a_i / c_i / z_i),
// kappa where applicable, and the deformation step (delta or q).
struct FamilyConfig {
    FamilyTag tag;
    std::vector<Complex> params;  // dA1: a1..a8, dD4: a1..a4, qA1: c1..c8, dA0/qA0: z1..z8
    std::optional<Complex> kappa;
    Complex step;
    bool symmetric = false;
};

// Validates the family constraint (tolerance 1e-12 on the defining sum or
// product) and derives nothing the caller must supply: b_i are always
// computed from the family formulas.
FamilyConfig make_config(FamilyTag tag, std::vector<Complex> params,
                         std::optional<Complex> kappa, const Complex& step,
                         bool symmetric = false);

// Throws NotSymmetric unless the parameters satisfy the family's symmetry
// pattern (a_{2i} = -a_{2i-1} etc.).
void require_symmetric(const FamilyConfig& cfg);

// The eight 2D base points s_i = (a_i, b_i) at the autonomous fiber.
std::array<std::pair<Complex, Complex>, 8> base_points_2d(const FamilyConfig& cfg);

// Lifts S_i = [a_i : b_i : a_i b_i : 1].
std::array<ProjPoint3, 8> base_points_lifted(const FamilyConfig& cfg);

// The family's distinguished biquadratic C_inf (whose lift spans the Q-pencil
// together with the Segre quadric, modulo Q0).
BiquadraticForm family_c_infinity(const FamilyConfig& cfg);

// Tangency refinements of the 8-point scheme (dD4's infinitely-near points);
// empty for the other families.
std::vector<TangentCondition1> base_scheme_tangents(const FamilyConfig& cfg);

struct FamilyPencils {
    QuadricPencil q;                      // Segre quadric + family Q_inf
    std::vector<BiquadraticForm> c_basis; // biquadratic pencil through the s_i
    BiquadraticForm c0;                   // member independent of C_inf
    SymQuadForm p0, p_inf;                // their Segre lifts
};

// Builds both pencils and cross-checks: the characteristic polynomial against
// the family closed form, S_i on Q0 and QInf, and C_inf inside the computed
// biquadratic pencil. Throws LiftInconsistent when the 8 points do not
// actually support a pencil (inadmissible parameters).
FamilyPencils build_pencils(const FamilyConfig& cfg);

// Uniformization position at half-step index 0 with the config's step.
UniformParam origin_param(const FamilyConfig& cfg, const Complex& pos0);

// Autonomous-fiber position (nu = 1 additive, w = kappa multiplicative).
Complex autonomous_pos(const FamilyConfig& cfg);

// Random admissible draws with O(1) magnitudes, satisfying both the stated
// family constraint and the pencil-existence geometry; used by the
// verification suites. sample_symmetric additionally satisfies the family's
// symmetry pattern.
FamilyConfig sample_admissible(FamilyTag tag, std::mt19937_64& rng);
FamilyConfig sample_symmetric(FamilyTag tag, std::mt19937_64& rng);

}  // namespace qp
