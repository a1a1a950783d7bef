#pragma once

#include <optional>
#include <string>

#include "qpencil/errors.hpp"
#include "qpencil/scalar.hpp"

namespace qp {

// The five supported families. Additive parameter nu for dA1/dD4/dA0,
// multiplicative parameter w for qA1/qA0.
enum class FamilyTag { dA1, dD4, qA1, dA0, qA0 };

std::string to_string(FamilyTag t);
std::optional<FamilyTag> family_from_string(const std::string& s);
bool is_multiplicative(FamilyTag t);

// Position on the universal cover of the Riemann surface of sqrt(Delta).
// Stored as (origin, half-step count) so that shift composes exactly:
// additive pos = origin + count*step, multiplicative pos = origin * step^count.
struct UniformParam {
    FamilyTag family;
    bool multiplicative;
    Complex origin;
    Complex step;            // delta (additive) or q (multiplicative)
    long long halfsteps = 0;

    Complex pos() const {
        return multiplicative ? origin * int_pow(step, halfsteps)
                              : origin + Real(halfsteps) * step;
    }

    static UniformParam additive(FamilyTag family, const Complex& nu, const Complex& delta);
    static UniformParam multiplicative_param(FamilyTag family, const Complex& w,
                                             const Complex& q);
};

UniformParam shift(const UniformParam& p, long long half_steps);

// lambda as a function of the cover position. kappa is required for the
// multiplicative families (qA1/qA0 share the same lambda(w)).
Complex lambda_of(const UniformParam& p, std::optional<Complex> kappa = {});

// The distinguished branch of sqrt(Delta): nu itself for the additive
// families, kappa(1-w^2)/(w(1-kappa^2)) for the multiplicative ones.
Complex sqrt_delta_of(const UniformParam& p, std::optional<Complex> kappa = {});

struct DeckResiduals {
    Real lambda_residual;  // |lambda(nu) - lambda(-nu)|  (resp. w vs 1/w)
    Real sqrt_residual;    // |sqrt(nu) + sqrt(-nu)|      (resp. multiplicative)
    Real max() const { return std::max(lambda_residual, sqrt_residual); }
};

DeckResiduals deck_involution_residuals(const UniformParam& p,
                                        std::optional<Complex> kappa = {});
// Largest of the two deck residuals; both must vanish for a valid branch.
Real deck_involution_check(const UniformParam& p, std::optional<Complex> kappa = {});

}  // namespace qp
