#include "qpencil/uniformization.hpp"

namespace qp {

std::string to_string(FamilyTag t) {
    switch (t) {
        case FamilyTag::dA1: return "dA1";
        case FamilyTag::dD4: return "dD4";
        case FamilyTag::qA1: return "qA1";
        case FamilyTag::dA0: return "dA0";
        case FamilyTag::qA0: return "qA0";
    }
    return "?";
}

std::optional<FamilyTag> family_from_string(const std::string& s) {
    if (s == "dA1") return FamilyTag::dA1;
    if (s == "dD4") return FamilyTag::dD4;
    if (s == "qA1") return FamilyTag::qA1;
    if (s == "dA0") return FamilyTag::dA0;
    if (s == "qA0") return FamilyTag::qA0;
    return std::nullopt;
}

bool is_multiplicative(FamilyTag t) { return t == FamilyTag::qA1 || t == FamilyTag::qA0; }

UniformParam UniformParam::additive(FamilyTag family, const Complex& nu,
                                    const Complex& delta) {
    if (is_multiplicative(family))
        throw Error("additive parameter requested for a multiplicative family");
    return UniformParam{family, false, nu, delta, 0};
}

UniformParam UniformParam::multiplicative_param(FamilyTag family, const Complex& w,
                                                const Complex& q) {
    if (!is_multiplicative(family))
        throw Error("multiplicative parameter requested for an additive family");
    if (w == Complex(0)) throw Error("UniformParam: w must be nonzero");
    if (q == Complex(0)) throw Error("UniformParam: q must be nonzero");
    return UniformParam{family, true, w, q, 0};
}

UniformParam shift(const UniformParam& p, long long half_steps) {
    UniformParam out = p;
    out.halfsteps += half_steps;
    return out;
}

namespace {

Complex require_kappa(const std::optional<Complex>& kappa) {
    if (!kappa) throw Error("kappa required for a multiplicative family");
    const Complex k = *kappa;
    if (k == Complex(0) || k == Complex(1) || k == Complex(-1))
        throw BranchPole("kappa in {0, 1, -1} degenerates the uniformization");
    return k;
}

}  // namespace

Complex lambda_of(const UniformParam& p, std::optional<Complex> kappa) {
    const Complex v = p.pos();
    switch (p.family) {
        case FamilyTag::dA1:
        case FamilyTag::dD4:
            return (Complex(1) - v * v) / Real(4);
        case FamilyTag::dA0:
            return (v * v - Complex(1)) / Real(4);
        case FamilyTag::qA1:
        case FamilyTag::qA0: {
            const Complex k = require_kappa(kappa);
            if (std::abs(v) < 1e-300) throw BranchPole("lambda(w): w = 0");
            const Complex den = (Complex(1) - k * k);
            return (k - v) * (Complex(1) - k * v) / (den * den * v);
        }
    }
    throw Error("lambda_of: unknown family");
}

Complex sqrt_delta_of(const UniformParam& p, std::optional<Complex> kappa) {
    const Complex v = p.pos();
    switch (p.family) {
        case FamilyTag::dA1:
        case FamilyTag::dD4:
        case FamilyTag::dA0:
            return v;
        case FamilyTag::qA1:
        case FamilyTag::qA0: {
            const Complex k = require_kappa(kappa);
            if (std::abs(v) < 1e-300) throw BranchPole("sqrt(Delta)(w): w = 0");
            return k * (Complex(1) - v * v) / (v * (Complex(1) - k * k));
        }
    }
    throw Error("sqrt_delta_of: unknown family");
}

DeckResiduals deck_involution_residuals(const UniformParam& p,
                                        std::optional<Complex> kappa) {
    UniformParam flipped = p;
    flipped.halfsteps = 0;
    flipped.origin = p.multiplicative ? Complex(1) / p.pos() : -p.pos();
    DeckResiduals r;
    r.lambda_residual = std::abs(lambda_of(p, kappa) - lambda_of(flipped, kappa));
    r.sqrt_residual = std::abs(sqrt_delta_of(p, kappa) + sqrt_delta_of(flipped, kappa));
    return r;
}

Real deck_involution_check(const UniformParam& p, std::optional<Complex> kappa) {
    return deck_involution_residuals(p, kappa).max();
}

}  // namespace qp
