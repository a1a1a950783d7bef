#include "qpencil/families.hpp"

#include <algorithm>

namespace qp {

namespace {

constexpr Real kConstraintTol = 1e-12;

void check_count(const std::vector<Complex>& v, size_t n, const char* what) {
    if (v.size() != n)
        throw DegenerateParameter(std::string(what) + ": expected " + std::to_string(n) +
                                  " parameters, got " + std::to_string(v.size()));
}

Complex sum(const std::vector<Complex>& v, size_t lo, size_t hi) {
    Complex s(0);
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
}

Complex prod(const std::vector<Complex>& v, size_t lo, size_t hi) {
    Complex p(1);
    for (size_t i = lo; i < hi; ++i) p *= v[i];
    return p;
}

void check_kappa(const std::optional<Complex>& kappa, bool exclude_unit) {
    if (!kappa) throw DegenerateParameter("kappa required for this family");
    const Complex k = *kappa;
    if (std::abs(k) < kConstraintTol)
        throw DegenerateParameter("kappa = 0 is excluded");
    if (exclude_unit && (std::abs(k - Complex(1)) < kConstraintTol ||
                         std::abs(k + Complex(1)) < kConstraintTol))
        throw DegenerateParameter("kappa = +-1 is excluded");
}

}  // namespace

void require_symmetric(const FamilyConfig& cfg) {
    const auto& p = cfg.params;
    auto fail = [&](const std::string& what) {
        throw NotSymmetric("symmetric flag: " + what);
    };
    switch (cfg.tag) {
        case FamilyTag::dA1:
            for (int i : {0, 2})
                if (!near(p[size_t(i + 1)], -p[size_t(i)], kConstraintTol))
                    fail("need a2 = -a1, a4 = -a3");
            for (int i : {4, 6})
                if (!near(p[size_t(i + 1)], Complex(1) - p[size_t(i)], kConstraintTol))
                    fail("need a6 = 1-a5, a8 = 1-a7");
            break;
        case FamilyTag::dD4:
            for (int i : {0, 2})
                if (!near(p[size_t(i + 1)], -p[size_t(i)], kConstraintTol))
                    fail("need a2 = -a1, a4 = -a3");
            break;
        case FamilyTag::qA1:
            for (int i : {0, 2, 4, 6})
                if (!near(p[size_t(i + 1)], Complex(1) / p[size_t(i)], kConstraintTol))
                    fail("need c_{2i} = 1/c_{2i-1}");
            break;
        case FamilyTag::dA0:
            for (int i = 0; i < 4; ++i)
                if (!near(p[size_t(i + 4)], -p[size_t(i)], kConstraintTol))
                    fail("need z_{i+4} = -z_i");
            break;
        case FamilyTag::qA0:
            for (int i = 0; i < 4; ++i)
                if (!near(p[size_t(i + 4)], Complex(1) / p[size_t(i)], kConstraintTol))
                    fail("need z_{i+4} = 1/z_i");
            break;
    }
}

FamilyConfig make_config(FamilyTag tag, std::vector<Complex> params,
                         std::optional<Complex> kappa, const Complex& step,
                         bool symmetric) {
    FamilyConfig cfg{tag, std::move(params), kappa, step, symmetric};
    switch (tag) {
        case FamilyTag::dA1: {
            check_count(cfg.params, 8, "dA1");
            const Complex s = sum(cfg.params, 0, 8);
            if (!near(s, Complex(2), kConstraintTol))
                throw ConstraintViolated("dA1: sum a_i must equal 2, got " +
                                         std::to_string(s.real()) + (s.imag() < 0 ? "-" : "+") +
                                         std::to_string(std::abs(s.imag())) + "i");
            break;
        }
        case FamilyTag::dD4:
            check_count(cfg.params, 4, "dD4");
            break;
        case FamilyTag::qA1: {
            check_count(cfg.params, 8, "qA1");
            check_kappa(cfg.kappa, /*exclude_unit=*/true);
            for (const auto& c : cfg.params)
                if (std::abs(c) < kConstraintTol)
                    throw DegenerateParameter("qA1: c_i must be nonzero");
            const Complex r = prod(cfg.params, 0, 4) / prod(cfg.params, 4, 8);
            if (!near(r, Complex(1), kConstraintTol))
                throw ConstraintViolated("qA1: prod(c_1..4)/prod(c_5..8) must equal 1");
            break;
        }
        case FamilyTag::dA0: {
            check_count(cfg.params, 8, "dA0");
            check_kappa(cfg.kappa, /*exclude_unit=*/false);
            const Complex s = sum(cfg.params, 0, 8);
            if (std::abs(s) > kConstraintTol * 8)
                throw ConstraintViolated("dA0: sum z_i must vanish (kappa_1 = -kappa_2)");
            break;
        }
        case FamilyTag::qA0: {
            check_count(cfg.params, 8, "qA0");
            check_kappa(cfg.kappa, /*exclude_unit=*/true);
            for (const auto& z : cfg.params)
                if (std::abs(z) < kConstraintTol)
                    throw DegenerateParameter("qA0: z_i must be nonzero");
            const Complex pr = prod(cfg.params, 0, 8);
            if (!near(pr, Complex(1), kConstraintTol))
                throw ConstraintViolated("qA0: prod z_i must equal 1 (kappa_1 kappa_2 = 1)");
            break;
        }
    }
    if (cfg.step == Complex(0) && is_multiplicative(tag))
        throw DegenerateParameter("multiplicative step q must be nonzero");
    if (symmetric) require_symmetric(cfg);
    return cfg;
}

std::array<std::pair<Complex, Complex>, 8> base_points_2d(const FamilyConfig& cfg) {
    std::array<std::pair<Complex, Complex>, 8> s;
    const auto& p = cfg.params;
    switch (cfg.tag) {
        case FamilyTag::dA1:
            for (int i = 0; i < 4; ++i) s[size_t(i)] = {p[size_t(i)], -p[size_t(i)]};
            for (int i = 4; i < 8; ++i) s[size_t(i)] = {p[size_t(i)], Complex(1) - p[size_t(i)]};
            break;
        case FamilyTag::dD4:
            for (int i = 0; i < 8; ++i) {
                const Complex a = p[size_t(i % 4)];
                s[size_t(i)] = {a, -a};
            }
            break;
        case FamilyTag::qA1: {
            const Complex k = *cfg.kappa;
            for (int i = 0; i < 4; ++i)
                s[size_t(i)] = {k * p[size_t(i)], k / p[size_t(i)]};
            for (int i = 4; i < 8; ++i)
                s[size_t(i)] = {p[size_t(i)], Complex(1) / p[size_t(i)]};
            break;
        }
        case FamilyTag::dA0: {
            const Complex k = *cfg.kappa;  // kappa_1 = -k, kappa_2 = k
            for (int i = 0; i < 8; ++i) {
                const Complex z = p[size_t(i)];
                s[size_t(i)] = {z * (z + k), z * (z - k)};
            }
            break;
        }
        case FamilyTag::qA0: {
            const Complex k = *cfg.kappa;  // kappa_1 = 1/k, kappa_2 = k
            for (int i = 0; i < 8; ++i) {
                const Complex z = p[size_t(i)];
                s[size_t(i)] = {z + Complex(1) / (k * z), Complex(1) / z + z / k};
            }
            break;
        }
    }
    return s;
}

std::array<ProjPoint3, 8> base_points_lifted(const FamilyConfig& cfg) {
    std::array<ProjPoint3, 8> out;
    const auto pts = base_points_2d(cfg);
    for (int i = 0; i < 8; ++i) {
        const auto& [a, b] = pts[size_t(i)];
        out[size_t(i)] = ProjPoint3(a, b, a * b, Complex(1));
    }
    return out;
}

BiquadraticForm family_c_infinity(const FamilyConfig& cfg) {
    BiquadraticForm f;
    switch (cfg.tag) {
        case FamilyTag::dA1:
            // (x+y)(x+y-1)
            f.c(2, 0) = 1; f.c(1, 1) = 2; f.c(0, 2) = 1; f.c(1, 0) = -1; f.c(0, 1) = -1;
            break;
        case FamilyTag::dD4:
            // (x+y)^2
            f.c(2, 0) = 1; f.c(1, 1) = 2; f.c(0, 2) = 1;
            break;
        case FamilyTag::qA1: {
            // (xy-1)(xy-kappa^2)
            const Complex k2 = (*cfg.kappa) * (*cfg.kappa);
            f.c(2, 2) = 1; f.c(1, 1) = -(Complex(1) + k2); f.c(0, 0) = k2;
            break;
        }
        case FamilyTag::dA0: {
            // (x-y)^2 - 2 kappa^2 (x+y)
            const Complex k2 = (*cfg.kappa) * (*cfg.kappa);
            f.c(2, 0) = 1; f.c(1, 1) = -2; f.c(0, 2) = 1;
            f.c(1, 0) = -2.0 * k2; f.c(0, 1) = -2.0 * k2;
            break;
        }
        case FamilyTag::qA0: {
            // (x - kappa y)(y - x/kappa) - (kappa - 1/kappa)^2, times -kappa:
            //   -kappa(x^2+y^2) + (1+kappa^2) xy - (kappa - 1/kappa)^2  ... scaled by -1
            // stored as kappa(x^2+y^2) - (1+kappa^2) xy + (kappa-1/kappa)^2 so the
            // lift matches QInf modulo Q0 directly.
            const Complex k = *cfg.kappa;
            const Complex s = k - Complex(1) / k;
            f.c(2, 0) = k; f.c(0, 2) = k; f.c(1, 1) = -(Complex(1) + k * k); f.c(0, 0) = s * s;
            break;
        }
    }
    return f;
}

std::vector<TangentCondition1> base_scheme_tangents(const FamilyConfig& cfg) {
    std::vector<TangentCondition1> t;
    if (cfg.tag == FamilyTag::dD4) {
        for (int i = 0; i < 4; ++i) {
            const Complex a = cfg.params[size_t(i)];
            t.push_back({a, -a, Complex(1), Complex(1)});
        }
    }
    return t;
}

namespace {

// Family closed-form characteristic polynomials (determinant convention of
// the full-coefficient symmetric matrices).
Poly family_char_poly(const FamilyConfig& cfg) {
    switch (cfg.tag) {
        case FamilyTag::dA1:
        case FamilyTag::dD4:
            return Poly::linear(1, -4);
        case FamilyTag::dA0:
            return Poly::linear(1, 4);
        case FamilyTag::qA1:
        case FamilyTag::qA0: {
            const Complex k = *cfg.kappa;
            const Complex a = (Complex(1) + k) * (Complex(1) + k);
            const Complex b = (Complex(1) - k) * (Complex(1) - k);
            return Poly::linear(1, a) * Poly::linear(1, b);
        }
    }
    throw Error("family_char_poly: unknown family");
}

}  // namespace

FamilyPencils build_pencils(const FamilyConfig& cfg) {
    FamilyPencils out;
    out.q = family_pencil(cfg.tag, cfg.kappa);

    // Cross-check: determinant against the family closed form at 5 samples.
    const Poly delta = char_poly(out.q);
    const Poly closed = family_char_poly(cfg);
    for (const Complex lam : {Complex(0), Complex(0.5), Complex(-1), Complex(2), Complex(0.1)}) {
        const Complex got = delta.eval(lam), want = closed.eval(lam);
        if (std::abs(got - want) > 1e-10 * (1 + std::abs(want)))
            throw LiftInconsistent("build_pencils: characteristic polynomial mismatch");
    }

    // Cross-check: all S_i on both spanning quadrics.
    for (const auto& S : base_points_lifted(cfg)) {
        if (std::abs(eval_quadric(out.q.m0, S)) > 1e-12 * out.q.m0.frobenius() ||
            std::abs(eval_quadric(out.q.mInf, S)) > 1e-10 * out.q.mInf.frobenius())
            throw LiftInconsistent("build_pencils: a base point misses the Q-pencil");
    }

    // Biquadratic pencil through the base scheme.
    std::vector<std::pair<Complex, Complex>> pts;
    const auto tangents = base_scheme_tangents(cfg);
    if (cfg.tag == FamilyTag::dD4) {
        for (int i = 0; i < 4; ++i) {
            const Complex a = cfg.params[size_t(i)];
            pts.push_back({a, -a});
        }
    } else {
        for (const auto& s : base_points_2d(cfg)) pts.push_back(s);
    }
    out.c_basis = biquadratic_space_through(pts, tangents);
    if (out.c_basis.size() < 2)
        throw LiftInconsistent(
            "build_pencils: the eight points support no biquadratic pencil "
            "(parameters violate the family geometry)");

    // C_inf must lie in the computed pencil; project and check the residual.
    const BiquadraticForm cinf = family_c_infinity(cfg);
    Eigen::Matrix<Complex, 9, 1> v = cinf.vectorized();
    Eigen::Matrix<Complex, 9, 1> rem = v;
    for (const auto& b : out.c_basis) {
        const auto bv = b.vectorized();
        rem -= (bv.dot(rem) / bv.squaredNorm()) * bv;
    }
    if (rem.norm() > 1e-10 * v.norm())
        throw LiftInconsistent("build_pencils: C_inf not contained in the computed pencil");

    // A pencil member independent of C_inf, orthogonalized against it.
    Eigen::Matrix<Complex, 9, 1> c0v = Eigen::Matrix<Complex, 9, 1>::Zero();
    for (const auto& b : out.c_basis) {
        auto cand = b.vectorized();
        cand -= (v.dot(cand) / v.squaredNorm()) * v;
        if (cand.norm() > c0v.norm()) c0v = cand;
    }
    if (c0v.norm() < 1e-10)
        throw LiftInconsistent("build_pencils: degenerate biquadratic pencil");
    out.c0 = BiquadraticForm::from_vector(c0v / c0v.norm());
    out.p0 = segre_lift(out.c0);
    out.p_inf = segre_lift(cinf);
    return out;
}

UniformParam origin_param(const FamilyConfig& cfg, const Complex& pos0) {
    return is_multiplicative(cfg.tag)
               ? UniformParam::multiplicative_param(cfg.tag, pos0, cfg.step)
               : UniformParam::additive(cfg.tag, pos0, cfg.step);
}

Complex autonomous_pos(const FamilyConfig& cfg) {
    return is_multiplicative(cfg.tag) ? *cfg.kappa : Complex(1);
}

namespace {

Real uni(std::mt19937_64& rng, Real lo, Real hi) {
    return std::uniform_real_distribution<Real>(lo, hi)(rng);
}

Complex jittered(std::mt19937_64& rng, Real lo, Real hi, Real im) {
    return Complex(uni(rng, lo, hi), uni(rng, -im, im));
}

}  // namespace

FamilyConfig sample_admissible(FamilyTag tag, std::mt19937_64& rng) {
    switch (tag) {
        case FamilyTag::dA1: {
            // Both the stated constraint (sum = 2) and the pencil geometry
            // (sum of the first four = 0, of the last four = 2).
            std::vector<Complex> a(8);
            for (int i = 0; i < 3; ++i) a[size_t(i)] = jittered(rng, -0.6, 0.6, 0.15);
            a[3] = -(a[0] + a[1] + a[2]);
            for (int i = 4; i < 7; ++i) a[size_t(i)] = jittered(rng, 0.1, 0.8, 0.15);
            a[7] = Complex(2) - (a[4] + a[5] + a[6]);
            return make_config(tag, a, {}, Complex(uni(rng, 0.12, 0.3), 0));
        }
        case FamilyTag::dD4: {
            std::vector<Complex> a(4);
            for (int i = 0; i < 4; ++i) a[size_t(i)] = jittered(rng, -0.8, 0.8, 0.2);
            return make_config(tag, a, {}, Complex(uni(rng, 0.12, 0.3), 0));
        }
        case FamilyTag::qA1: {
            // Anchor the moduli in separated cells so no two points cluster.
            static const Real anchor[7] = {-0.8, -0.5, -0.2, 0.15, 0.45, 0.7, 1.0};
            std::vector<Complex> c(8);
            for (int i = 0; i < 7; ++i)
                c[size_t(i)] = std::exp(Complex(anchor[i], 0) + jittered(rng, -0.1, 0.1, 0.25));
            c[7] = c[0] * c[1] * c[2] * c[3] / (c[4] * c[5] * c[6]);
            const Complex kappa(uni(rng, 1.6, 2.4), 0);
            return make_config(tag, c, kappa, Complex(uni(rng, 1.07, 1.2), 0));
        }
        case FamilyTag::dA0: {
            static const Real anchor[7] = {-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
            std::vector<Complex> z(8);
            for (int i = 0; i < 7; ++i)
                z[size_t(i)] = Complex(anchor[i], 0) + jittered(rng, -0.08, 0.08, 0.2);
            z[7] = -(z[0] + z[1] + z[2] + z[3] + z[4] + z[5] + z[6]);
            const Complex kappa(uni(rng, 0.9, 1.5), 0);
            return make_config(tag, z, kappa, Complex(uni(rng, 0.1, 0.25), 0));
        }
        case FamilyTag::qA0: {
            static const Real anchor[7] = {-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};
            std::vector<Complex> z(8);
            Complex p(1);
            for (int i = 0; i < 7; ++i) {
                z[size_t(i)] = std::exp(Complex(anchor[i], 0) + jittered(rng, -0.1, 0.1, 0.3));
                p *= z[size_t(i)];
            }
            z[7] = Complex(1) / p;
            const Complex kappa(uni(rng, 1.8, 2.6), 0);
            return make_config(tag, z, kappa, Complex(uni(rng, 1.05, 1.15), 0));
        }
    }
    throw Error("sample_admissible: unknown family");
}

FamilyConfig sample_symmetric(FamilyTag tag, std::mt19937_64& rng) {
    switch (tag) {
        case FamilyTag::dA1: {
            const Complex a1 = jittered(rng, 0.15, 0.6, 0.1), a3 = jittered(rng, -0.6, -0.15, 0.1);
            const Complex a5 = jittered(rng, 0.1, 0.45, 0.1), a7 = jittered(rng, 0.55, 0.9, 0.1);
            return make_config(tag, {a1, -a1, a3, -a3, a5, Complex(1) - a5, a7, Complex(1) - a7},
                               {}, Complex(uni(rng, 0.12, 0.3), 0), true);
        }
        case FamilyTag::dD4: {
            const Complex a1 = jittered(rng, 0.2, 0.7, 0.15), a3 = jittered(rng, 0.8, 1.3, 0.15);
            return make_config(tag, {a1, -a1, a3, -a3}, {}, Complex(uni(rng, 0.12, 0.3), 0), true);
        }
        case FamilyTag::qA1: {
            static const Real anchor[4] = {0.35, 0.6, 0.85, 1.1};
            std::vector<Complex> c(8);
            for (int i : {0, 2, 4, 6}) {
                c[size_t(i)] =
                    std::exp(Complex(anchor[i / 2], 0) + jittered(rng, -0.08, 0.08, 0.25));
                c[size_t(i + 1)] = Complex(1) / c[size_t(i)];
            }
            const Complex kappa(uni(rng, 1.6, 2.4), 0);
            return make_config(tag, c, kappa, Complex(uni(rng, 1.07, 1.2), 0), true);
        }
        case FamilyTag::dA0: {
            static const Real anchor[4] = {0.2, 0.45, 0.7, 0.95};
            std::vector<Complex> z(8);
            for (int i = 0; i < 4; ++i) {
                z[size_t(i)] = Complex(anchor[i], 0) + jittered(rng, -0.06, 0.06, 0.2);
                z[size_t(i + 4)] = -z[size_t(i)];
            }
            const Complex kappa(uni(rng, 0.9, 1.5), 0);
            return make_config(tag, z, kappa, Complex(uni(rng, 0.1, 0.25), 0), true);
        }
        case FamilyTag::qA0: {
            // Moduli kept away from 1 so z and 1/z never nearly coincide.
            static const Real anchor[4] = {0.45, 0.7, 0.95, 1.2};
            std::vector<Complex> z(8);
            for (int i = 0; i < 4; ++i) {
                z[size_t(i)] =
                    std::exp(Complex(anchor[i], 0) + jittered(rng, -0.08, 0.08, 0.3));
                z[size_t(i + 4)] = Complex(1) / z[size_t(i)];
            }
            const Complex kappa(uni(rng, 1.8, 2.6), 0);
            return make_config(tag, z, kappa, Complex(uni(rng, 1.05, 1.15), 0), true);
        }
    }
    throw Error("sample_symmetric: unknown family");
}

}  // namespace qp
