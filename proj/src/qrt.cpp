#include "qpencil/qrt.hpp"

#include <algorithm>
#include <cfloat>

namespace qp {

FiberContext fiber_context(const FamilyConfig& cfg, const UniformParam& at) {
    if (at.family != cfg.tag) throw Error("fiber_context: parameter/family mismatch");
    return FiberContext{cfg.tag, at, cfg.kappa, cfg.params};
}

Complex UPoly::eval(const Complex& z) const {
    Complex p(1);
    for (const auto& r : roots) p *= (z - r);
    if (laurent) p /= int_pow(z, 4);
    return p;
}

namespace {

Real pair_dist(const ProjPoint1& x1, const ProjPoint1& y1, const ProjPoint1& x2,
               const ProjPoint1& y2) {
    return std::max(chordal(x1, x2), chordal(y1, y2));
}

void check_indeterminate(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y) {
    const auto pts = base_points_fiber(ctx);
    for (const auto& [a, b] : pts) {
        if (pair_dist(x, y, ProjPoint1(a), ProjPoint1(b)) < 1e-10)
            throw Indeterminate("fiber involution evaluated at a base point");
    }
}

Complex affine_or_throw(const ProjPoint1& p, const char* what) {
    if (!p.is_finite()) throw Error(std::string(what) + ": point at infinity unsupported");
    return p.affine();
}

void note_division(Real* cond, const Real num_scale, const Complex& den) {
    if (!cond) return;
    const Real d = std::abs(den);
    const Real scale = std::max(num_scale, d);
    if (d == 0)
        *cond = std::max(*cond, 1e300);
    else
        *cond = std::max(*cond, scale / d);
}

// Cancellation sensitivity of a computed difference t - r: the relative
// error of the factor is amplified by |t| / |t - r|.
void note_factor(Real* cond, const Complex& t, const Complex& r) {
    if (!cond) return;
    const Real diff = std::abs(t - r);
    const Real scale = 1 + std::abs(t) + std::abs(r);
    *cond = std::max(*cond, scale / std::max(diff, Real(1e-300)));
}

// Solves (T - alpha)(t0 - alpha) / ((T - beta)(t0 - beta)) = rn/rd for T.
ProjPoint1 mobius_bracket_solve(const Complex& t0, const Complex& alpha, const Complex& beta,
                                const Complex& rn, const Complex& rd, Real* cond) {
    note_factor(cond, t0, alpha);
    note_factor(cond, t0, beta);
    const Complex num = rd * alpha * (t0 - alpha) - rn * beta * (t0 - beta);
    const Complex den = rd * (t0 - alpha) - rn * (t0 - beta);
    note_division(cond, std::max(std::abs(rd * (t0 - alpha)), std::abs(rn * (t0 - beta))), den);
    return ProjPoint1(num, den);
}

// dA1 (and the fibered dA1 shape): T = ynew + x from
//   T*P / ((T - nu)(P - nu)) = rn/rd,  P = x + y.
ProjPoint1 additive_line_solve(const Complex& P, const Complex& nu, const Complex& rn,
                               const Complex& rd, Real* cond) {
    const Complex num = rn * nu * (nu - P);
    const Complex den = P * (rd - rn) + rn * nu;
    note_division(cond, std::max(std::abs(P * (rd - rn)), std::abs(rn * nu)), den);
    return ProjPoint1(num, den);
}

// qA1 shape: T = x*ynew from (T - w^2)(P - w^2) / ((T - 1)(P - 1)) = rn/rd.
ProjPoint1 hyperbola_solve(const Complex& P, const Complex& w2, const Complex& rn,
                           const Complex& rd, Real* cond) {
    const Complex num = (w2 * rd - rn) * P - w2 * w2 * rd + rn;
    const Complex den = (rd - rn) * P + rn - w2 * rd;
    note_division(cond, std::max(std::abs((rd - rn) * P), std::abs(rn - w2 * rd)), den);
    return ProjPoint1(num, den);
}

// Stable roots of s2*t^2 + s1*t + s0 = 0 (s2 != 0), returned largest first.
std::pair<Complex, Complex> quadratic_roots(const Complex& s2, const Complex& s1,
                                            const Complex& s0) {
    const Complex disc = std::sqrt(s1 * s1 - Real(4) * s2 * s0);
    const Complex q = (std::abs(-s1 + disc) >= std::abs(-s1 - disc)) ? (-s1 + disc) / Real(2)
                                                                     : (-s1 - disc) / Real(2);
    if (std::abs(q) == 0) return {Complex(0), Complex(0)};
    return {q / s2, s0 / q};
}

struct Involution {
    const FiberContext& ctx;
    bool vertical;  // i1 moves y; i2 moves x

    // moving: coordinate being replaced; fixed: the other one.
    ProjPoint1 solve(const Complex& fixed, const Complex& moving, Real* cond_out) const {
        // Track conditioning locally even when the caller does not ask for it;
        // the root-pair certification scales its tolerance with it.
        Real cond_local = 1;
        Real* cond = &cond_local;
        struct Publish {
            Real* out;
            Real* local;
            ~Publish() {
                if (out) *out = std::max(*out, *local);
            }
        } publish{cond_out, &cond_local};
        const Complex v = ctx.param.pos();
        const auto& pr = ctx.points;
        switch (ctx.family) {
            case FamilyTag::dA1: {
                Complex rn(1), rd(1);
                auto fac = [&](const Complex& root) {
                    note_factor(cond, fixed, root);
                    return fixed - root;
                };
                if (vertical) {
                    for (int i = 0; i < 4; ++i) rn *= fac(pr[size_t(i)]);
                    for (int i = 4; i < 8; ++i)
                        rd *= fac(pr[size_t(i)] + (v - Complex(1)) / Real(2));
                } else {
                    for (int i = 0; i < 4; ++i) rn *= fac(-pr[size_t(i)]);
                    for (int i = 4; i < 8; ++i)
                        rd *= fac(-pr[size_t(i)] + (Complex(1) + v) / Real(2));
                }
                const ProjPoint1 T = additive_line_solve(fixed + moving, v, rn, rd, cond);
                return ProjPoint1(T.u - fixed * T.v, T.v);
            }
            case FamilyTag::dD4: {
                // 1/T + 1/P = (1/2) sum 1/(fixed -+ a_i); the fibered involution
                // carries no nu dependence (the base scheme is fiber-independent).
                Complex D(1), N(0);
                for (int i = 0; i < 4; ++i) {
                    const Complex root = vertical ? pr[size_t(i)] : -pr[size_t(i)];
                    note_factor(cond, fixed, root);
                    Complex partial(1);
                    for (int j = 0; j < 4; ++j) {
                        if (j == i) continue;
                        partial *= fixed - (vertical ? pr[size_t(j)] : -pr[size_t(j)]);
                    }
                    N += partial;
                    D *= fixed - root;
                }
                const Complex P = fixed + moving;
                const Complex num = Real(2) * D * P;
                const Complex den = N * P - Real(2) * D;
                note_division(cond, std::max(std::abs(N * P), Real(2) * std::abs(D)), den);
                const ProjPoint1 T(num, den);
                return ProjPoint1(T.u - fixed * T.v, T.v);
            }
            case FamilyTag::qA1: {
                Complex rn(1), rd(1);
                auto fac = [&](const Complex& root) {
                    note_factor(cond, fixed, root);
                    return fixed - root;
                };
                if (vertical) {
                    for (int i = 0; i < 4; ++i) rn *= fac(v * pr[size_t(i)]);
                    for (int i = 4; i < 8; ++i) rd *= fac(pr[size_t(i)]);
                } else {
                    for (int i = 0; i < 4; ++i) rn *= fac(v / pr[size_t(i)]);
                    for (int i = 4; i < 8; ++i) rd *= fac(Complex(1) / pr[size_t(i)]);
                }
                const ProjPoint1 T = hyperbola_solve(fixed * moving, v * v, rn, rd, cond);
                // moving' = T / fixed
                return ProjPoint1(T.u, T.v * fixed);
            }
            case FamilyTag::dA0: {
                const Complex kv = *ctx.kappa * v;
                auto Ueval = [&](const Complex& z) {
                    Complex p(1);
                    for (int i = 0; i < 8; ++i) {
                        note_factor(cond, z, pr[size_t(i)]);
                        p *= z - pr[size_t(i)];
                    }
                    return p;
                };
                // vertical: fixed = x = xi(xi + kv); horizontal: fixed = y = eta(eta - kv)
                const Complex lin = vertical ? kv : -kv;
                const auto [r1, r2] = quadratic_roots(Complex(1), lin, -fixed);
                ProjPoint1 out[2];
                for (int which = 0; which < 2; ++which) {
                    const Complex xi = which == 0 ? r1 : r2;
                    Complex alpha, beta, conj;
                    if (vertical) {
                        alpha = xi * (xi - kv);
                        beta = (xi + kv) * (xi + Real(2) * kv);
                        conj = -kv - xi;
                    } else {
                        alpha = xi * (xi + kv);
                        beta = (xi - kv) * (xi - Real(2) * kv);
                        conj = kv - xi;
                    }
                    out[which] =
                        mobius_bracket_solve(moving, alpha, beta, Ueval(xi), Ueval(conj), cond);
                }
                if (chordal(out[0], out[1]) >
                    std::max(Real(1e-9), 1e3 * cond_local * DBL_EPSILON))
                    throw RootPairMismatch("dA0 involution: quadratic roots disagree");
                return out[0];
            }
            case FamilyTag::qA0: {
                const Complex w = v;
                auto Ueval = [&](const Complex& z) {
                    Complex p(1);
                    for (int i = 0; i < 8; ++i) {
                        note_factor(cond, z, pr[size_t(i)]);
                        p *= z - pr[size_t(i)];
                    }
                    return p / int_pow(z, 4);
                };
                // vertical: x = xi + 1/(w xi); horizontal: y = 1/eta + eta/w
                std::pair<Complex, Complex> roots =
                    vertical ? quadratic_roots(w, -w * fixed, Complex(1))
                             : quadratic_roots(Complex(1), -w * fixed, w);
                ProjPoint1 out[2];
                for (int which = 0; which < 2; ++which) {
                    const Complex xi = which == 0 ? roots.first : roots.second;
                    Complex alpha, beta, conj;
                    if (vertical) {
                        alpha = Complex(1) / xi + xi / w;
                        beta = w * xi + Complex(1) / (w * w * xi);
                        conj = Complex(1) / (w * xi);
                    } else {
                        alpha = xi + Complex(1) / (w * xi);
                        beta = w / xi + xi / (w * w);
                        conj = w / xi;
                    }
                    out[which] =
                        mobius_bracket_solve(moving, alpha, beta, Ueval(xi), Ueval(conj), cond);
                }
                if (chordal(out[0], out[1]) >
                    std::max(Real(1e-9), 1e3 * cond_local * DBL_EPSILON))
                    throw RootPairMismatch("qA0 involution: quadratic roots disagree");
                return out[0];
            }
        }
        throw Error("fiber involution: unknown family");
    }
};

}  // namespace

ProjPoint1 i1_fiber_cond(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y,
                         Real* cond) {
    check_indeterminate(ctx, x, y);
    const Complex xa = affine_or_throw(x, "i1_fiber");
    const Complex ya = affine_or_throw(y, "i1_fiber");
    return Involution{ctx, true}.solve(xa, ya, cond);
}

ProjPoint1 i2_fiber_cond(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y,
                         Real* cond) {
    check_indeterminate(ctx, x, y);
    const Complex xa = affine_or_throw(x, "i2_fiber");
    const Complex ya = affine_or_throw(y, "i2_fiber");
    return Involution{ctx, false}.solve(ya, xa, cond);
}

ProjPoint1 i1_fiber(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y) {
    return i1_fiber_cond(ctx, x, y, nullptr);
}

ProjPoint1 i2_fiber(const FiberContext& ctx, const ProjPoint1& x, const ProjPoint1& y) {
    return i2_fiber_cond(ctx, x, y, nullptr);
}

std::pair<ProjPoint1, ProjPoint1> qrt_map(const FiberContext& ctx, const ProjPoint1& x,
                                          const ProjPoint1& y) {
    const ProjPoint1 xt = i2_fiber(ctx, x, y);
    const ProjPoint1 yt = i1_fiber(ctx, xt, y);
    return {xt, yt};
}

std::array<std::pair<Complex, Complex>, 8> base_points_fiber(const FiberContext& ctx) {
    std::array<std::pair<Complex, Complex>, 8> s;
    const Complex v = ctx.param.pos();
    const auto& p = ctx.points;
    switch (ctx.family) {
        case FamilyTag::dA1:
            for (int i = 0; i < 4; ++i) s[size_t(i)] = {p[size_t(i)], -p[size_t(i)]};
            for (int i = 4; i < 8; ++i)
                s[size_t(i)] = {(v - Complex(1)) / Real(2) + p[size_t(i)],
                                (Complex(1) + v) / Real(2) - p[size_t(i)]};
            break;
        case FamilyTag::dD4:
            for (int i = 0; i < 8; ++i) {
                const Complex a = p[size_t(i % 4)];
                s[size_t(i)] = {a, -a};
            }
            break;
        case FamilyTag::qA1:
            for (int i = 0; i < 4; ++i)
                s[size_t(i)] = {v * p[size_t(i)], v / p[size_t(i)]};
            for (int i = 4; i < 8; ++i)
                s[size_t(i)] = {p[size_t(i)], Complex(1) / p[size_t(i)]};
            break;
        case FamilyTag::dA0: {
            const Complex kv = *ctx.kappa * v;
            for (int i = 0; i < 8; ++i) {
                const Complex z = p[size_t(i)];
                s[size_t(i)] = {z * (z + kv), z * (z - kv)};
            }
            break;
        }
        case FamilyTag::qA0:
            for (int i = 0; i < 8; ++i) {
                const Complex z = p[size_t(i)];
                s[size_t(i)] = {z + Complex(1) / (v * z), Complex(1) / z + z / v};
            }
            break;
    }
    return s;
}

ProbeReport confinement_probe_2d(const FiberContext& ctx, int i, Real eps) {
    if (i < 0 || i > 7) throw Error("confinement_probe_2d: index out of range");
    const auto pts = base_points_fiber(ctx);
    const auto& [ai, bi] = pts[size_t(i)];
    const ProjPoint1 target_x(ai), target_y(bi);

    const Complex seeds[2] = {Complex(0.73, 0.29), Complex(-0.41, 0.17)};

    auto measure = [&](Real e, Real& d_pair, Real& d_point, Real& d_line) {
        ProjPoint1 images[2];
        for (int k = 0; k < 2; ++k) {
            const ProjPoint1 x(ai + e);
            const ProjPoint1 y(bi + seeds[static_cast<size_t>(k)]);
            images[k] = i1_fiber(ctx, x, y);
        }
        d_pair = chordal(images[0], images[1]);
        d_point = 0;
        for (const auto& im : images)
            d_point = std::max(d_point,
                               pair_dist(ProjPoint1(ai + e), im, target_x, target_y));
        // Re-expand the first collapsed image through i2; the output keeps its
        // y-coordinate, whose distance to {y = b_i} must stay O(eps).
        const ProjPoint1 x(ai + e);
        (void)i2_fiber(ctx, x, images[0]);
        d_line = chordal(images[0], target_y);
    };

    ProbeReport r;
    r.index = i;
    r.eps = eps;
    measure(eps, r.d_pair, r.d_point, r.d_line);
    measure(eps / 100, r.d_pair_fine, r.d_point_fine, r.d_line_fine);
    r.ratio_point = r.d_point / std::max(r.d_point_fine, Real(1e-300));
    r.ratio_line = r.d_line / std::max(r.d_line_fine, Real(1e-300));

    // A confining map collapses linearly: at the fine offset the distances
    // must have resolved to O(eps), and the coarse/fine ratio must sit at the
    // first-order value ~100. Non-confining maps fail both by orders of
    // magnitude.
    const Real scale = 1 + std::abs(ai) + std::abs(bi);
    const Real fine_bound = 1e4 * (eps / 100) * scale;
    if (r.d_point_fine > fine_bound || r.d_line_fine > fine_bound)
        throw ProbeFailed("confinement_probe_2d: no O(eps) collapse, d_point=" +
                          std::to_string(r.d_point_fine) + " d_line=" +
                          std::to_string(r.d_line_fine));
    if (r.ratio_point < 30 || r.ratio_point > 300 || r.ratio_line < 30 || r.ratio_line > 300)
        throw ProbeFailed("confinement_probe_2d: contraction not first order, ratios " +
                          std::to_string(r.ratio_point) + ", " + std::to_string(r.ratio_line));
    return r;
}

}  // namespace qp
