#include "qpencil/engine.hpp"

#include <cfloat>
#include <cmath>

namespace qp {

namespace {

constexpr Real kPrecisionBudget = 1e-6;

DeformationSpec spec_of(const FamilyConfig& cfg) {
    return deformation_spec(cfg.tag, cfg.step, cfg.kappa);
}

Complex finite(const ProjPoint1& p, const char* what) {
    if (!p.is_finite()) throw Error(std::string(what) + ": orbit point at infinity");
    return p.affine();
}

Real rel_residual(const Complex& lhs, const Complex& rhs) {
    const Real scale = std::abs(lhs) + std::abs(rhs);
    if (scale == 0) return 0;
    return std::abs(lhs - rhs) / scale;
}

}  // namespace

OrbitState make_initial_state(const FamilyConfig& cfg, const Complex& x0, const Complex& y0,
                              const Complex& pos0) {
    // The run's origin sits at integer index 0; the state carries index
    // 2n - 1/2 with n = 0, i.e. one half-step before the origin.
    const UniformParam origin = origin_param(cfg, pos0);
    return OrbitState{0, ProjPoint1(x0), ProjPoint1(y0), shift(origin, -1)};
}

OrbitState step(const FamilyConfig& cfg, const OrbitState& s,
                std::array<StageRecord, 6>* stages, Real* cond) {
    const DeformationSpec spec = spec_of(cfg);
    ProjPoint1 x = s.x, y = s.y;
    UniformParam p = s.p;

    auto record = [&](int k, const char* name) {
        if (stages) (*stages)[static_cast<size_t>(k)] = StageRecord{name, x, y, p};
    };
    auto guarded = [&](const char* name, auto&& body) {
        try {
            body();
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            throw StageError(name, e.what());
        }
    };

    auto budget = [&] {
        if (cond && *cond * DBL_EPSILON > kPrecisionBudget)
            throw PrecisionExhausted("step: worst conditioning " + std::to_string(*cond) +
                                     " predicts relative error above 1e-6");
    };

    guarded("L2", [&] {
        const ChartStep r = factor_map(spec, FactorKind::L2, p, x, y);
        x = r.x;
        p = r.param;
    });
    record(0, "L2");
    guarded("i2", [&] { x = i2_fiber_cond(fiber_context(cfg, p), x, y, cond); });
    budget();
    record(1, "i2");
    guarded("R2", [&] {
        const ChartStep r = factor_map(spec, FactorKind::R2, p, x, y);
        x = r.x;
        p = r.param;
    });
    record(2, "R2");
    guarded("L1", [&] {
        const ChartStep r = factor_map(spec, FactorKind::L1, p, x, y);
        y = r.y;
        p = r.param;
    });
    record(3, "L1");
    guarded("i1", [&] { y = i1_fiber_cond(fiber_context(cfg, p), x, y, cond); });
    budget();
    record(4, "i1");
    guarded("R1", [&] {
        const ChartStep r = factor_map(spec, FactorKind::R1, p, x, y);
        y = r.y;
        p = r.param;
    });
    record(5, "R1");

    return OrbitState{s.n2 + 2, x, y, p};
}

OrbitTrace run_orbit(const FamilyConfig& cfg, const OrbitState& initial, int n_steps) {
    OrbitTrace trace;
    trace.states.push_back(initial);
    for (int k = 0; k < n_steps; ++k) {
        std::array<StageRecord, 6> stages;
        Real cond = 1;
        const OrbitState next = step(cfg, trace.states.back(), &stages, &cond);
        trace.worst_conditioning = std::max(trace.worst_conditioning, cond);
        trace.states.push_back(next);
        trace.intermediates.push_back(stages);
    }
    return trace;
}

OrbitTrace autonomous_mismatch_trace(const FamilyConfig& cfg, const OrbitState& initial,
                                     int n_steps) {
    OrbitTrace trace;
    trace.states.push_back(initial);
    const FiberContext ctx = fiber_context(cfg, initial.p);
    ProjPoint1 x = initial.x, y = initial.y;
    for (int k = 0; k < n_steps; ++k) {
        auto [xn, yn] = qrt_map(ctx, x, y);
        x = xn;
        y = yn;
        trace.states.push_back(
            OrbitState{initial.n2 + 2 * (k + 1), x, y, shift(initial.p, 4 * (k + 1))});
    }
    return trace;
}

namespace {

struct Grid {
    // Positions around one step: state p sits at index 2n - 1/2.
    Complex prev_int;   // nu_{2n-1}
    Complex at_state;   // nu_{2n-1/2}
    Complex int0;       // nu_{2n}
    Complex half1;      // nu_{2n+1/2}
    Complex int1;       // nu_{2n+1}
    Complex half2;      // nu_{2n+3/2}
    Complex int2;       // nu_{2n+2}
};

Grid grid_at(const UniformParam& p) {
    return Grid{shift(p, -1).pos(), p.pos(),          shift(p, 1).pos(), shift(p, 2).pos(),
                shift(p, 3).pos(),  shift(p, 4).pos(), shift(p, 5).pos()};
}

std::pair<Complex, Complex> quad_roots(const Complex& s2, const Complex& s1,
                                       const Complex& s0) {
    const Complex disc = std::sqrt(s1 * s1 - Real(4) * s2 * s0);
    const Complex q = (std::abs(-s1 + disc) >= std::abs(-s1 - disc)) ? (-s1 + disc) / Real(2)
                                                                     : (-s1 - disc) / Real(2);
    return {q / s2, s0 / q};
}

}  // namespace

std::vector<std::array<Real, 2>> verify_recurrence(const FamilyConfig& cfg,
                                                   const OrbitTrace& trace) {
    if (trace.states.size() < 2) throw Error("verify_recurrence: need at least two states");
    std::vector<std::array<Real, 2>> out;
    const auto& pr = cfg.params;

    for (size_t k = 0; k + 1 < trace.states.size(); ++k) {
        const OrbitState& s0 = trace.states[k];
        const OrbitState& s1 = trace.states[k + 1];
        const Grid g = grid_at(s0.p);
        const Complex x0 = finite(s0.x, "verify_recurrence");
        const Complex y0 = finite(s0.y, "verify_recurrence");
        const Complex x1 = finite(s1.x, "verify_recurrence");
        const Complex y1 = finite(s1.y, "verify_recurrence");
        std::array<Real, 2> res{0, 0};

        switch (cfg.tag) {
            case FamilyTag::dA1: {
                auto psi1 = [&](const Complex& x, const Complex& nu) {
                    Complex n(1), d(1);
                    for (int i = 0; i < 4; ++i) n *= x - pr[size_t(i)];
                    for (int i = 4; i < 8; ++i)
                        d *= x - pr[size_t(i)] - (nu - Complex(1)) / Real(2);
                    return n / d;
                };
                auto psi2 = [&](const Complex& y, const Complex& nu) {
                    Complex n(1), d(1);
                    for (int i = 0; i < 4; ++i) n *= y + pr[size_t(i)];
                    for (int i = 4; i < 8; ++i)
                        d *= y + pr[size_t(i)] - (Complex(1) + nu) / Real(2);
                    return n / d;
                };
                const Complex lhs1 = (x1 + y0) * (x0 + y0) /
                                     ((x1 + y0 - g.half1) * (x0 + y0 - g.at_state));
                const Complex lhs2 = (x1 + y1) * (x1 + y0) /
                                     ((x1 + y1 - g.half2) * (x1 + y0 - g.half1));
                res = {rel_residual(lhs1, psi2(y0, g.int0)),
                       rel_residual(lhs2, psi1(x1, g.int1))};
                break;
            }
            case FamilyTag::dD4: {
                Complex sum1(0), sum2(0);
                for (int i = 0; i < 4; ++i) {
                    sum1 += Complex(1) / (y0 + pr[size_t(i)]);
                    sum2 += Complex(1) / (x1 - pr[size_t(i)]);
                }
                const Complex lhs1 = g.half1 / (x1 + y0) + g.at_state / (x0 + y0);
                const Complex lhs2 = g.half2 / (x1 + y1) + g.half1 / (x1 + y0);
                res = {rel_residual(lhs1, g.int0 / Real(2) * sum1),
                       rel_residual(lhs2, g.int1 / Real(2) * sum2)};
                break;
            }
            case FamilyTag::qA1: {
                Complex r1n(1), r1d(1), r2n(1), r2d(1);
                for (int i = 0; i < 4; ++i) {
                    r1n *= y0 - g.int0 / pr[size_t(i)];
                    r2n *= x1 - g.int1 * pr[size_t(i)];
                }
                for (int i = 4; i < 8; ++i) {
                    r1d *= y0 - Complex(1) / pr[size_t(i)];
                    r2d *= x1 - pr[size_t(i)];
                }
                const Complex lhs1 = (x1 * y0 - g.int1 * g.int0) * (x0 * y0 - g.int0 * g.prev_int) /
                                     ((x1 * y0 - Complex(1)) * (x0 * y0 - Complex(1)));
                const Complex lhs2 = (y1 * x1 - g.int2 * g.int1) * (y0 * x1 - g.int1 * g.int0) /
                                     ((y1 * x1 - Complex(1)) * (y0 * x1 - Complex(1)));
                res = {rel_residual(lhs1, r1n / r1d), rel_residual(lhs2, r2n / r2d)};
                break;
            }
            case FamilyTag::dA0: {
                const Complex kk = *cfg.kappa;
                UPoly U{{}, false};
                for (int i = 0; i < 8; ++i) U.roots[size_t(i)] = pr[size_t(i)];
                // E1 over both eta with y0 = eta(eta - kappa nu_{2n})
                const auto etas = quad_roots(Complex(1), -kk * g.int0, -y0);
                for (const Complex& eta : {etas.first, etas.second}) {
                    const Complex lhs =
                        (x1 - eta * (eta + kk * g.int1)) * (x0 - eta * (eta + kk * g.prev_int)) /
                        ((x1 - (eta - kk * g.int0) * (eta - kk * g.int1 - kk * g.int0)) *
                         (x0 - (eta - kk * g.int0) * (eta - kk * g.int0 - kk * g.prev_int)));
                    res[0] = std::max(res[0],
                                      rel_residual(lhs, U.eval(eta) / U.eval(kk * g.int0 - eta)));
                }
                // E2 over both xi with x1 = xi(xi + kappa nu_{2n+1})
                const auto xis = quad_roots(Complex(1), kk * g.int1, -x1);
                for (const Complex& xi : {xis.first, xis.second}) {
                    const Complex lhs =
                        (y1 - xi * (xi - kk * g.int2)) * (y0 - xi * (xi - kk * g.int0)) /
                        ((y1 - (xi + kk * g.int1) * (xi + kk * g.int2 + kk * g.int1)) *
                         (y0 - (xi + kk * g.int1) * (xi + kk * g.int1 + kk * g.int0)));
                    res[1] = std::max(res[1],
                                      rel_residual(lhs, U.eval(xi) / U.eval(-kk * g.int1 - xi)));
                }
                break;
            }
            case FamilyTag::qA0: {
                UPoly U{{}, true};
                for (int i = 0; i < 8; ++i) U.roots[size_t(i)] = pr[size_t(i)];
                // E1 over both eta with y0 = 1/eta + eta/w_{2n}
                const auto etas = quad_roots(Complex(1), -g.int0 * y0, g.int0);
                for (const Complex& eta : {etas.first, etas.second}) {
                    const Complex lhs =
                        (x1 - eta - Complex(1) / (g.int1 * eta)) *
                        (x0 - eta - Complex(1) / (g.prev_int * eta)) /
                        ((x1 - g.int0 / eta - eta / (g.int0 * g.int1)) *
                         (x0 - g.int0 / eta - eta / (g.int0 * g.prev_int)));
                    res[0] = std::max(res[0],
                                      rel_residual(lhs, U.eval(eta) / U.eval(g.int0 / eta)));
                }
                // E2 over both xi with x1 = xi + 1/(w_{2n+1} xi)
                const auto xis = quad_roots(g.int1, -g.int1 * x1, Complex(1));
                for (const Complex& xi : {xis.first, xis.second}) {
                    const Complex lhs =
                        (y1 - Complex(1) / xi - xi / g.int2) *
                        (y0 - Complex(1) / xi - xi / g.int0) /
                        ((y1 - g.int1 * xi - Complex(1) / (g.int2 * g.int1 * xi)) *
                         (y0 - g.int1 * xi - Complex(1) / (g.int1 * g.int0 * xi)));
                    res[1] = std::max(
                        res[1], rel_residual(lhs, U.eval(xi) / U.eval(Complex(1) / (g.int1 * xi))));
                }
                break;
            }
        }
        out.push_back(res);
    }
    return out;
}

OrbitState symmetric_root_step(const FamilyConfig& cfg, const OrbitState& s) {
    require_symmetric(cfg);
    const DeformationSpec spec = spec_of(cfg);

    // f~ = (sigma . R2 . sigma) . i1 . sigma . L2, half of the full step. The
    // trailing factor equals R1 whenever the deformation is sigma-equivariant
    // (every family except qA1, whose L is anchored on X2); the conjugate form
    // is the one that squares to the full step in all cases.
    ChartStep l2 = factor_map(spec, FactorKind::L2, s.p, s.x, s.y);
    ProjPoint1 sx = s.y, sy = l2.x;  // sigma swap
    const ProjPoint1 yn = i1_fiber(fiber_context(cfg, l2.param), sx, sy);
    const ChartStep r2 = factor_map(spec, FactorKind::R2, l2.param, yn, sx);
    return OrbitState{s.n2 + 1, sx, r2.x, r2.param};
}

Real conjugacy_check(const FamilyConfig& cfg, const OrbitState& s) {
    const DeformationSpec spec = spec_of(cfg);

    // Left side: L2(F~(s)), landing on the integer fiber 2n + 2.
    const OrbitState fs = step(cfg, s);
    const ChartStep left = factor_map(spec, FactorKind::L2, fs.p, fs.x, fs.y);

    // Right side: (L . i1 . L . i2)(L2(s)).
    ChartStep r = factor_map(spec, FactorKind::L2, s.p, s.x, s.y);
    ProjPoint1 x = r.x, y = s.y;
    x = i2_fiber(fiber_context(cfg, r.param), x, y);
    ChartStep l = L_chart(spec, r.param, x, y);
    x = l.x;
    y = l.y;
    y = i1_fiber(fiber_context(cfg, l.param), x, y);
    ChartStep l2 = L_chart(spec, l.param, x, y);

    const ChartMatrix chart = chart_matrix(cfg.tag, left.param, cfg.kappa);
    return chordal(phi(chart, left.x, left.y), phi(chart, l2.x, l2.y));
}

ProbeReport confinement_probe_3d(const FamilyConfig& cfg, int i, Real eps) {
    if (i < 0 || i > 7) throw Error("confinement_probe_3d: index out of range");
    const DeformationSpec spec = spec_of(cfg);
    const UniformParam p0 = origin_param(cfg, autonomous_pos(cfg));

    // Grid (in half-steps from the origin): i1~ consumes states at +1,
    // i1 acts on the fiber at +2, its image lives at +3; i2~ then maps
    // +3 -> i2 at +4 -> output at +5.
    const UniformParam p_in = shift(p0, 1);
    const UniformParam p_i1 = shift(p0, 2);
    const UniformParam p_mid = shift(p0, 3);
    const UniformParam p_i2 = shift(p0, 4);

    const auto s_at_i1 = base_points_fiber(fiber_context(cfg, p_i1));
    const auto [ai, bi] = s_at_i1[size_t(i)];

    // Collapse target R1(S_i): the base point pushed through R1 into the
    // chart at +3.
    const ChartStep rs =
        factor_map(spec, FactorKind::R1, p_i1, ProjPoint1(ai), ProjPoint1(bi));
    const ChartMatrix chart_mid = chart_matrix(cfg.tag, p_mid, cfg.kappa);
    const ProjPoint3 target = phi(chart_mid, ProjPoint1(ai), rs.y);

    // Re-expansion target line {y = b_i} on the fiber at +4.
    const auto s_at_i2 = base_points_fiber(fiber_context(cfg, p_i2));
    const ProjPoint1 line_y(s_at_i2[size_t(i)].second);

    const Complex seeds[2] = {Complex(0.67, 0.23), Complex(-0.35, 0.41)};

    auto tilde_i1 = [&](const ProjPoint1& x, const ProjPoint1& y) {
        ChartStep a = factor_map(spec, FactorKind::L1, p_in, x, y);
        const ProjPoint1 yn = i1_fiber(fiber_context(cfg, a.param), x, a.y);
        return factor_map(spec, FactorKind::R1, a.param, x, yn);
    };
    auto tilde_i2 = [&](const ProjPoint1& x, const ProjPoint1& y) {
        ChartStep a = factor_map(spec, FactorKind::L2, p_mid, x, y);
        const ProjPoint1 xn = i2_fiber(fiber_context(cfg, a.param), a.x, y);
        return factor_map(spec, FactorKind::R2, a.param, xn, y);
    };

    auto measure = [&](Real e, Real& d_pair, Real& d_point, Real& d_line) {
        const ProjPoint1 x_seed(ai + e);
        ProjPoint3 images[2];
        ChartStep outs[2] = {tilde_i1(x_seed, ProjPoint1(bi + seeds[0])),
                             tilde_i1(x_seed, ProjPoint1(bi + seeds[1]))};
        for (int k = 0; k < 2; ++k)
            images[k] = phi(chart_mid, outs[static_cast<size_t>(k)].x,
                            outs[static_cast<size_t>(k)].y);
        d_pair = chordal(images[0], images[1]);
        d_point = std::max(chordal(images[0], target), chordal(images[1], target));
        const ChartStep expanded = tilde_i2(outs[0].x, outs[0].y);
        d_line = chordal(expanded.y, line_y);
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
        throw ProbeFailed("confinement_probe_3d: no O(eps) collapse, d_point=" +
                          std::to_string(r.d_point_fine) + " d_line=" +
                          std::to_string(r.d_line_fine));
    if (r.ratio_point < 30 || r.ratio_point > 300 || r.ratio_line < 30 || r.ratio_line > 300)
        throw ProbeFailed("confinement_probe_3d: contraction not first order, ratios " +
                          std::to_string(r.ratio_point) + ", " + std::to_string(r.ratio_line));
    return r;
}

NetAudit net_audit(const FamilyConfig& cfg) {
    const DeformationSpec spec = spec_of(cfg);
    const UniformParam p0 = origin_param(cfg, autonomous_pos(cfg));
    const UniformParam p_i1 = shift(p0, 2);
    const UniformParam p_mid = shift(p0, 3);
    const ChartMatrix chart_mid = chart_matrix(cfg.tag, p_mid, cfg.kappa);

    NetAudit out;
    const bool scheme = (cfg.tag == FamilyTag::dD4);

    // Quadrics through the undeformed S_i.
    {
        std::vector<ProjPoint3> pts;
        std::vector<TangentCondition3> tans;
        const auto S = base_points_lifted(cfg);
        if (scheme) {
            Vec4 dir;
            dir << 1, 1, 0, 0;
            for (int i = 0; i < 4; ++i) {
                pts.push_back(S[size_t(i)]);
                tans.push_back({S[size_t(i)], dir});
            }
        } else {
            pts.assign(S.begin(), S.end());
        }
        out.dim_s = quadric_space_dim_through(pts, kDefaultRelTol, tans);
    }

    // Quadrics through the R1(S_i).
    {
        std::vector<ProjPoint3> pts;
        std::vector<TangentCondition3> tans;
        const auto s = base_points_fiber(fiber_context(cfg, p_i1));
        const Complex nu = p_i1.pos();
        const int count = scheme ? 4 : 8;
        for (int i = 0; i < count; ++i) {
            const auto& [a, b] = s[size_t(i)];
            const ChartStep r =
                factor_map(spec, FactorKind::R1, p_i1, ProjPoint1(a), ProjPoint1(b));
            const ProjPoint3 P = phi(chart_mid, ProjPoint1(a), r.y);
            pts.push_back(P);
            if (scheme) {
                // Tangent of the infinitely-near pair transported through R1:
                // in-chart direction (nu, nu + 2 delta), product coordinate
                // a*dy + b*dx = 2 a delta (b = -a on this family).
                const Complex d = cfg.step;
                Vec4 chart_dir;
                chart_dir << nu, nu + Real(2) * d, Real(2) * a * d, 0;
                const Vec4 D = chart_mid.a * chart_dir;
                tans.push_back({P, D});
            }
        }
        out.dim_rs = quadric_space_dim_through(pts, kDefaultRelTol, tans);
    }
    return out;
}

}  // namespace qp
