// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "qpencil/engine.hpp"

using namespace qp;

namespace {

const FamilyTag kAll[] = {FamilyTag::dA1, FamilyTag::dD4, FamilyTag::qA1, FamilyTag::dA0,
                          FamilyTag::qA0};

int g_failures = 0;

void report(int criterion, const char* what, bool pass, double worst, double budget_s,
            double elapsed_s) {
    std::printf("%s criterion %d: %-28s worst %.3e  (%.2fs)\n", pass ? "PASS" : "FAIL",
                criterion, what, worst, elapsed_s);
    if (!pass) ++g_failures;
    if (budget_s > 0 && elapsed_s > budget_s) {
        std::printf("FAIL criterion %d: %-28s runtime %.2fs over budget %.1fs\n", criterion,
                    what, elapsed_s, budget_s);
        ++g_failures;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

OrbitState seed_state(const FamilyConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<Real> u(-0.9, 0.9), v(0.1, 0.45), w(0.9, 1.25);
    Complex x0(u(rng), v(rng)), y0(u(rng), v(rng));
    if (cfg.tag == FamilyTag::qA0) {
        x0 += Complex(1.8);
        y0 += Complex(1.8);
    }
    const Complex pos0 =
        is_multiplicative(cfg.tag) ? *cfg.kappa * Complex(w(rng), 0.05) : Complex(w(rng), 0.03);
    return make_initial_state(cfg, x0, y0, pos0);
}

Complex rational_sample(int k) {
    static const Complex samples[5] = {Complex(1, 2) / Complex(3), Complex(-3) / Complex(7),
                                       Complex(5) / Complex(4), Complex(-1) / Complex(9),
                                       Complex(11) / Complex(6)};
    return samples[k];
}

// 1. Characteristic polynomials against the family closed forms. For dA1 and
// dD4 the operative closed form is 1 - 4 lambda: it is the determinant of the
// displayed matrices and the one the uniformization lambda = (1 - nu^2)/4,
// sqrt(Delta) = nu satisfies; the opposite sign printed in the source text is
// inconsistent with both and with det(M_0) = +1.
void criterion_1() {
    Timer t;
    Real worst = 0;
    for (const FamilyTag tag : kAll) {
        const std::optional<Complex> kap =
            is_multiplicative(tag) || tag == FamilyTag::dA0
                ? std::optional<Complex>(Complex(1.7))
                : std::nullopt;
        const Poly delta = char_poly(family_pencil(tag, kap));
        for (int k = 0; k < 5; ++k) {
            const Complex lam = rational_sample(k);
            Complex want;
            switch (tag) {
                case FamilyTag::dA1:
                case FamilyTag::dD4: want = Complex(1) - Real(4) * lam; break;
                case FamilyTag::dA0: want = Complex(1) + Real(4) * lam; break;
                case FamilyTag::qA1:
                case FamilyTag::qA0: {
                    const Complex kk = *kap;
                    want = (Complex(1) + (Complex(1) + kk) * (Complex(1) + kk) * lam) *
                           (Complex(1) + (Complex(1) - kk) * (Complex(1) - kk) * lam);
                    break;
                }
            }
            worst = std::max(worst, std::abs(delta.eval(lam) - want) / (1 + std::abs(want)));
        }
    }
    report(1, "characteristic polynomials", worst < 1e-12, worst, 1.0, t.seconds());
}

// 2. Normalization identity A^T M_lambda A = c M0.
void criterion_2() {
    Timer t;
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<Real> u(0.75, 1.6), v(-0.25, 0.25);
    Real worst = 0;
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        const QuadricPencil pencil = family_pencil(tag, cfg.kappa);
        for (int k = 0; k < 50; ++k) {
            const Complex base(u(rng), v(rng));
            const UniformParam p =
                origin_param(cfg, is_multiplicative(tag) ? *cfg.kappa * base : base);
            const ChartMatrix c = chart_matrix(tag, p, cfg.kappa);
            const Mat4 m = pencil.at(lambda_of(p, cfg.kappa));
            worst = std::max(worst,
                             (c.a.transpose() * m * c.a - c.scale * pencil.m0.m).norm() /
                                 (std::abs(c.scale) * pencil.m0.m.norm()));
        }
    }
    report(2, "normalization identity", worst < 1e-10, worst, 1.0, t.seconds());
}

// 3. Pencil classification: exact tag match per family.
void criterion_3() {
    Timer t;
    std::mt19937_64 rng(1003);
    const std::pair<FamilyTag, PencilClass> expected[] = {{FamilyTag::dA1, PencilClass::v},
                                                          {FamilyTag::dD4, PencilClass::vi},
                                                          {FamilyTag::qA1, PencilClass::iv},
                                                          {FamilyTag::dA0, PencilClass::iii},
                                                          {FamilyTag::qA0, PencilClass::ii}};
    bool pass = true;
    for (const auto& [tag, cls] : expected) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        pass = pass && classify_pencil(family_pencil(tag, cfg.kappa)).tag == cls;
    }
    report(3, "pencil classification", pass, pass ? 0.0 : 1.0, 0, t.seconds());
}

// 4. Theorem-3 contract: fiber transport and base-point fixing.
void criterion_4() {
    Timer t;
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<Real> u(0.8, 1.5), v(-0.2, 0.2), c(-1, 1);
    Real worst_fiber = 0, worst_fix = 0;
    for (const FamilyTag tag : kAll) {
        for (int draw = 0; draw < 20; ++draw) {
            const FamilyConfig cfg = sample_admissible(tag, rng);
            const DeformationSpec spec = deformation_spec(tag, cfg.step, cfg.kappa);
            const QuadricPencil pencil = family_pencil(tag, cfg.kappa);
            const Complex base(u(rng), v(rng));
            const UniformParam p =
                origin_param(cfg, is_multiplicative(tag) ? *cfg.kappa * base : base);
            const ChartMatrix chart = chart_matrix(tag, p, cfg.kappa);
            const ProjPoint3 X =
                phi(chart, ProjPoint1(Complex(c(rng), 0.3)), ProjPoint1(Complex(c(rng), 0.2)));
            const ProjPoint3 Y = L_homogeneous(spec, pencil, p, X);
            const Complex lam_hat = lambda_of(shift(p, 2), cfg.kappa);
            worst_fiber = std::max(
                worst_fiber,
                std::abs(eval_quadric(pencil.m0, Y) - lam_hat * eval_quadric(pencil.mInf, Y)));
            for (const auto& S : base_points_lifted(cfg))
                worst_fix = std::max(worst_fix, chordal(L_homogeneous(spec, pencil, p, S), S));
        }
    }
    const bool pass = worst_fiber < 1e-8 && worst_fix < 1e-10;
    report(4, "deformation contract", pass, std::max(worst_fiber, worst_fix), 0, t.seconds());
}

// 5. Involutivity and conservation of mu under the autonomous map.
void criterion_5() {
    Timer t;
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<Real> u(-1.1, 1.1), v(0.1, 0.6), w(0.8, 1.5);
    Real worst_inv = 0, worst_mu = 0;
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        for (int k = 0; k < 100; ++k) {
            const Complex base(w(rng), v(rng) * 0.3);
            const UniformParam p =
                origin_param(cfg, is_multiplicative(tag) ? *cfg.kappa * base : base);
            const FiberContext ctx = fiber_context(cfg, p);
            const ProjPoint1 x(Complex(u(rng), v(rng))), y(Complex(u(rng), v(rng)));
            worst_inv = std::max(worst_inv, chordal(i1_fiber(ctx, x, i1_fiber(ctx, x, y)), y));
            worst_inv = std::max(worst_inv, chordal(i2_fiber(ctx, i2_fiber(ctx, x, y), y), x));
        }

        const FamilyPencils pens = build_pencils(cfg);
        const FiberContext ctx = fiber_context(cfg, origin_param(cfg, autonomous_pos(cfg)));
        auto mu = [&](const ProjPoint1& x, const ProjPoint1& y) {
            const ProjPoint3 X = segre_embed(x, y);
            return eval_quadric(pens.p0, X) / eval_quadric(pens.p_inf, X);
        };
        ProjPoint1 x(Complex(0.84, 0.31)), y(Complex(0.42, 0.18));
        if (tag == FamilyTag::qA0) {
            x = ProjPoint1(Complex(2.1, 0.3));
            y = ProjPoint1(Complex(1.8, 0.2));
        }
        const Complex mu0 = mu(x, y);
        for (int k = 0; k < 100; ++k) {
            auto [xn, yn] = qrt_map(ctx, x, y);
            x = xn;
            y = yn;
            worst_mu = std::max(worst_mu, std::abs(mu(x, y) - mu0) / std::abs(mu0));
        }
    }
    const bool pass = worst_inv < 1e-9 && worst_mu < 1e-6;
    report(5, "involutivity and integrals", pass, std::max(worst_inv, worst_mu), 0, t.seconds());
}

// 6. Recurrence reproduction plus the negative control.
void criterion_6() {
    Timer t;
    std::mt19937_64 rng(1006);
    Real worst = 0;
    Real control = 1e9;
    for (const FamilyTag tag : kAll) {
        for (int draw = 0; draw < 10; ++draw) {
            const FamilyConfig cfg = sample_admissible(tag, rng);
            OrbitTrace trace;
            for (int attempt = 0;; ++attempt) {
                try {
                    trace = run_orbit(cfg, seed_state(cfg, rng), 12);
                    break;
                } catch (const Error&) {
                    if (attempt >= 4) throw;
                }
            }
            for (const auto& r : verify_recurrence(cfg, trace))
                worst = std::max({worst, r[0], r[1]});
        }
    }
    {
        const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
        const OrbitTrace trace = autonomous_mismatch_trace(cfg, seed_state(cfg, rng), 8);
        Real biggest = 0;
        for (const auto& r : verify_recurrence(cfg, trace))
            biggest = std::max({biggest, r[0], r[1]});
        control = biggest;
    }
    const bool pass = worst < 1e-8 && control > 1e-2;
    std::printf("     criterion 6 detail: orbit residual %.3e, negative control %.3e\n", worst,
                control);
    report(6, "recurrence reproduction", pass, worst, 5.0, t.seconds());
}

// 7. Factorization and conjugacy; symmetric root squares to the step.
void criterion_7() {
    Timer t;
    std::mt19937_64 rng(1007);
    std::uniform_real_distribution<Real> u(-1, 1), v(0.1, 0.5), w(0.85, 1.4);
    Real worst = 0;
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        const DeformationSpec spec = deformation_spec(tag, cfg.step, cfg.kappa);
        for (int k = 0; k < 10; ++k) {
            const Complex base(w(rng), v(rng) * 0.4);
            const UniformParam p =
                origin_param(cfg, is_multiplicative(tag) ? *cfg.kappa * base : base);
            const ProjPoint1 x(Complex(u(rng), v(rng))), y(Complex(u(rng), v(rng)));
            const ChartStep full = L_chart(spec, p, x, y);
            const ChartStep r2 = factor_map(spec, FactorKind::R2, p, x, y);
            const ChartStep l1 = factor_map(spec, FactorKind::L1, r2.param, r2.x, r2.y);
            const ChartStep r1 = factor_map(spec, FactorKind::R1, p, x, y);
            const ChartStep l2 = factor_map(spec, FactorKind::L2, r1.param, r1.x, r1.y);
            for (const ChartStep* s : {&l1, &l2}) {
                worst = std::max(worst, chordal(s->x, full.x));
                worst = std::max(worst, chordal(s->y, full.y));
            }
        }
        worst = std::max(worst, conjugacy_check(cfg, seed_state(cfg, rng)));

        const FamilyConfig sym = sample_symmetric(tag, rng);
        const OrbitState s = seed_state(sym, rng);
        const OrbitState full = step(sym, s);
        const OrbitState twice = symmetric_root_step(sym, symmetric_root_step(sym, s));
        worst = std::max(worst, chordal(twice.x, full.x));
        worst = std::max(worst, chordal(twice.y, full.y));
    }
    report(7, "factorization and conjugacy", worst < 1e-9, worst, 0, t.seconds());
}

// 8. Singularity confinement probes at every base point of every family.
void criterion_8() {
    Timer t;
    std::mt19937_64 rng(1008);
    bool pass = true;
    Real worst_ratio_err = 0;
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        for (int i = 0; i < 8; ++i) {
            try {
                const ProbeReport r = confinement_probe_3d(cfg, i, 1e-4);
                worst_ratio_err =
                    std::max(worst_ratio_err, std::abs(std::log10(r.ratio_point / 100)));
            } catch (const Error& e) {
                std::printf("     criterion 8 failure at %s i=%d: %s\n",
                            to_string(tag).c_str(), i + 1, e.what());
                pass = false;
            }
        }
    }
    report(8, "singularity confinement", pass, worst_ratio_err, 10.0, t.seconds());
}

// 9. Net audit: S_i support a net, R1(S_i) only a pencil.
void criterion_9() {
    Timer t;
    std::mt19937_64 rng(1009);
    bool pass = true;
    for (const FamilyTag tag : kAll) {
        for (int draw = 0; draw < 5; ++draw) {
            const FamilyConfig cfg = sample_admissible(tag, rng);
            const NetAudit audit = net_audit(cfg);
            if (!(audit.dim_s >= 3 && audit.dim_rs == 2)) {
                std::printf("     criterion 9 failure at %s draw %d: dimS=%d dimRS=%d\n",
                            to_string(tag).c_str(), draw, audit.dim_s, audit.dim_rs);
                pass = false;
            }
        }
    }
    report(9, "net audit", pass, pass ? 0.0 : 1.0, 0, t.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance failure(s)\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
