#include <doctest.h>

#include <random>

#include "qpencil/engine.hpp"

using namespace qp;

namespace {

const FamilyTag kAll[] = {FamilyTag::dA1, FamilyTag::dD4, FamilyTag::qA1, FamilyTag::dA0,
                          FamilyTag::qA0};

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

Real max_residual(const FamilyConfig& cfg, const OrbitTrace& trace) {
    Real worst = 0;
    for (const auto& r : verify_recurrence(cfg, trace)) worst = std::max({worst, r[0], r[1]});
    return worst;
}

}  // namespace

TEST_CASE("step bookkeeping: four half-steps per step") {
    std::mt19937_64 rng(211);
    const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
    const OrbitState s0 = seed_state(cfg, rng);
    const OrbitState s1 = step(cfg, s0);
    CHECK(s1.n2 == s0.n2 + 2);
    CHECK(s1.p.halfsteps == s0.p.halfsteps + 4);
    CHECK(s1.p.pos() == shift(s0.p, 4).pos());  // exact in the additive case

    const FamilyConfig q = sample_admissible(FamilyTag::qA1, rng);
    const OrbitState t0 = seed_state(q, rng);
    const OrbitState t1 = step(q, t0);
    CHECK(std::abs(t1.p.pos() - shift(t0.p, 4).pos()) <= 1e-14 * std::abs(t1.p.pos()));
}

TEST_CASE("trace records the six stage outputs in order") {
    std::mt19937_64 rng(212);
    const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
    const OrbitTrace t = run_orbit(cfg, seed_state(cfg, rng), 2);
    REQUIRE(t.intermediates.size() == 2);
    const char* names[6] = {"L2", "i2", "R2", "L1", "i1", "R1"};
    const long long dh[6] = {1, 1, 2, 3, 3, 4};  // half-steps past the state
    for (size_t k = 0; k < 2; ++k) {
        const long long h0 = t.states[k].p.halfsteps;
        for (int j = 0; j < 6; ++j) {
            CHECK(t.intermediates[k][size_t(j)].stage == names[j]);
            CHECK(t.intermediates[k][size_t(j)].p.halfsteps == h0 + dh[j]);
        }
        // i2 and R2 leave y untouched; L1 and i1 leave x untouched.
        CHECK(chordal(t.intermediates[k][1].y, t.states[k].y) == 0);
        CHECK(chordal(t.intermediates[k][3].x, t.intermediates[k][2].x) == 0);
    }
    CHECK_THROWS_AS(verify_recurrence(cfg, OrbitTrace{}), Error);
}

TEST_CASE("autonomous limit reproduces the QRT map") {
    std::mt19937_64 rng(223);
    for (const FamilyTag tag : kAll) {
        FamilyConfig cfg = sample_admissible(tag, rng);
        cfg.step = is_multiplicative(tag) ? Complex(1) : Complex(0);
        OrbitState s = seed_state(cfg, rng);
        const FiberContext ctx = fiber_context(cfg, s.p);
        ProjPoint1 x = s.x, y = s.y;
        for (int k = 0; k < 5; ++k) {
            s = step(cfg, s);
            auto [xn, yn] = qrt_map(ctx, x, y);
            x = xn;
            y = yn;
            CHECK(chordal(s.x, x) < 1e-12);
            CHECK(chordal(s.y, y) < 1e-12);
        }
    }
}

TEST_CASE("orbits satisfy the published recurrences") {
    std::mt19937_64 rng(227);
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        const OrbitTrace trace = run_orbit(cfg, seed_state(cfg, rng), 12);
        CHECK(trace.states.size() == 13);
        CHECK(max_residual(cfg, trace) < 1e-8);
    }
}

TEST_CASE("negative control: autonomous orbit against the deformed system") {
    std::mt19937_64 rng(229);
    const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
    const OrbitTrace trace = autonomous_mismatch_trace(cfg, seed_state(cfg, rng), 8);
    CHECK(max_residual(cfg, trace) > 1e-2);
}

TEST_CASE("symmetric single-field reduction (dA1)") {
    std::mt19937_64 rng(233);
    const FamilyConfig cfg = sample_symmetric(FamilyTag::dA1, rng);
    const OrbitTrace trace = run_orbit(cfg, seed_state(cfg, rng), 8);

    // u_{2n-1} = x_n, u_{2n} = y_n; nu_m = shift(state0.p, 2m + 1).
    std::vector<Complex> u;
    for (size_t k = 0; k < trace.states.size(); ++k) {
        u.push_back(trace.states[k].x.affine());
        u.push_back(trace.states[k].y.affine());
    }
    const UniformParam base = trace.states[0].p;  // index 2*0 - 1/2
    auto nu_at = [&](long long m2) {  // nu_{m2/2}
        return shift(base, m2 + 1).pos();
    };
    auto psi1 = [&](const Complex& x, const Complex& nu) {
        Complex n(1), d(1);
        for (int i = 0; i < 4; ++i) n *= x - cfg.params[size_t(i)];
        for (int i = 4; i < 8; ++i) d *= x - cfg.params[size_t(i)] - (nu - Complex(1)) / Real(2);
        return n / d;
    };
    // u index: u[j] corresponds to m = j - 1 (u_{-1} = x_0 at j = 0).
    for (size_t j = 1; j + 1 < u.size(); ++j) {
        const long long m = static_cast<long long>(j) - 1;
        const Complex num = (u[j + 1] + u[j]) * (u[j] + u[j - 1]);
        const Complex den =
            (u[j + 1] + u[j] - nu_at(2 * m + 1)) * (u[j] + u[j - 1] - nu_at(2 * m - 1));
        const Complex rhs = psi1(u[j], nu_at(2 * m));
        CHECK(std::abs(num / den - rhs) < 1e-8 * (1 + std::abs(rhs)));
    }
}

TEST_CASE("deformed QRT root squares to the full step") {
    std::mt19937_64 rng(239);
    for (const FamilyTag tag : kAll) {
        const FamilyConfig cfg = sample_symmetric(tag, rng);
        const OrbitState s = seed_state(cfg, rng);
        const OrbitState full = step(cfg, s);
        const OrbitState half = symmetric_root_step(cfg, s);
        CHECK(half.n2 == s.n2 + 1);
        const OrbitState twice = symmetric_root_step(cfg, half);
        CHECK(twice.n2 == full.n2);
        CHECK(chordal(twice.x, full.x) < 1e-9);
        CHECK(chordal(twice.y, full.y) < 1e-9);
    }

    FamilyConfig plain = sample_admissible(FamilyTag::dA1, rng);
    plain.symmetric = false;
    // Generic draws violate the symmetry pattern.
    CHECK_THROWS_AS(symmetric_root_step(plain, seed_state(plain, rng)), NotSymmetric);
}

TEST_CASE("root step with zero deformation is the autonomous QRT root") {
    std::mt19937_64 rng(241);
    FamilyConfig cfg = sample_symmetric(FamilyTag::dA1, rng);
    cfg.step = 0;
    const OrbitState s = seed_state(cfg, rng);
    const OrbitState half = symmetric_root_step(cfg, s);
    const FiberContext ctx = fiber_context(cfg, s.p);
    // f = i1 . sigma
    const ProjPoint1 fx = s.y;
    const ProjPoint1 fy = i1_fiber(ctx, s.y, s.x);
    CHECK(chordal(half.x, fx) < 1e-12);
    CHECK(chordal(half.y, fy) < 1e-12);
}

TEST_CASE("sigma conjugates the left factors") {
    std::mt19937_64 rng(251);
    const FamilyConfig cfg = sample_symmetric(FamilyTag::qA0, rng);
    const DeformationSpec spec = deformation_spec(cfg.tag, cfg.step, cfg.kappa);
    const UniformParam p = origin_param(cfg, *cfg.kappa * Complex(1.1, 0.05));
    std::uniform_real_distribution<Real> u(-0.8, 0.8);
    for (int k = 0; k < 10; ++k) {
        const ProjPoint1 x(Complex(u(rng), 0.3)), y(Complex(u(rng), 0.2));
        const ChartStep l2 = factor_map(spec, FactorKind::L2, p, x, y);
        const ChartStep conj = factor_map(spec, FactorKind::L1, p, y, x);
        CHECK(chordal(l2.x, conj.y) < 1e-12);
    }
}

TEST_CASE("conjugacy: L2 intertwines the step with L i1 L i2") {
    std::mt19937_64 rng(257);
    for (const FamilyTag tag : {FamilyTag::dA1, FamilyTag::qA0, FamilyTag::dD4}) {
        const FamilyConfig cfg = sample_admissible(tag, rng);
        for (int k = 0; k < 3; ++k)
            CHECK(conjugacy_check(cfg, seed_state(cfg, rng)) < 1e-9);
    }
    // delta = 0: both sides reduce to the autonomous F.
    FamilyConfig flat = sample_admissible(FamilyTag::dA1, rng);
    flat.step = 0;
    CHECK(conjugacy_check(flat, seed_state(flat, rng)) < 1e-9);
}

TEST_CASE("3D confinement probes") {
    std::mt19937_64 rng(263);
    const FamilyConfig a1 = sample_admissible(FamilyTag::dA1, rng);
    const ProbeReport r = confinement_probe_3d(a1, 0, 1e-4);
    CHECK(r.ratio_point > 30);
    CHECK(r.ratio_point < 300);

    const FamilyConfig q0 = sample_admissible(FamilyTag::qA0, rng);
    CHECK_NOTHROW(confinement_probe_3d(q0, 4, 1e-5));

    // Undeformed case: collapses onto S_i itself (the 2D pattern).
    FamilyConfig flat = sample_admissible(FamilyTag::dA1, rng);
    flat.step = 0;
    CHECK_NOTHROW(confinement_probe_3d(flat, 1, 1e-4));
}

TEST_CASE("net audit") {
    std::mt19937_64 rng(269);

    FamilyConfig a1 = sample_admissible(FamilyTag::dA1, rng);
    a1.step = 0.3;
    const NetAudit na = net_audit(a1);
    CHECK(na.dim_s >= 3);
    CHECK(na.dim_rs == 2);

    // delta = 0: R1 acts trivially up to reparametrization.
    FamilyConfig flat = a1;
    flat.step = 0;
    const NetAudit nf = net_audit(flat);
    CHECK(nf.dim_rs == nf.dim_s);

    FamilyConfig q1 = sample_admissible(FamilyTag::qA1, rng);
    q1.step = 1.2;
    const NetAudit nq = net_audit(q1);
    CHECK(nq.dim_s >= 3);
    CHECK(nq.dim_rs == 2);

    // dD4 goes through the tangency-scheme rows.
    const FamilyConfig d4 = sample_admissible(FamilyTag::dD4, rng);
    const NetAudit nd = net_audit(d4);
    CHECK(nd.dim_s >= 3);
    CHECK(nd.dim_rs == 2);
}

TEST_CASE("stage errors carry the stage name") {
    std::mt19937_64 rng(271);
    const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
    // Park the state so that the i2 input sits exactly on a base point: the
    // L2 image of the seed must equal s_j(nu_{2n}). Invert L2 on the x part.
    const OrbitState probe = seed_state(cfg, rng);
    const UniformParam p1 = shift(probe.p, 1);
    const auto s = base_points_fiber(fiber_context(cfg, p1));
    // L2: x' = x + d/nu (x + y) with nu at the state. Solve for x given x'.
    const Complex nu = probe.p.pos(), d = cfg.step;
    const Complex target_x = s[2].first, target_y = s[2].second;
    const Complex x0 = (target_x - d / nu * target_y) / (Complex(1) + d / nu);
    OrbitState st = probe;
    st.x = ProjPoint1(x0);
    st.y = ProjPoint1(target_y);
    try {
        (void)step(cfg, st);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage == "i2");
    }
}

TEST_CASE("precision budget halts near-cancellation orbits") {
    std::mt19937_64 rng(277);
    const FamilyConfig cfg = sample_admissible(FamilyTag::dA1, rng);
    OrbitState st = seed_state(cfg, rng);
    // Put y within 1e-12 of the i2 stage's blow-down line {y = b_j(nu_2n)}:
    // catastrophic cancellation without hitting the indeterminacy ball.
    const UniformParam p1 = shift(st.p, 1);
    const auto s = base_points_fiber(fiber_context(cfg, p1));
    st.y = ProjPoint1(s[1].second + Complex(1e-12));
    CHECK_THROWS_AS(run_orbit(cfg, st, 2), PrecisionExhausted);
}
