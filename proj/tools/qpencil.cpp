// Command-line front end: orbit generation, verification suites, pencil
// classification, confinement probes, and data export.
//
// Exit codes: 0 success, 1 verification failure (or bad input), 2 a map
// stage hit its indeterminacy locus, 3 precision budget exhausted.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "qpencil/config_io.hpp"
#include "qpencil/engine.hpp"

using nlohmann::json;
using namespace qp;

namespace {

json jc(const Complex& z) { return json::array({z.real(), z.imag()}); }

json jpoint1(const ProjPoint1& p) {
    if (!p.is_finite()) return json();  // null marks the point at infinity
    return jc(p.affine());
}

json jconfig(const RunConfig& rc) {
    json j;
    j["family"] = to_string(rc.family.tag);
    j["step"] = jc(rc.family.step);
    if (rc.family.kappa) j["kappa"] = jc(*rc.family.kappa);
    json pts = json::array();
    for (const auto& p : rc.family.params) pts.push_back(jc(p));
    j["points"] = pts;
    j["symmetric"] = rc.family.symmetric;
    j["pos0"] = jc(rc.pos0);
    j["x0"] = jc(rc.x0);
    j["y0"] = jc(rc.y0);
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw Error("cannot open output file " + out_path);
        f << j.dump(2) << "\n";
    }
}

std::string csv_complex(const Complex& z) { return format_complex(z); }

PencilClass expected_class(FamilyTag t) {
    switch (t) {
        case FamilyTag::dA1: return PencilClass::v;
        case FamilyTag::dD4: return PencilClass::vi;
        case FamilyTag::qA1: return PencilClass::iv;
        case FamilyTag::dA0: return PencilClass::iii;
        case FamilyTag::qA0: return PencilClass::ii;
    }
    throw Error("unknown family");
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    unsigned long long seed = 12345;
    Real tol = 1e-8;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = false) {
    cmd->add_option("--config", o.config_path, "config file (key=value)")->required();
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    cmd->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
    if (with_format) cmd->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

// ---------------------------------------------------------------------------
// orbit
// ---------------------------------------------------------------------------

int cmd_orbit(const CommonOpts& o, int steps, bool mismatch, const std::string& replay) {
    const RunConfig rc = load_config_file(o.config_path);

    OrbitTrace trace;
    if (!replay.empty()) {
        std::ifstream f(replay);
        if (!f) throw Error("cannot open replay file " + replay);
        json jin = json::parse(f);
        for (const auto& js : jin.at("states")) {
            OrbitState s;
            s.n2 = js.at("n2").get<long long>();
            if (js.at("x").is_null() || js.at("y").is_null())
                throw Error("replay: state at infinity cannot be re-verified");
            s.x = ProjPoint1(Complex(js.at("x")[0], js.at("x")[1]));
            s.y = ProjPoint1(Complex(js.at("y")[0], js.at("y")[1]));
            const Complex pos(js.at("pos")[0], js.at("pos")[1]);
            s.p = is_multiplicative(rc.family.tag)
                      ? UniformParam::multiplicative_param(rc.family.tag, pos, rc.family.step)
                      : UniformParam::additive(rc.family.tag, pos, rc.family.step);
            trace.states.push_back(s);
        }
    } else {
        const OrbitState init = make_initial_state(rc.family, rc.x0, rc.y0, rc.pos0);
        trace = mismatch ? autonomous_mismatch_trace(rc.family, init, steps)
                         : run_orbit(rc.family, init, steps);
    }

    std::vector<std::array<Real, 2>> residuals;
    if (trace.states.size() >= 2) residuals = verify_recurrence(rc.family, trace);
    Real max_res = 0;
    for (const auto& r : residuals) max_res = std::max({max_res, r[0], r[1]});

    if (o.format == "csv") {
        std::ostringstream os;
        os << "n,x,y,pos,res1,res2\n";
        for (size_t k = 0; k < trace.states.size(); ++k) {
            const auto& s = trace.states[k];
            os << (s.n2 / 2.0) << "," << csv_complex(s.x.affine()) << ","
               << csv_complex(s.y.affine()) << "," << csv_complex(s.p.pos());
            if (k > 0)
                os << "," << residuals[k - 1][0] << "," << residuals[k - 1][1];
            else
                os << ",,";
            os << "\n";
        }
        os << "# max_residual," << max_res << ",tolerance," << o.tol << ",seed," << o.seed
           << "\n";
        if (o.out_path.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(o.out_path);
            f << os.str();
        }
    } else {
        json j;
        j["command"] = "orbit";
        j["seed"] = o.seed;
        j["config"] = jconfig(rc);
        j["autonomous_mismatch"] = mismatch;
        json states = json::array();
        for (const auto& s : trace.states) {
            json js;
            js["n2"] = s.n2;
            js["x"] = jpoint1(s.x);
            js["y"] = jpoint1(s.y);
            js["pos"] = jc(s.p.pos());
            states.push_back(js);
        }
        j["states"] = states;
        json jr = json::array();
        for (const auto& r : residuals) jr.push_back(json::array({r[0], r[1]}));
        j["residuals"] = jr;
        j["max_residual"] = max_res;
        j["tolerance"] = o.tol;
        emit(j, o.out_path);
    }
    return max_res < o.tol ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const CommonOpts& o) {
    const RunConfig rc = load_config_file(o.config_path);
    const FamilyConfig& cfg = rc.family;
    std::mt19937_64 rng(o.seed);
    auto uni = [&](Real lo, Real hi) {
        return std::uniform_real_distribution<Real>(lo, hi)(rng);
    };
    auto random_pos = [&]() {
        return is_multiplicative(cfg.tag) ? *cfg.kappa * Complex(uni(1.05, 1.3), uni(0, 0.1))
                                          : Complex(uni(0.8, 1.5), uni(0, 0.2));
    };

    json checks = json::array();
    bool all_pass = true;
    std::string first_failure;
    auto run_check = [&](const std::string& name, Real tol, auto&& body) {
        Real worst = 0;
        bool pass = true;
        std::string detail;
        try {
            worst = body();
            pass = worst <= tol;
        } catch (const Error& e) {
            pass = false;
            detail = e.what();
            worst = -1;
        }
        if (!pass && all_pass) {
            all_pass = false;
            first_failure = name + (detail.empty() ? "" : ": " + detail);
        }
        json jcheck;
        jcheck["name"] = name;
        jcheck["pass"] = pass;
        jcheck["worst"] = worst;
        jcheck["tol"] = tol;
        if (!detail.empty()) jcheck["error"] = detail;
        checks.push_back(jcheck);
    };

    const DeformationSpec spec = deformation_spec(cfg.tag, cfg.step, cfg.kappa);
    const QuadricPencil pencil = family_pencil(cfg.tag, cfg.kappa);

    run_check("normalization", 1e-10, [&] {
        Real worst = 0;
        for (int k = 0; k < 50; ++k) {
            const UniformParam p = origin_param(cfg, random_pos());
            const ChartMatrix c = chart_matrix(cfg.tag, p, cfg.kappa);
            const Mat4 m_lambda = pencil.at(lambda_of(p, cfg.kappa));
            worst = std::max(worst,
                             (c.a.transpose() * m_lambda * c.a - c.scale * pencil.m0.m).norm() /
                                 (std::abs(c.scale) * pencil.m0.m.norm()));
        }
        return worst;
    });

    run_check("involutivity", 1e-9, [&] {
        Real worst = 0;
        for (int k = 0; k < 50; ++k) {
            const UniformParam p = origin_param(cfg, random_pos());
            const FiberContext ctx = fiber_context(cfg, p);
            const ProjPoint1 x(Complex(uni(-1, 1), uni(0.1, 0.6)));
            const ProjPoint1 y(Complex(uni(-1, 1), uni(0.1, 0.6)));
            worst = std::max(worst, chordal(i1_fiber(ctx, x, i1_fiber(ctx, x, y)), y));
            worst = std::max(worst, chordal(i2_fiber(ctx, i2_fiber(ctx, x, y), y), x));
        }
        return worst;
    });

    run_check("deformation_fixes_base_points", 1e-10, [&] {
        Real worst = 0;
        for (int k = 0; k < 20; ++k) {
            const UniformParam p = origin_param(cfg, random_pos());
            for (const auto& S : base_points_lifted(cfg))
                worst = std::max(worst, chordal(L_homogeneous(spec, pencil, p, S), S));
        }
        return worst;
    });

    run_check("factorization", 1e-9, [&] {
        Real worst = 0;
        for (int k = 0; k < 20; ++k) {
            const UniformParam p = origin_param(cfg, random_pos());
            const ProjPoint1 x(Complex(uni(-1, 1), uni(0.1, 0.5)));
            const ProjPoint1 y(Complex(uni(-1, 1), uni(0.1, 0.5)));
            const ChartStep full = L_chart(spec, p, x, y);
            const ChartStep r2 = factor_map(spec, FactorKind::R2, p, x, y);
            const ChartStep l1 = factor_map(spec, FactorKind::L1, r2.param, r2.x, r2.y);
            const ChartStep r1 = factor_map(spec, FactorKind::R1, p, x, y);
            const ChartStep l2 = factor_map(spec, FactorKind::L2, r1.param, r1.x, r1.y);
            worst = std::max(worst, std::max(chordal(l1.x, full.x), chordal(l1.y, full.y)));
            worst = std::max(worst, std::max(chordal(l2.x, full.x), chordal(l2.y, full.y)));
        }
        return worst;
    });

    run_check("conjugacy", 1e-9, [&] {
        Real worst = 0;
        for (int k = 0; k < 5; ++k) {
            const OrbitState s = make_initial_state(cfg, Complex(uni(-0.8, 0.8), uni(0.1, 0.4)),
                                                    Complex(uni(-0.8, 0.8), uni(0.1, 0.4)),
                                                    random_pos());
            worst = std::max(worst, conjugacy_check(cfg, s));
        }
        return worst;
    });

    run_check("net_audit", 0, [&] {
        const NetAudit audit = net_audit(cfg);
        return (audit.dim_s >= 3 && audit.dim_rs == 2) ? Real(0) : Real(1);
    });

    run_check("confinement", 0, [&] {
        const UniformParam p = origin_param(cfg, autonomous_pos(cfg));
        for (int i = 0; i < 8; ++i) {
            (void)confinement_probe_2d(fiber_context(cfg, shift(p, 2)), i, 1e-4);
            (void)confinement_probe_3d(cfg, i, 1e-4);
        }
        return Real(0);
    });

    json j;
    j["command"] = "verify";
    j["seed"] = o.seed;
    j["config"] = jconfig(rc);
    j["checks"] = checks;
    j["pass"] = all_pass;
    if (!all_pass) j["first_failure"] = first_failure;
    emit(j, o.out_path);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// classify / pencil-info
// ---------------------------------------------------------------------------

json classify_json(const FamilyConfig& cfg) {
    const QuadricPencil pencil = family_pencil(cfg.tag, cfg.kappa);
    const Poly delta = char_poly(pencil);
    const PencilType type = classify_pencil(pencil);
    json j;
    json coeffs = json::array();
    for (const auto& c : delta.c) coeffs.push_back(jc(c));
    j["delta_coefficients"] = coeffs;
    json roots = json::array();
    for (const auto& rd : type.root_data) {
        json r;
        r["lambda"] = jpoint1(rd.lambda);
        r["multiplicity"] = rd.multiplicity;
        r["corank"] = rd.corank;
        roots.push_back(r);
    }
    j["roots"] = roots;
    j["type"] = to_string(type.tag);
    j["segre_symbol"] = type.segre;
    j["expected_type"] = to_string(expected_class(cfg.tag));
    j["match"] = type.tag == expected_class(cfg.tag);
    return j;
}

int cmd_classify(const CommonOpts& o) {
    const RunConfig rc = load_config_file(o.config_path);
    json j = classify_json(rc.family);
    j["command"] = "classify";
    j["seed"] = o.seed;
    j["family"] = to_string(rc.family.tag);
    emit(j, o.out_path);
    return j["match"].get<bool>() ? 0 : 1;
}

int cmd_pencil_info(const CommonOpts& o) {
    const RunConfig rc = load_config_file(o.config_path);
    const FamilyConfig& cfg = rc.family;
    const FamilyPencils pens = build_pencils(cfg);
    json j = classify_json(cfg);
    j["command"] = "pencil-info";
    j["seed"] = o.seed;
    j["family"] = to_string(cfg.tag);
    json m0 = json::array(), mi = json::array();
    for (int r = 0; r < 4; ++r) {
        json r0 = json::array(), ri = json::array();
        for (int c = 0; c < 4; ++c) {
            r0.push_back(jc(pens.q.m0.m(r, c)));
            ri.push_back(jc(pens.q.mInf.m(r, c)));
        }
        m0.push_back(r0);
        mi.push_back(ri);
    }
    j["m0"] = m0;
    j["m_inf"] = mi;
    json base = json::array();
    for (const auto& S : base_points_lifted(cfg)) {
        json p = json::array();
        for (int i = 0; i < 4; ++i) p.push_back(jc(S[i]));
        base.push_back(p);
    }
    j["base_points"] = base;
    j["lambda_at_pos0"] = jc(lambda_of(origin_param(cfg, rc.pos0), cfg.kappa));
    emit(j, o.out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// confine
// ---------------------------------------------------------------------------

int cmd_confine(const CommonOpts& o, Real eps, int index) {
    const RunConfig rc = load_config_file(o.config_path);
    const FamilyConfig& cfg = rc.family;
    json checks = json::array();
    bool all_pass = true;
    const UniformParam fiber = shift(origin_param(cfg, rc.pos0), 2);

    auto add = [&](const char* kind, int i, auto&& body) {
        json jcheck;
        jcheck["kind"] = kind;
        jcheck["index"] = i + 1;
        try {
            const ProbeReport r = body();
            jcheck["pass"] = true;
            jcheck["d_point"] = r.d_point;
            jcheck["d_line"] = r.d_line;
            jcheck["ratio_point"] = r.ratio_point;
            jcheck["ratio_line"] = r.ratio_line;
        } catch (const Error& e) {
            jcheck["pass"] = false;
            jcheck["error"] = e.what();
            all_pass = false;
        }
        checks.push_back(jcheck);
    };

    for (int i = 0; i < 8; ++i) {
        if (index >= 0 && i != index) continue;
        add("2d", i, [&] { return confinement_probe_2d(fiber_context(cfg, fiber), i, eps); });
        add("3d", i, [&] { return confinement_probe_3d(cfg, i, eps); });
    }

    json j;
    j["command"] = "confine";
    j["seed"] = o.seed;
    j["eps"] = eps;
    j["config"] = jconfig(rc);
    j["checks"] = checks;
    j["pass"] = all_pass;
    emit(j, o.out_path);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Painleve dynamics on pencils of quadrics"};
    app.require_subcommand(1);

    CommonOpts orbit_opts, verify_opts, classify_opts, confine_opts, info_opts;
    int steps = 12;
    bool mismatch = false;
    std::string replay;
    Real eps = 1e-4;
    int index = -1;

    auto* orbit = app.add_subcommand("orbit", "iterate the 3D Painleve map, report residuals");
    add_common(orbit, orbit_opts, /*with_format=*/true);
    orbit->add_option("--steps", steps, "number of full steps");
    orbit->add_flag("--autonomous-mismatch", mismatch,
                    "negative control: autonomous orbit against the deformed system");
    orbit->add_option("--replay", replay, "re-ingest an orbit JSON file and verify only");

    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    add_common(verify, verify_opts);

    auto* classify = app.add_subcommand("classify", "characteristic polynomial and pencil type");
    add_common(classify, classify_opts);

    auto* confine = app.add_subcommand("confine", "singularity confinement probes");
    add_common(confine, confine_opts);
    confine->add_option("--eps", eps, "probe offset");
    confine->add_option("--index", index, "probe a single base point (0-based)");

    auto* info = app.add_subcommand("pencil-info", "pencil matrices, base points, type");
    add_common(info, info_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (orbit->parsed()) return cmd_orbit(orbit_opts, steps, mismatch, replay);
        if (verify->parsed()) return cmd_verify(verify_opts);
        if (classify->parsed()) return cmd_classify(classify_opts);
        if (confine->parsed()) return cmd_confine(confine_opts, eps, index);
        if (info->parsed()) return cmd_pencil_info(info_opts);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
