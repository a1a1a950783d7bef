#pragma once

#include <array>
#include <string>
#include <vector>

#include "qpencil/deformation.hpp"
#include "qpencil/families.hpp"
#include "qpencil/qrt.hpp"

namespace qp {

// One orbit sample (x_n, y_n) with the cover position at half-integer index
// 2n - 1/2. n itself may be a half-integer (the symmetric root advances by
// 1/2), so it is stored doubled: n = n2 / 2.
struct OrbitState {
    long long n2 = 0;
    ProjPoint1 x, y;
    UniformParam p;
};

struct StageRecord {
    std::string stage;  // L2, i2, R2, L1, i1, R1
    ProjPoint1 x, y;
    UniformParam p;
};

struct OrbitTrace {
    std::vector<OrbitState> states;
    std::vector<std::array<StageRecord, 6>> intermediates;
    Real worst_conditioning = 1;  // worst per-stage denominator conditioning seen
};

// One full Painleve step: L2, i2, R2, L1, i1, R1 in order; the parameter
// advances four half-steps. Stage failures surface as StageError. cond, when
// given, accumulates the worst cancellation-conditioning factor and the step
// throws PrecisionExhausted as soon as it predicts relative error above 1e-6.
OrbitState step(const FamilyConfig& cfg, const OrbitState& s,
                std::array<StageRecord, 6>* stages = nullptr, Real* cond = nullptr);

OrbitState make_initial_state(const FamilyConfig& cfg, const Complex& x0, const Complex& y0,
                              const Complex& pos0);

// Iterates `step` with the precision budget armed.
OrbitTrace run_orbit(const FamilyConfig& cfg, const OrbitState& initial, int n_steps);

// The same orbit grid, but the states are generated by the autonomous QRT map
// on the frozen initial fiber: a negative control whose residuals against the
// non-autonomous system must be O(1) when the step is non-trivial.
OrbitTrace autonomous_mismatch_trace(const FamilyConfig& cfg, const OrbitState& initial,
                                     int n_steps);

// Relative residuals |LHS - RHS| / (|LHS| + |RHS|) of the family's published
// two-equation system, one pair per consecutive state pair; for the A0
// families every quadratic-root choice must pass and the worst one is kept.
std::vector<std::array<Real, 2>> verify_recurrence(const FamilyConfig& cfg,
                                                   const OrbitTrace& trace);

// Half step f~ = R1 . i1 . sigma . L2 (the deformed QRT root); requires a
// symmetric configuration. Applying it twice equals `step`.
OrbitState symmetric_root_step(const FamilyConfig& cfg, const OrbitState& s);

// Projective distance between L2(F~(s)) and (L . i1 . L . i2)(L2(s)); an
// algebraic identity, so the distance must vanish.
Real conjugacy_check(const FamilyConfig& cfg, const OrbitState& s);

// Deformed confinement probe around base point i: a seed with x = a_i + eps
// ahead of L1 collapses under i1~ to R1(S_i) and re-expands under i2~ toward
// R2(Psi_i); first-order contraction enforced like the 2D probe.
ProbeReport confinement_probe_3d(const FamilyConfig& cfg, int i, Real eps);

struct NetAudit {
    int dim_s;   // quadrics through the S_i (>= 3: a net)
    int dim_rs;  // quadrics through the R1(S_i) (= 2: only a pencil)
};

NetAudit net_audit(const FamilyConfig& cfg);

}  // namespace qp
