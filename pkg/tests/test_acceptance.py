"""The thirteen acceptance criteria, one test each, one summary line each."""

import random
import time

from conftest import ACCEPTANCE, admissible_psi, curved_cpx, perturbed_gcs, rotated_gcs, skew_population
from lingcs.algebra import Chart
from lingcs.algebroid import basic_data, deg_bracket_via_dorfman_check, glanon_chain, tta_algebroid_check, two_rep_check
from lingcs.cli import SUITES, run_suite
from lingcs.dorfman import apply_change, dorfman_identity_check, random_dorfman
from lingcs.gcs import (
    adapt_dorfman, adapted, bracket_A, complex_type_blocks_check, eigen_check, gacs_check, gcs_from_symplectic,
    is_integrable, j_equivalent, j_invariant_seed, kahler_adapt, kahler_lemma_witness, leibniz_A_check,
    quasi_real_roundtrip, rebase_gcs, same_action, symplectic_bracket_check,
)
from lingcs.gentan import GenTan, courant_axiom_suite
from lingcs.holomorphic import d01_split, holo_section_check
from lingcs.lie2 import Lie2GCS, lagrangian_adapt, lie2_gcs_check, strictness_instance
from lingcs.scenarios import builtin

X = Chart(2)


def record(n, desc, problems, extra=""):
    ok = not problems
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}"
    if extra:
        line += f"  [{extra}]"
    if problems:
        line += "  -- " + "; ".join(problems[:3])
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def population():
    sc = [builtin("S_flat").dorfman, builtin("S_poly").dorfman]
    return sc + skew_population(20, 2)


def test_criterion_01_courant_axioms():
    t0 = time.perf_counter()
    bad = []
    for i, D in enumerate(population()):
        rep = courant_axiom_suite(GenTan(D), seed=i, degree=1)
        bad += [f"#{i} {c.check_id}" for c in rep.failures]
    dt = time.perf_counter() - t0
    if dt >= 60:
        bad.append(f"took {dt:.1f}s")
    record(1, "Courant axioms on S_flat, S_poly and 20 random skew Dorfman connections", bad, f"{dt:.1f}s")


def test_criterion_02_dorfman_identities():
    need = ("dorfman.jacobiator-curvature", "dorfman.change-round-trip", "dorfman.change-bracket", "dorfman.skew-corollary")
    bad = []
    for i, D in enumerate(population()):
        rep = dorfman_identity_check(D, seed=i, degree=2)
        bad += [f"#{i} {c}" for c in need if rep.by_id(c).status != "pass"]
    record(2, "Jac = R^t, change-of-splitting round trip and skewness corollary on the same population", bad)


def test_criterion_03_adapted_connection():
    bad = []
    for seed in range(10):
        G = perturbed_gcs(seed)
        if not gacs_check(G).ok or G.Phi.is_zero():
            bad.append(f"seed {seed}: fixture not a perturbation")
            continue
        A = adapted(G)
        if not A.Phi.is_zero():
            bad.append(f"seed {seed}: Φ₂ ≠ 0")
        if adapt_dorfman(A) is not A.D:
            bad.append(f"seed {seed}: not idempotent")
        rng = random.Random(100 + seed)
        # ⇐ and ⇒ of j-equivalence versus equal Ψ
        good = apply_change(A.D, j_invariant_seed(rng, X, 2, G.j))
        other = apply_change(A.D, admissible_psi(rng, G))
        same = lambda D1, D2: rebase_gcs(G, D1).Phi.psi_array() == rebase_gcs(G, D2).Phi.psi_array()
        if not (j_equivalent(A.D, good, G.j) and same(A.D, good)):
            bad.append(f"seed {seed}: j-equivalent splitting changed Ψ")
        if j_equivalent(A.D, other, G.j) or same(A.D, other):
            bad.append(f"seed {seed}: non-equivalent splitting kept Ψ")
    record(3, "adapted Dorfman connection kills Φ, is idempotent, j-equivalence ⇔ equal Ψ (10 seeds)", bad)


def test_criterion_04_integrability_routes():
    D = random_dorfman(random.Random(1), X, 2, 1, skew=True)
    cases = {"S_flat": builtin("S_flat").gcs, "S_symp": builtin("S_symp").gcs}
    cases.update({f"rotated-{s}": rotated_gcs(s) for s in range(5)})
    cases["S_pert.nonint"] = builtin("S_pert.nonint").gcs
    cases["symp-twisted"] = gcs_from_symplectic([[1, 0], [0, 1]], [[1, 0], [0, 1]], D=D)
    bad, verdicts = [], []
    for name, G in cases.items():
        rep = is_integrable(G)
        for cid in ("integrable.routes-agree", "integrable.witness-consistency"):
            if rep.by_id(cid).status != "pass":
                bad.append(f"{name}: {cid}")
        ok = rep.by_id("integrable.direct-route").status == "pass"
        verdicts.append(ok)
        if name.startswith("S_") and name != "S_pert.nonint" and not ok:
            bad.append(f"{name} not integrable")
        if name.startswith("rotated") and ok:
            bad.append(f"{name} should not be integrable")
    record(4, "condition route and generator route agree on S_flat, S_symp and 7 mutations", bad,
           f"{sum(verdicts)} integrable, {len(verdicts) - sum(verdicts)} not")


def test_criterion_05_A_bracket():
    bad = []
    for name in ("S_flat", "S_symp"):
        sc = builtin(name)
        G = sc.gcs
        rep = leibniz_A_check(G, seed=5, degree=2)
        bad += [f"{name} {c.check_id}" for c in rep.records if c.status != "pass"]
        A = bracket_A(G)
        if same_action(G, quasi_real_roundtrip(G.j, A.D, A.anchor)) is not None:
            bad.append(f"{name}: quasi-real round trip changed 𝒥")
        if name == "S_symp":
            w = symplectic_bracket_check(G, sc.tau_inv)
            if w:
                bad.append(f"S_symp: {w}")
    record(5, "𝔸 skew, j-bilinear, Jacobi, Leibniz; symplectic 𝔸 = ½[·,·]_ℂ; quasi-real round trip", bad)


def test_criterion_06_eigenframes():
    bad = []
    for name in ("S_flat", "S_symp"):
        rep = eigen_check(builtin(name).gcs, seed=6)
        bad += [f"{name} {c.check_id}" for c in rep.records if c.status != "pass"]
    sc = builtin("S_flat")
    L = sc.cpx
    w = complex_type_blocks_check(sc.gcs, L.J_M, L.j_E)
    if w:
        bad.append(w)
    record(6, "⟨U±,K±⟩ = 0, intertwiner identity; S_flat U₊ = T^{1,0}M ⊕ (E^{0,1})*", bad)


def test_criterion_07_holomorphic():
    bad = []
    for name, L in (("S_flat", builtin("S_flat").cpx), ("curved", curved_cpx())):
        S, rep = d01_split(L)
        for cid in ("d01.routes-agree", "d01.four-RD", "d01.flat-direct", "d01.flat-from-N"):
            if rep.by_id(cid).status != "pass":
                bad.append(f"{name} {cid}")
    sc = builtin("S_flat")
    for comps, want in sc.holo_sections:
        if holo_section_check(sc.cpx, comps) is not want:
            bad.append(f"section {[str(c) for c in comps]} expected {want}")
    record(7, "N_R,j_E = 0 ⇔ D^{0,1} flat, N^ℂ = 4R_D; section examples accepted/rejected", bad,
           f"{len(sc.holo_sections)} sections")


def test_criterion_08_two_representation():
    bad = []
    for name in ("S_tm", "S_nab"):
        sc = builtin(name)
        for rep in (tta_algebroid_check(sc.algebroid, sc.dorfman, seed=8),
                    two_rep_check(basic_data(sc.algebroid, sc.dorfman), seed=8)):
            bad += [f"{name} {c.check_id}" for c in rep.failures]
    record(8, "TA⊕T*A Lie algebroid axioms, basic duality and both curvature relations on S_tm, S_nab", bad)


def test_criterion_09_glanon_chain():
    t0 = time.perf_counter()
    sc = builtin("S_tm")
    rep = glanon_chain(sc.algebroid, sc.gcs, seed=9)
    dt = time.perf_counter() - t0
    bad = [c.check_id for c in rep.failures]
    ids = {c.check_id for c in rep.records}
    for s in "+-":
        for need in ("K{}.closure", "C{}.jacobi", "C{}.leibniz", "J{}.nijenhuis", "F{}.inverse",
                     "F{}.mixed-bracket", "matched{}.algebroid"):
            if need.format(s) not in ids:
                bad.append(f"missing {need.format(s)}")
    if "jc.nijenhuis" not in ids:
        bad.append("missing jc.nijenhuis")
    if dt >= 300:
        bad.append(f"took {dt:.0f}s")
    record(9, "Glanon chain on S_tm: j_C, K±, C±, J±, F, Drinfeld identity, matched pair", bad,
           f"{len(rep.records)} checks, {dt:.1f}s")


def test_criterion_10_degenerate_bracket():
    bad = []
    for name in ("S_tm", "S_nab"):
        A = builtin(name).algebroid
        for seed in range(10):
            D = random_dorfman(random.Random(seed), X, 2, 1, skew=True)
            if not deg_bracket_via_dorfman_check(A, D, seed=seed).ok:
                bad.append(f"{name} seed {seed}")
    record(10, "degenerate bracket through Δ on S_tm and S_nab, 10 skew Δ each", bad)


def test_criterion_11_kahler():
    sc = builtin("S_flat")
    D0 = random_dorfman(random.Random(11), X, 2, 1, skew=True)
    G1, G2 = rebase_gcs(sc.gcs, D0), rebase_gcs(sc.kahler_partner, D0)
    bad = []
    if G1.Phi.is_zero() or G2.Phi.is_zero():
        bad.append("fixture already adapted")
    w = kahler_lemma_witness(G1, G2)
    if w:
        bad.append(w)
    D = kahler_adapt(G1, G2)
    if not rebase_gcs(G1, D).Phi.is_zero():
        bad.append("Φ₁ ≠ 0")
    if not rebase_gcs(G2, D).Phi.is_zero():
        bad.append("Φ₂ ≠ 0")
    record(11, "Kähler pair: Ψ lemma beforehand, one Δ adapted to both", bad)


def test_criterion_12_lie2():
    bad = []
    for seed in range(3):
        if not lagrangian_adapt(Lie2GCS.from_lingcs(perturbed_gcs(seed))).phi_is_zero():
            bad.append(f"seed {seed}: Φ₂ ≠ 0")
    flat = lie2_gcs_check(lagrangian_adapt(Lie2GCS.from_lingcs(builtin("S_flat").gcs)))
    for cid in ("lie2.cond-j-squared", "lie2.cond-nijenhuis", "lie2.cond-omega"):
        if flat.by_id(cid).status != "pass":
            bad.append(f"S_flat {cid}")
    rep = lie2_gcs_check(strictness_instance())
    if not (rep.by_id("lie2.cond-omega").status == "fail" and rep.by_id("lie2.A-jacobi").status == "pass"):
        bad.append("no strictness witness")
    note = rep.by_id("lie2.omega-vs-jacobi").witness
    record(12, "Lagrangian adaptation, transported S_flat conditions, ∂_B = 0 strictness witness", bad, note)


DEFECT_FOR = {
    "courant-axioms": "S_poly.nocurv", "dorfman-identities": "S_poly.nonskew", "gacs": "S_pert.j2",
    "integrability": "S_pert.nonint", "abracket": "S_pert.nonint", "quasi-real": "S_pert.nonint",
    "eigen": "S_pert.nonint", "kahler": "S_pert.kahler", "holomorphic": "S_pert.nonint",
    "algebroid-2rep": "S_nab.anchor", "glanon": "S_tm.antiholo", "deg-courant": "S_nab.anchor",
    "cpm": "S_tm.antiholo", "drinfeld": "S_tm.antiholo", "lie2": "S_pert.nonint",
}


def test_criterion_13_mutation_sensitivity():
    bad = []
    for suite in SUITES:
        name = DEFECT_FOR.get(suite)
        if name is None:
            bad.append(f"{suite}: no defect")
            continue
        rep = run_suite(builtin(name), suite)
        if not rep.failures or not all(c.witness for c in rep.failures):
            bad.append(f"{suite} on {name}: no failing check with witness")
    record(13, "every suite fails on a registered defect scenario with a printed witness", bad, f"{len(SUITES)} suites")
