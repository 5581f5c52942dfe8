import random

import pytest
from hypothesis import given, strategies as st

from conftest import perturbed_gcs
from lingcs.algebra import BundleMap, Chart
from lingcs.dorfman import random_dorfman
from lingcs.gcs import adapted, gcs_from_symplectic, is_integrable, j_invariant_seed
from lingcs.gentan import SHAPES, GenTan, GTSection, gt_anchor, gt_bracket, gt_pair, random_generator
from lingcs.lie2 import (
    Lie2GCS, SplitLie2, adapting_change, lagrangian_adapt, lie2_gacs_check, lie2_gcs_check, rebase_lie2,
    rebase_split, split_lie2_check, strictness_instance,
)
from lingcs.scenarios import builtin

X = Chart(2)


def same_data(S1, S2):
    return S1.c == S2.c and S1.gamma == S2.gamma and S1.omega == S2.omega


def transport(S, s):
    return GTSection(S, s.nu, s.phi, s.tau)


@given(st.integers(0, 10 ** 6), st.sampled_from(SHAPES), st.sampled_from(SHAPES))
def test_from_dorfman_matches_tangent_double(seed, a, b):
    rng = random.Random(seed)
    D = random_dorfman(rng, X, 1, 1, skew=True)
    S, T = SplitLie2.from_dorfman(D), GenTan(D)
    s1, s2 = random_generator(rng, T, a), random_generator(rng, T, b)
    lhs = gt_bracket(transport(S, s1), transport(S, s2))
    rhs = gt_bracket(s1, s2)
    assert (lhs.nu, lhs.phi, lhs.tau) == (rhs.nu, rhs.phi, rhs.tau)
    assert gt_pair(transport(S, s1), transport(S, s2)) == gt_pair(s1, s2)
    assert gt_anchor(transport(S, s1)) == gt_anchor(s1)


def test_from_dorfman_needs_skew():
    with pytest.raises(ValueError):
        SplitLie2.from_dorfman(random_dorfman(random.Random(0), X, 1, 1, skew=False))


@pytest.mark.parametrize("seed", range(3))
def test_split_lie2_axioms(seed):
    S = SplitLie2.from_dorfman(random_dorfman(random.Random(seed), X, 1 + seed % 2, 1, skew=True))
    rep = split_lie2_check(S, seed=seed)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


def test_validation_errors():
    S = strictness_instance().S
    bad_c = [[list(v) for v in ci] for ci in S.c]
    bad_c[0][1] = [1, 0, 0, 0, 0, 0]
    with pytest.raises(ValueError, match="skew"):
        SplitLie2(S.chart, S.Q, S.B, S.rho, S.dB, bad_c, S.gamma, S.omega)
    bad_w = [[[list(w) for w in wij] for wij in wi] for wi in S.omega]
    bad_w[0][0][1] = [1]
    with pytest.raises(ValueError, match="alternating"):
        SplitLie2(S.chart, S.Q, S.B, S.rho, S.dB, S.c, S.gamma, bad_w)
    with pytest.raises(ValueError, match="shape"):
        SplitLie2(S.chart, S.Q, S.B, S.rho, S.dB, S.c[:5], S.gamma, S.omega)


# -- almost structure ------------------------------------------------------

def test_transported_flat_is_almost_complex():
    G = Lie2GCS.from_lingcs(builtin("S_flat").gcs)
    assert lie2_gacs_check(G).ok


def test_broken_square_fails():
    G = Lie2GCS.from_lingcs(builtin("S_flat").gcs)
    j = G.j.rows
    bad = [list(r) for r in j]
    bad[0][1] = bad[0][1] * 2
    rep = lie2_gacs_check(Lie2GCS(G.S, bad))
    assert rep.by_id("lie2.j-squared").status == "fail"


def test_symmetric_psi_fails():
    G = Lie2GCS.from_lingcs(builtin("S_flat").gcs)
    S = G.S
    one = X.one()
    Phi = [BundleMap.zero(S.B, S.C) for _ in range(S.r)]
    # Φ(q₁) b₁ = q¹ gives Ψ(q₁,q₁) ≠ 0
    rows = [[X.zero()] * S.B.rank for _ in range(S.C.rank)]
    rows[S.Q.dual_perm()[0]][0] = one
    Phi[0] = BundleMap(S.B, S.C, rows)
    rep = lie2_gacs_check(Lie2GCS(S, G.j, Phi))
    assert rep.by_id("lie2.psi-skew").status == "fail"
    assert rep.by_id("lie2.direct-orthogonal").status == "fail"


# -- adapting --------------------------------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_lagrangian_adapt(seed):
    G = Lie2GCS.from_lingcs(perturbed_gcs(seed))
    assert lie2_gacs_check(G).ok and not G.phi_is_zero()
    A = lagrangian_adapt(G)
    assert A.phi_is_zero()
    # oracle in the old splitting: 𝒥σ₂(q) = σ₂(jq) with σ₂ = σ₁ + Φ₁₂~
    Phi12 = adapting_change(G)
    lift2 = lambda q: GTSection(G.S, nu=q, phi=_phi_of(G, Phi12, q))
    for q in G.S.Q.frame():
        assert G(lift2(q)) == lift2(G.j(q))
    assert lagrangian_adapt(A) is A


def _phi_of(G, Phi12, q):
    out = BundleMap.zero(G.S.B, G.S.C)
    for i, a in enumerate(q.comps):
        if a.terms:
            out = out + Phi12[i].scale(a)
    return out


@pytest.mark.parametrize("seed", range(3))
def test_adapted_lie2_matches_adapted_dorfman(seed):
    L = perturbed_gcs(seed)
    A = lagrangian_adapt(Lie2GCS.from_lingcs(L))
    assert same_data(A.S, SplitLie2.from_dorfman(adapted(L).D))


def test_j_invariant_rebase_keeps_phi_zero():
    rng = random.Random(4)
    A = lagrangian_adapt(Lie2GCS.from_lingcs(perturbed_gcs(4)))
    inv = j_invariant_seed(rng, X, 2, A.j)
    Phi12 = [inv.phi(q) for q in A.S.Q.frame()]
    B = rebase_lie2(A, Phi12)
    assert B.phi_is_zero()
    assert lie2_gcs_check(B).by_id("lie2.routes-agree").status == "pass"


def test_rebase_split_rejects_nonskew():
    S = Lie2GCS.from_lingcs(builtin("S_flat").gcs).S
    rows = [[X.zero()] * S.B.rank for _ in range(S.C.rank)]
    rows[S.Q.dual_perm()[0]][0] = X.one()
    Phi12 = [BundleMap.zero(S.B, S.C) for _ in range(S.r)]
    Phi12[0] = BundleMap(S.B, S.C, rows)
    with pytest.raises(ValueError):
        rebase_split(S, Phi12)


# -- integrability ---------------------------------------------------------

def test_transported_flat_all_conditions():
    G = lagrangian_adapt(Lie2GCS.from_lingcs(builtin("S_flat").gcs))
    rep = lie2_gcs_check(G)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]
    for cid in ("lie2.cond-j-squared", "lie2.cond-nijenhuis", "lie2.cond-omega"):
        assert rep.by_id(cid).status == "pass"
    assert "surjective: True" in rep.by_id("lie2.omega-vs-jacobi").witness


def test_gcs_check_needs_adapted_splitting():
    with pytest.raises(ValueError):
        lie2_gcs_check(Lie2GCS.from_lingcs(perturbed_gcs(1)))


def test_routes_agree_with_tangent_double():
    D = random_dorfman(random.Random(1), X, 2, 1, skew=True)
    G = adapted(gcs_from_symplectic([[1, 0], [0, 1]], [[1, 0], [0, 1]], D=D))
    verdict = is_integrable(G).by_id("integrable.direct-route").status == "pass"
    rep = lie2_gcs_check(Lie2GCS.from_lingcs(G))
    assert rep.by_id("lie2.routes-agree").status == "pass"
    assert (rep.by_id("lie2.direct-route").status == "pass") == verdict


def test_strictness_witness():
    G = strictness_instance()
    assert lie2_gacs_check(G).ok
    rep = lie2_gcs_check(G)
    assert rep.by_id("lie2.cond-omega").status == "fail"
    assert rep.by_id("lie2.cond-nijenhuis").status == "pass"
    assert rep.by_id("lie2.A-jacobi").status == "pass"
    assert rep.by_id("lie2.routes-agree").status == "pass"
    note = rep.by_id("lie2.omega-vs-jacobi").witness
    assert "surjective: False" in note and "strictly stronger" in note


def test_strictness_scenario_matches_builtin_instance():
    G = builtin("S_c3").lie2
    H = strictness_instance()
    assert G.S.omega == H.S.omega and G.j == H.j
