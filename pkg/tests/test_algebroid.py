import random

import pytest
from hypothesis import given, strategies as st

from lingcs.algebra import Chart, Section, random_section, vf_apply
from lingcs.algebroid import (
    DegCourant, LieAlgebroid, basic_data, deg_axiom_check, deg_bracket_via_dorfman_check, glanon_chain,
    glanon_check, jc_deg_gcs_check, kpm_restriction, la_axiom_check, tta_algebroid_check, two_rep_check,
)
from lingcs.dorfman import LinConn, random_dorfman, std_dorfman
from lingcs.gcs import rebase_gcs
from lingcs.scenarios import builtin

X = Chart(2)


def tm():
    sc = builtin("S_tm")
    return sc.algebroid, sc.gcs


def nab():
    sc = builtin("S_nab")
    return sc.algebroid, sc.dorfman


def test_structure_functions_must_be_skew():
    with pytest.raises(ValueError):
        LieAlgebroid(X, 2, [[1, 0], [0, 0]], [[[0, 0], [0, 1]], [[0, 0], [0, 0]]])


def test_nab_bracket_by_hand():
    A, _ = nab()
    e1, e2 = A.A.frame()
    assert A.bracket(e1, e2) == e2
    f = X.parse("x1^2 + x2")
    # [e1, f e2] = ρ(e1)(f) e2 + f e2
    assert A.bracket(e1, e2.scale(f)) == e2.scale(f.diff(0) + f)


@pytest.mark.parametrize("name", ["S_tm", "S_nab"])
def test_lie_algebroid_axioms(name):
    assert la_axiom_check(builtin(name).algebroid, seed=1, degree=2).ok


def test_bad_anchor_breaks_axioms():
    rep = la_axiom_check(builtin("S_nab.anchor").algebroid)
    assert rep.failures and all(c.witness for c in rep.failures)


def test_basic_connection_flat_tangent():
    # A = TM, Δ = std(flat): ∇bas_a(Y, 0) has TM part a(Y) = ∇_a Y
    A = LieAlgebroid.tangent(X)
    T = basic_data(A, std_dorfman(LinConn.flat(X, 2)))
    rng = random.Random(0)
    a = random_section(rng, A.A, 2)
    Y = random_section(rng, T.side, 2)
    Y = Section(T.side, list(Y.comps[:2]) + [X.zero()] * 2)
    got = T.bas_side(a, Y).comps[:2]
    assert list(got) == [vf_apply(a.comps, y) for y in Y.comps[:2]]


def test_basic_data_needs_skew():
    A, _ = nab()
    with pytest.raises(ValueError):
        basic_data(A, random_dorfman(random.Random(0), X, 2, 1, skew=False))


@pytest.mark.parametrize("seed", range(4))
def test_two_representation_random_skew(seed):
    A, _ = nab()
    D = random_dorfman(random.Random(seed), X, 2, 1, skew=True)
    rep = two_rep_check(basic_data(A, D), seed=seed)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


@pytest.mark.parametrize("name", ["S_tm", "S_nab"])
def test_two_representation_builtin(name):
    sc = builtin(name)
    D = sc.dorfman
    assert two_rep_check(basic_data(sc.algebroid, D)).ok


@pytest.mark.parametrize("name", ["S_tm", "S_nab"])
def test_tta_algebroid(name):
    sc = builtin(name)
    rep = tta_algebroid_check(sc.algebroid, sc.dorfman, seed=2)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


def test_tta_needs_curvature_sign():
    A, D = nab()
    rep = tta_algebroid_check(A, D, seed=2, curvature_sign=-1)
    assert not rep.ok


@given(st.integers(0, 10 ** 6), st.sampled_from(["S_tm", "S_nab"]))
def test_degenerate_bracket_via_dorfman(seed, name):
    A = builtin(name).algebroid
    D = random_dorfman(random.Random(seed), X, 2, 1, skew=True)
    assert deg_bracket_via_dorfman_check(A, D, seed=seed).ok


@pytest.mark.parametrize("name", ["S_tm", "S_nab"])
def test_degenerate_courant_axioms(name):
    assert deg_axiom_check(builtin(name).algebroid, seed=3).ok


def test_degenerate_pairing_is_symmetric():
    C = DegCourant(builtin("S_nab").algebroid)
    rng = random.Random(5)
    t1, t2 = random_section(rng, C.core, 1), random_section(rng, C.core, 1)
    assert C.pair(t1, t2) == C.pair(t2, t1)


def test_glanon_tangent():
    A, G = tm()
    assert glanon_check(A, G).ok


def test_glanon_independent_of_reference_splitting():
    A, G = tm()
    D0 = random_dorfman(random.Random(9), X, 2, 1, skew=True)
    H = rebase_gcs(G, D0)
    assert not H.Phi.is_zero()
    assert glanon_check(A, H).ok
    assert jc_deg_gcs_check(A, H).ok


def test_antiholomorphic_anchor_not_glanon():
    sc = builtin("S_tm.antiholo")
    rep = glanon_check(sc.algebroid, sc.gcs)
    assert rep.by_id("glanon.anchor").status == "fail"


def test_k_pm_closure():
    A, G = tm()
    rep = kpm_restriction(A, G)
    assert rep.ok and {c.check_id[:2] for c in rep.records} == {"K+", "K-"}


def test_glanon_chain():
    A, G = tm()
    rep = glanon_chain(A, G)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]
    ids = {c.check_id for c in rep.records}
    for s in "+-":
        for need in ("C{}.jacobi", "C{}.manin", "F{}.inverse", "F{}.mixed-bracket", "J{}.nijenhuis", "matched{}.algebroid"):
            assert need.format(s) in ids


def test_glanon_chain_stops_on_failure():
    sc = builtin("S_tm.antiholo")
    rep = glanon_chain(sc.algebroid, sc.gcs)
    assert not rep.ok
    assert not any(c.check_id.startswith("C+") for c in rep.records)
