import random

import pytest
from hypothesis import given

from conftest import curved_cpx, polys
from lingcs.algebra import Chart
from lingcs.dorfman import LinConn, random_conn
from lingcs.holomorphic import (
    LinCpxStr, adapt_connection, complex_linearize, condition_route, d01_split, direct_route,
    holo_section_check, is_complex_linear, jE_integrability_check, nrj_witness,
)
from lingcs.scenarios import builtin

X = Chart(2)
J0 = [[0, -1], [1, 0]]
J4 = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]


def flat():
    return builtin("S_flat").cpx


def test_curved_variant_really_curved_cpx():
    L = curved_cpx()
    assert is_complex_linear(L.conn, L.j_E)
    assert any(not c.is_zero() for r in L.conn.curvature(0, 1) for c in r)


@pytest.mark.parametrize("make", [flat, curved_cpx], ids=["flat", "curved"])
def test_d01_equivalence(make):
    L = make()
    S, rep = d01_split(L)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]
    assert rep.by_id("d01.flat-direct").status == "pass"
    assert rep.by_id("d01.four-RD").status == "pass"


@pytest.mark.parametrize("make", [flat, curved_cpx], ids=["flat", "curved"])
def test_integrability_suite(make):
    rep = jE_integrability_check(make())
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


def four_dim(seed, linear=True):
    C4 = Chart(4)
    conn = random_conn(random.Random(seed), C4, 2, 1)
    L = LinCpxStr(J4, J0, conn)
    return LinCpxStr(J4, J0, complex_linearize(conn, L.j_E)) if linear else L


@pytest.mark.parametrize("seed", range(4))
def test_four_dimensional_routes_agree(seed):
    for L in (four_dim(seed), four_dim(seed, linear=False)):
        rep = jE_integrability_check(L)
        assert rep.by_id("holo.routes-agree").status == "pass"
        assert rep.by_id("holo.nij-decomposition").status == "pass"


@pytest.mark.parametrize("seed", range(3))
def test_four_dimensional_obstruction_detected(seed):
    L = four_dim(seed)
    S, rep = d01_split(L)
    assert rep.by_id("d01.routes-agree").status == "pass"
    assert rep.by_id("d01.four-RD").status == "pass"
    assert rep.by_id("d01.flat-direct").status == "fail"
    assert nrj_witness(L.conn, L.J_M, L.j_E) is not None
    assert not condition_route(L)[0] and not direct_route(L)[0]


def test_psi_constraint_enforced():
    z, o = X.zero(), X.one()
    with pytest.raises(ValueError):
        LinCpxStr(J0, J0, LinConn.flat(X, 2), [[[o, z], [z, z]], [[z, z], [z, z]]])


def test_adapted_connection_has_zero_psi():
    z, o = X.zero(), X.one()
    # ψ(∂1) = A, ψ(∂2) = −j A fulfils ψ(JX) = −jψ(X)
    A = [[o, z], [z, -o]]
    jA = [[z, o], [o, z]]
    L = LinCpxStr(J0, J0, LinConn.flat(X, 2), [A, [[-c for c in r] for r in jA]])
    assert all(c.is_zero() for p in L.with_conn(adapt_connection(L)).psi for r in p for c in r)
    assert condition_route(L)[0] == direct_route(L)[0]


def test_builtin_section_examples():
    sc = builtin("S_flat")
    L = sc.cpx
    secs = sc.holo_sections
    assert [want for _, want in secs] == [True, True, True, False, False]
    for comps, want in secs:
        assert holo_section_check(L, comps) is want


def test_antiholomorphic_pair_rejected():
    # x1 e1 + x2 e2 ↔ z is holomorphic, x1 e1 − x2 e2 ↔ z̄ is not
    L = flat()
    assert holo_section_check(L, ["x1", "x2"])
    assert not holo_section_check(L, ["x1", "-x2"])


@given(polys(2, 3), polys(2, 3))
def test_sections_match_cauchy_riemann(u, v):
    cr = u.diff(0) == v.diff(1) and u.diff(1) == -v.diff(0)
    assert holo_section_check(flat(), [u, v]) is cr
