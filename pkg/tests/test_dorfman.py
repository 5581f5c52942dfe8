import random

import pytest
from hypothesis import given, strategies as st

from conftest import skew_population
from lingcs.algebra import Chart, Section, pair, random_poly, random_section, vf_apply
from lingcs.dorfman import (
    ConstraintError, GenConn, LinConn, apply_change, change_of_splitting, curvature_map,
    curvature_R, dorfman_from_psi, dorfman_identity_check, dorfman_to_gen_conn, dull_bracket, gen_conn_to_dorfman,
    is_skew, jacobiator, random_conn, random_dorfman, random_psi, same_operator, std_dorfman,
)

X = Chart(2)


def std_oracle(conn, nu, tau):
    """Δ^std_{(X,ε)}(e,θ) = (∇_X e, ℒ_Xθ + ⟨∇*ε, e⟩) written out from the Christoffel data."""
    m, k = conn.chart.dim, conn.rank
    Xv, eps = nu.comps[:m], nu.comps[m:]
    e, th = tau.comps[:k], tau.comps[k:]

    def nab(i, sec):  # ∇_{∂i} of an E-section
        return [sec[a].diff(i) + sum((conn.gamma[i][a][b] * sec[b] for b in range(k)), conn.chart.zero()) for a in range(k)]

    out_e = [sum((Xv[i] * nab(i, e)[a] for i in range(m)), conn.chart.zero()) for a in range(k)]
    lie = [vf_apply(Xv, th[i]) + sum((th[j] * Xv[j].diff(i) for j in range(m)), conn.chart.zero()) for i in range(m)]
    # ⟨∇*_{∂i} ε, e⟩ = ∂i⟨ε,e⟩ − ⟨ε, ∇_{∂i} e⟩
    ee = sum((a * b for a, b in zip(eps, e)), conn.chart.zero())
    dual = [ee.diff(i) - sum((a * b for a, b in zip(eps, nab(i, e))), conn.chart.zero()) for i in range(m)]
    return out_e + [a + b for a, b in zip(lie, dual)]


@pytest.mark.parametrize("seed", range(5))
def test_std_matches_written_out_formula(seed):
    rng = random.Random(seed)
    conn = random_conn(rng, X, 2, 2)
    D = std_dorfman(conn)
    nu, tau = random_section(rng, D.side, 2), random_section(rng, D.core, 2)
    assert list(D(nu, tau).comps) == std_oracle(conn, nu, tau)


def test_twist_is_subtracted_on_E_part_only():
    rng = random.Random(7)
    D = random_dorfman(rng, X, 2, 1, skew=False)
    S = std_dorfman(D.conn)
    nu, tau = random_section(rng, D.side, 1), random_section(rng, D.core, 1)
    # Φtw(ν)(pr_E τ) expanded by hand from the twist table
    z = X.zero()
    corr = [z] * 4
    for n, vn in enumerate(nu.comps):
        for a in range(2):
            for o in range(4):
                corr[o] = corr[o] + vn * tau.comps[a] * D.twist[n][a][o]
    assert list(D(nu, tau).comps) == [s - c for s, c in zip(S(nu, tau).comps, corr)]


def test_flat_example_vanishes():
    D = std_dorfman(LinConn.flat(X, 2))
    nu = D.side.basis(0)
    tau = Section(D.core, [X.parse("x2"), 0, 0, 0])
    assert D(nu, tau).is_zero()
    assert dull_bracket(D, D.side.basis(0), D.side.basis(1)).is_zero()


def test_flat_curvature_and_jacobiator_vanish():
    D = std_dorfman(LinConn.flat(X, 2))
    fr = D.side.frame()
    assert curvature_map(D, fr[0], fr[2]).is_zero()
    assert jacobiator(D, fr[0], fr[1], fr[2]).is_zero()


def test_dull_bracket_duality():
    rng = random.Random(3)
    D = random_dorfman(rng, X, 2, 2, skew=False)
    n1, n2 = random_section(rng, D.side, 2), random_section(rng, D.side, 2)
    t = random_section(rng, D.core, 2)
    lhs = pair(dull_bracket(D, n1, n2), t)
    rhs = vf_apply(n1.comps[:2], pair(n2, t)) - pair(n2, D(n1, t))
    assert lhs == rhs


@pytest.mark.parametrize("D", skew_population(20, 2), ids=lambda D: f"k{D.k}")
def test_identity_suite_on_skew_population(D):
    rep = dorfman_identity_check(D, seed=1, degree=2)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


def test_jacobiator_identity_needs_skewness():
    rng = random.Random(11)
    D = random_dorfman(rng, X, 2, 1, skew=False)
    assert not is_skew(D)
    rep = dorfman_identity_check(D)
    assert rep.by_id("dorfman.jacobiator-curvature").status == "fail"
    assert "not skew" in rep.by_id("dorfman.jacobiator-curvature").witness


def test_curvature_on_forms_vanishes_for_nonskew_too():
    rng = random.Random(12)
    D = random_dorfman(rng, X, 2, 2, skew=False)
    fr = D.side.frame()
    for i in range(2):
        assert curvature_R(D, fr[0], fr[3], D.core.basis(2 + i)).is_zero()


def test_curvature_has_cotangent_component():
    # R(ν₁,ν₂)(e,0) is generally not E-valued; it is kept in full
    rng = random.Random(1)
    D = random_dorfman(rng, X, 2, 1, skew=True)
    fr = D.side.frame()
    found = False
    for p in range(4):
        for q in range(p + 1, 4):
            v = curvature_R(D, fr[p], fr[q], D.core.basis(0))
            found = found or any(not c.is_zero() for c in v.comps[2:])
    assert found


def test_change_between_connections():
    # std(∇) vs std(∇+A): Ψ₁₂((X,ε),(Y,η)) = A_Y^tε − A_X^tη with Φ₁₂ = Δ₁ − Δ₂
    rng = random.Random(5)
    conn = random_conn(rng, X, 2, 1)
    A = [[[random_poly(rng, 2, 1) for _ in range(2)] for _ in range(2)] for _ in range(2)]
    conn2 = LinConn(X, 2, [[[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(g, h)] for g, h in zip(conn.gamma, A)])
    D1, D2 = std_dorfman(conn), std_dorfman(conn2)
    ch = change_of_splitting(D1, D2)
    n1, n2 = random_section(rng, D1.side, 1), random_section(rng, D1.side, 1)

    def At(v, eta):  # A_v^t η
        return [sum((v[i] * A[i][a][b] * eta[a] for i in range(2) for a in range(2)), X.zero()) for b in range(2)]

    want = [p - q for p, q in zip(At(n2.comps[:2], n1.comps[2:]), At(n1.comps[:2], n2.comps[2:]))]
    assert list(ch.psi(n1, n2).comps) == want


@given(st.integers(0, 10 ** 6))
def test_change_round_trip(seed):
    rng = random.Random(seed)
    D1 = random_dorfman(rng, X, 1, 1, skew=bool(seed % 2))
    D2 = random_dorfman(rng, X, 1, 1, skew=True)
    ch = change_of_splitting(D1, D2)
    assert same_operator(apply_change(D1, ch), D2)
    assert same_operator(apply_change(apply_change(D1, ch), change_of_splitting(D2, D1)), D1)
    assert change_of_splitting(D1, D1).is_zero()


@given(st.integers(0, 10 ** 6))
def test_skewness_of_change(seed):
    rng = random.Random(seed)
    D1 = random_dorfman(rng, X, 1, 1, skew=True)
    skew2 = bool(seed % 2)
    D2 = dorfman_from_psi(random_conn(rng, X, 1, 1), random_psi(rng, X, 1, 1, skew2))
    ch = change_of_splitting(D1, D2)
    assert (ch.skew_witness() is None) == is_skew(D2)


# -- generalised connections on TM⊕T*M -------------------------------------

def test_torsion_free_pullback_gives_standard():
    rng = random.Random(2)
    m = 2
    z = X.zero()
    gam = []
    for i in range(m):
        gam.append([[z] * m for _ in range(m)])
    for i in range(m):
        for j in range(i, m):
            for a in range(m):
                v = random_poly(rng, 2, 1)
                gam[i][a][j] = v
                gam[j][a][i] = v  # Γ^a_{ij} symmetric: torsion-free
    big = []
    for i in range(m):
        M = [[z] * (2 * m) for _ in range(2 * m)]
        for a in range(m):
            for b in range(m):
                M[a][b] = gam[i][a][b]
                M[m + a][m + b] = -gam[i][b][a]
        big.append(M)
    D = gen_conn_to_dorfman(GenConn.pullback(X, big))
    assert same_operator(D, std_dorfman(LinConn(X, 2, gam)))


def test_flat_pullback_gives_flat_standard():
    z = X.zero()
    G = GenConn.pullback(X, [[[z] * 4 for _ in range(4)] for _ in range(2)])
    assert same_operator(gen_conn_to_dorfman(G), std_dorfman(LinConn.flat(X, 2)))


@pytest.mark.parametrize("seed", range(4))
def test_generalised_connection_round_trip(seed):
    rng = random.Random(seed)
    D = random_dorfman(rng, X, 2, 1, skew=bool(seed % 2))
    G = dorfman_to_gen_conn(D)
    assert G.constraint_witness() is None
    assert same_operator(gen_conn_to_dorfman(G), D)


def test_constraint_violation_rejected():
    z = X.zero()
    C = [[[z] * 4 for _ in range(4)] for _ in range(4)]
    C[2][1][0] = X.one()
    with pytest.raises(ConstraintError) as err:
        gen_conn_to_dorfman(GenConn(X, C))
    assert (err.value.theta_index, err.value.e_index) == (0, 0)
