import random

import pytest
from hypothesis import given, strategies as st

from conftest import admissible_psi, perturbed_gcs, rotated_gcs
from lingcs.algebra import I, Bundle, BundleMap, Chart, Section, vf_apply
from lingcs.dorfman import LinConn, apply_change, random_dorfman, same_operator
from lingcs.gcs import (
    QuasiRealError, adapt_dorfman, adapted, adapting_change, bracket_A, complex_type_blocks_check,
    condition_route, direct_route, eigen_check, eigenframes, gacs_check, gcs_from_complex, gcs_from_symplectic,
    is_integrable, j_equivalent, j_invariant_seed, kahler_adapt, kahler_check, kahler_lemma_witness,
    leibniz_A_check, quasi_real_roundtrip, rebase_gcs, same_action, symplectic_bracket_check,
)
from lingcs.scenarios import builtin

X = Chart(2)
J0 = [[0, -1], [1, 0]]


def flat_gcs():
    return builtin("S_flat").gcs


def symp_gcs():
    return builtin("S_symp").gcs


# -- almost structure ------------------------------------------------------

@pytest.mark.parametrize("G", [flat_gcs(), symp_gcs()], ids=["flat", "symp"])
def test_builtin_structures_are_almost_complex(G):
    rep = gacs_check(G)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


def test_symplectic_constructor_matches_builtin():
    G = gcs_from_symplectic([[1, 0], [0, 1]], [[1, 0], [0, 1]], chart=X)
    assert G.j == symp_gcs().j
    with pytest.raises(ValueError):
        gcs_from_symplectic([[1, 0], [0, 0]], [[1, 0], [0, 1]], chart=X)


def test_complex_constructor_rejects_non_complex():
    with pytest.raises(ValueError):
        gcs_from_complex([[1, 0], [0, 1]], J0, LinConn.flat(X, 2))


def test_s_pert_designed_failures():
    rep = gacs_check(builtin("S_pert").gcs)
    failed = {c.check_id for c in rep.failures}
    assert "gacs.psi-skew" in failed
    assert "gacs.j-squared" not in failed


def test_broken_square_fails():
    rep = gacs_check(builtin("S_pert.j2").gcs)
    assert rep.by_id("gacs.j-squared").status == "fail"
    assert rep.by_id("gacs.direct-square").status == "fail"


@given(st.integers(0, 10 ** 6))
def test_perturbations_stay_almost_complex(seed):
    assert gacs_check(perturbed_gcs(seed)).ok


def test_complex_type_psi_gives_admissible_phi():
    rng = random.Random(3)
    psi = [[[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)] for _ in range(2)]
    G = gcs_from_complex(J0, J0, LinConn.flat(X, 2), [[[X.const(c) for c in r] for r in p] for p in psi])
    rep = gacs_check(G)
    assert rep.by_id("gacs.psi-skew").status == "pass"


# -- adapted splittings ----------------------------------------------------

@pytest.mark.parametrize("seed", range(10))
def test_adapting_kills_phi(seed):
    G = perturbed_gcs(seed)
    assert not G.Phi.is_zero()
    A = adapted(G)
    assert A.Phi.is_zero()
    assert same_action(G, A) is None
    # idempotent
    assert adapt_dorfman(A) is A.D
    assert same_operator(adapted(A).D, A.D)


def test_adapting_change_by_hand():
    # Ψ₂ = Ψ − Ψ₁₂(·, j·) − Ψ₁₂(j·, ·) recomputed from the change form
    G = perturbed_gcs(77)
    ch = adapting_change(G)
    fr = G.D.side.frame()
    for p in fr:
        for q in fr:
            v = G.psi(p, q) - ch.psi(p, G.j(q)) - ch.psi(G.j(p), q)
            assert v.is_zero()


def test_adapt_needs_almost_complex():
    with pytest.raises(ValueError):
        adapt_dorfman(builtin("S_pert").gcs)


@pytest.mark.parametrize("seed", range(10))
def test_j_equivalence_iff_same_psi(seed):
    rng = random.Random(seed)
    G = perturbed_gcs(seed)
    A = adapted(G)
    inv = j_invariant_seed(rng, X, 2, G.j)
    D2 = apply_change(A.D, inv)
    assert j_equivalent(A.D, D2, G.j)
    assert rebase_gcs(G, D2).Phi.is_zero()
    # a change with a j-anti-invariant part moves Φ away from zero
    bad = apply_change(A.D, admissible_psi(rng, G))
    assert not j_equivalent(A.D, bad, G.j)
    assert not rebase_gcs(G, bad).Phi.is_zero()
    # Ψ-equality in both directions
    H1, H2 = rebase_gcs(G, A.D), rebase_gcs(G, D2)
    assert H1.Phi.psi_array() == H2.Phi.psi_array()


# -- integrability ---------------------------------------------------------

@pytest.mark.parametrize("G", [flat_gcs(), symp_gcs()], ids=["flat", "symp"])
def test_builtins_integrable_both_routes(G):
    rep = is_integrable(G)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failures]


@pytest.mark.parametrize("seed", range(5))
def test_routes_agree_on_mutations(seed):
    G = rotated_gcs(seed)
    assert gacs_check(G).ok
    c_ok, c_w, c_bad = condition_route(G)
    d_ok, d_w, d_fails = direct_route(G)
    assert c_ok is False and d_ok is False
    assert c_w and d_w
    rep = is_integrable(G)
    assert rep.by_id("integrable.routes-agree").status == "pass"
    assert rep.by_id("integrable.witness-consistency").status == "pass"


def test_nonintegrable_connection_detected():
    rep = is_integrable(builtin("S_pert.nonint").gcs)
    assert rep.by_id("integrable.condition-route").status == "fail"
    assert rep.by_id("integrable.routes-agree").status == "pass"


def test_random_symplectic_twist_not_integrable():
    rng = random.Random(1)
    D = random_dorfman(rng, X, 2, 1, skew=True)
    G = gcs_from_symplectic([[1, 0], [0, 1]], [[1, 0], [0, 1]], D=D)
    rep = is_integrable(G)
    assert rep.by_id("integrable.routes-agree").status == "pass"


# -- 𝔸 ---------------------------------------------------------------------

@pytest.mark.parametrize("G", [flat_gcs(), symp_gcs()], ids=["flat", "symp"])
def test_A_is_complex_lie_algebroid(G):
    rep = leibniz_A_check(G, seed=2, degree=2)
    assert rep.ok and not rep.skipped


def test_A_flat_formula():
    # 𝔸((X₁,ε₁),(X₂,ε₂)) = ½([X₁,X₂] − [J X₁, J X₂], ...) for constant J and flat ∇
    G = flat_gcs()
    A = bracket_A(G)
    x1, x2 = X.parse("x1"), X.parse("x2")
    z = X.zero()
    n1 = Section(G.D.side, [x2, z, z, z])
    n2 = Section(G.D.side, [x1, z, z, z])
    got = A(n1, n2)
    br = lambda U, V: [vf_apply(U, V[i]) - vf_apply(V, U[i]) for i in range(2)]
    J = lambda V: [-V[1], V[0]]
    want = [a - b for a, b in zip(br(n1.comps[:2], n2.comps[:2]), br(J(n1.comps[:2]), J(n2.comps[:2])))]
    assert [2 * c for c in got.comps[:2]] == want


def test_symplectic_A_is_half_complex_bracket():
    G = symp_gcs()
    assert symplectic_bracket_check(G, builtin("S_symp").tau_inv) is None


def test_nonintegrable_A_skips_conditional_checks():
    rep = leibniz_A_check(builtin("S_pert.nonint").gcs)
    assert rep.by_id("A.skew").status == "pass"
    assert rep.by_id("A.jacobi").status == "skipped"
    forced = leibniz_A_check(builtin("S_pert.nonint").gcs, integrable=True)
    assert not forced.ok


@pytest.mark.parametrize("G", [flat_gcs(), symp_gcs()], ids=["flat", "symp"])
def test_quasi_real_round_trip(G):
    A = bracket_A(G)
    H = quasi_real_roundtrip(G.j, A.D, A.anchor)
    assert same_action(G, H) is None


def test_quasi_real_rejects_wrong_anchor():
    G = flat_gcs()
    A = bracket_A(G)
    with pytest.raises(QuasiRealError):
        quasi_real_roundtrip(G.j, A.D, lambda nu: [2 * c for c in A.anchor(nu)])


def test_quasi_real_rejects_nonskew():
    G = flat_gcs()
    D = random_dorfman(random.Random(0), X, 2, 1, skew=False)
    with pytest.raises(QuasiRealError):
        quasi_real_roundtrip(G.j, D)


# -- eigenbundles ----------------------------------------------------------

@pytest.mark.parametrize("G", [flat_gcs(), symp_gcs()], ids=["flat", "symp"])
def test_eigen_suite(G):
    rep = eigen_check(G, seed=4)
    assert rep.ok and not rep.skipped


def test_flat_U_plus_blocks():
    sc = builtin("S_flat")
    G = sc.gcs
    JM = BundleMap(Bundle.tangent(X), Bundle.tangent(X), J0)
    jE = BundleMap(Bundle.simple(X, "E", 2), Bundle.simple(X, "E", 2), J0)
    assert complex_type_blocks_check(G, JM, jE) is None


def test_eigenprojections_are_complementary():
    G = symp_gcs()
    ef = eigenframes(G)
    for b in G.D.side.frame():
        assert ef.proj_U(b, 1) + ef.proj_U(b, -1) == b
        assert G.j(ef.proj_U(b, -1)) == ef.proj_U(b, -1).scale(-I)


# -- Kähler ----------------------------------------------------------------

def kahler_fixture(seed=0):
    sc = builtin("S_flat")
    D0 = random_dorfman(random.Random(seed), X, 2, 1, skew=True)
    return rebase_gcs(sc.gcs, D0), rebase_gcs(sc.kahler_partner, D0)


def test_kahler_lemma_before_adapting():
    G1, G2 = kahler_fixture()
    assert not G1.Phi.is_zero() and not G2.Phi.is_zero()
    assert kahler_lemma_witness(G1, G2) is None


@pytest.mark.parametrize("seed", range(3))
def test_kahler_adapt_kills_both(seed):
    G1, G2 = kahler_fixture(seed)
    D = kahler_adapt(G1, G2)
    assert rebase_gcs(G1, D).Phi.is_zero()
    assert rebase_gcs(G2, D).Phi.is_zero()
    rep = kahler_check(G1, G2)
    assert not rep.failures


def test_kahler_noncommuting_pair_fails():
    sc = builtin("S_pert.kahler")
    rep = kahler_check(sc.gcs, sc.kahler_partner)
    assert rep.by_id("kahler.commute").status == "fail"
