import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from conftest import points, polys
from lingcs.algebra import (
    I, Bundle, BundleMap, Chart, NotRealError, ParseError, Section, exterior_d, lie_bracket_vf,
    pair_QT, random_poly, random_section,
)

X = Chart(2)


def ev(p, pt):
    return p.evaluate(list(pt))


# -- parsing and printing -------------------------------------------------

def test_parse_two_monomials():
    p = X.parse("3/2*x1^2*x2 - x2")
    assert len(p.terms) == 2
    assert p.terms[(2, 1)] == mpq(3, 2) and p.terms[(0, 1)] == -1


def test_parse_imaginary_unit_and_parentheses():
    p = X.parse("(1 + i*x1)*(1 - i*x1)")
    assert p == X.parse("1 + x1^2")


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        X.parse("x1 + * x2")
    assert err.value.pos == 5


def test_unknown_coordinate_rejected():
    with pytest.raises(ParseError):
        X.parse("x3 + 1")


@given(polys(complex_=True))
def test_print_parse_round_trip(p):
    assert X.parse(p.to_string()) == p


# -- ring structure, checked against pointwise evaluation -----------------

@given(polys(), polys(), points())
def test_product_is_pointwise(p, q, pt):
    assert ev(p * q, pt) == ev(p, pt) * ev(q, pt)
    assert ev(p + q, pt) == ev(p, pt) + ev(q, pt)


@given(polys(max_degree=3), polys(max_degree=3), polys(max_degree=3))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == X.zero()


def test_evaluation_uses_exact_rationals():
    p = X.parse("1/3*x1 + 1/6")
    assert ev(p, (Fraction(1, 2), 0)) == mpq(1, 3)


# -- derivations ----------------------------------------------------------

def test_d_of_constant_and_product():
    assert exterior_d(X.const(5), X).is_zero()
    d = exterior_d(X.parse("x1*x2"), X)
    assert list(d.comps) == [X.parse("x2"), X.parse("x1")]


@given(polys(), polys(), st.integers(0, 1))
def test_partial_is_derivation(f, g, i):
    assert (f * g).diff(i) == f * g.diff(i) + g * f.diff(i)


def test_vector_field_bracket_jacobi():
    rng = random.Random(4)
    TM = Bundle.tangent(X)
    for _ in range(5):
        a, b, c = (random_section(rng, TM, 2) for _ in range(3))
        jac = lie_bracket_vf(a, lie_bracket_vf(b, c)) + lie_bracket_vf(b, lie_bracket_vf(c, a)) + lie_bracket_vf(c, lie_bracket_vf(a, b))
        assert jac.is_zero()


# -- pairing between TM⊕E* and E⊕T*M --------------------------------------

def side_core(k=2):
    side = Bundle(X, [("TM", 2), ("E*", k)])
    return side, side.dual()


def test_dual_reverses_summands():
    side, core = side_core()
    assert core.label == "E⊕T*M"


def test_pair_dual_basis():
    side, core = side_core()
    nu = side.basis(0)
    tau = core.section([0, 0, 1, 0])
    assert pair_QT(nu, tau) == X.one()
    eps = Section(side, [0, 0, X.parse("x1"), 3])
    e = Section(core, [2, X.parse("x2"), 0, 0])
    assert pair_QT(eps, e) == X.parse("2*x1 + 3*x2")


def test_pairing_gram_matrix_is_permutation():
    side, core = side_core()
    gram = [[pair_QT(a, b).constant_term() for b in core.frame()] for a in side.frame()]
    for row in gram:
        assert sorted(row) == [0] * (len(row) - 1) + [1]
    for col in zip(*gram):
        assert sorted(col) == [0] * (len(col) - 1) + [1]


def test_pairing_rank_mismatch():
    side, _ = side_core(2)
    _, core1 = side_core(1)
    with pytest.raises(ValueError):
        pair_QT(side.zero(), core1.zero())


@given(polys(), polys())
def test_pairing_bilinear_over_functions(f, g):
    rng = random.Random(0)
    side, core = side_core()
    a, b = random_section(rng, side, 1), random_section(rng, side, 1)
    t = random_section(rng, core, 1)
    assert pair_QT(a.scale(f) + b.scale(g), t) == f * pair_QT(a, t) + g * pair_QT(b, t)


# -- complex conjugation and real parts -----------------------------------

def test_conjugate():
    assert X.parse("1 + i*x1").conjugate() == X.parse("1 - i*x1")


@given(polys(complex_=True), polys(complex_=True))
def test_conjugation_multiplicative_and_involutive(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


def test_real_part_flags_imaginary_input():
    with pytest.raises(NotRealError):
        X.parse("x1 + i").real_part()
    TM = Bundle.tangent(X)
    with pytest.raises(NotRealError):
        Section(TM, [X.parse("i"), 0]).real_part()
    s = Section(TM, [X.parse("x1"), 0])
    assert s.complexify().real_part() == s


def test_bundle_map_transpose_is_dual():
    rng = random.Random(1)
    side, core = side_core()
    M = BundleMap(side, side, [[random_poly(rng, 2, 1) for _ in range(4)] for _ in range(4)])
    a = random_section(rng, side, 1)
    t = random_section(rng, core, 1)
    assert pair_QT(M(a), t) == pair_QT(a, M.T(t))
    assert M.T.T == M


def test_gaussian_coefficients():
    p = X.parse("x1") * I
    assert not p.is_real()
    assert (p * I) == -X.parse("x1")
