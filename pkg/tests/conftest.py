import random
import sys
from pathlib import Path

from gmpy2 import mpq
from hypothesis import settings, strategies as st

from lingcs.algebra import BundleMap, Chart, Gauss, Poly
from lingcs.dorfman import HomForm, LinConn, random_dorfman, random_psi
from lingcs.gcs import LinGCS, rebase_gcs
from lingcs.holomorphic import LinCpxStr
from lingcs.scenarios import builtin

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("exact", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("exact")

coeffs = st.builds(mpq, st.integers(-5, 5), st.integers(1, 3))


@st.composite
def polys(draw, nvars=2, max_degree=2, complex_=False):
    exps = st.tuples(*[st.integers(0, max_degree) for _ in range(nvars)]).filter(lambda e: sum(e) <= max_degree)
    items = draw(st.lists(st.tuples(exps, coeffs, coeffs if complex_ else st.just(0)), max_size=4))
    return Poly.from_terms(nvars, [(e, Gauss(a, b) if b else a) for e, a, b in items])


def points(nvars=2):
    return st.tuples(*[coeffs for _ in range(nvars)])


def skew_population(count=20, degree=2):
    """Seeded random skew-twisted Dorfman connections, m = 2, k alternating 1 and 2."""
    out = []
    for seed in range(count):
        rng = random.Random(1000 + seed)
        out.append(random_dorfman(rng, Chart(2), 1 + seed % 2, degree=degree, skew=True))
    return out


def admissible_psi(rng, G, degree=1):
    """Skew Ψ with Ψ = −j*Ψ: anti-symmetrise a random skew form over {1, j}."""
    base = HomForm.from_psi(G.chart, G.k, random_psi(rng, G.chart, G.k, degree, skew=True))
    fr = base.side.frame()
    j = G.j
    return HomForm.from_psi(G.chart, G.k, [[list((base.psi(p, q) - base.psi(j(p), j(q))).comps) for q in fr] for p in fr])


def perturbed_gcs(seed):
    """S_flat rebased to a random skew Δ, plus an admissible Φ: the S_pert family."""
    rng = random.Random(seed)
    G = builtin("S_flat").gcs
    D = random_dorfman(rng, G.chart, G.k, 1, skew=True)
    H = rebase_gcs(G, D)
    return LinGCS(D, H.j, H.Phi + admissible_psi(rng, H))


def rotated_gcs(seed):
    """S_flat with a nonconstant complex structure on E*; not integrable.

    Every almost complex structure on a surface is integrable, so the TM part is kept.
    """
    rng = random.Random(seed)
    G = builtin("S_flat").gcs
    X = G.chart
    a = X.const(rng.randint(1, 3)) * X.parse("x1") + X.one()
    z, o = X.zero(), X.one()
    rows = [[z] * 4 for _ in range(4)]
    rows[0][1], rows[1][0] = -o, o
    # [[−a, −1−a²], [1, a]] squares to −1 for any a
    rows[2][2], rows[2][3], rows[3][2], rows[3][3] = -a, -(o + a * a), o, a
    return LinGCS(G.D, BundleMap(G.D.side, G.D.side, rows))


def curved_cpx():
    """∇_{∂1} = x1, ∇_{∂2} = x1·j: ℂ-linear with D^{0,1} = ∂̄, but R(∂1,∂2) = j ≠ 0."""
    X = Chart(2)
    x1, z = X.parse("x1"), X.zero()
    J0 = [[0, -1], [1, 0]]
    return LinCpxStr(J0, J0, LinConn(X, 2, [[[x1, z], [z, x1]], [[z, -x1], [x1, z]]]))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
