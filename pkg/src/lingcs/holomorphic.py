"""Linear complex structures J_E on the tangent bundle of a vector bundle.

J_E is recorded by (J_M, j_E, ∇, ψ) with J_E(∇̂_X) = ∇̂_{J_M X} + ψ(X)~.
Conventions on the total space with fibre coordinates p:

    ∇̂_X = X − (Γ_X p)·∂_p,      φ~ = (φ p)·∂_p,      e↑ = e·∂_p.

A complex chart is ℝ^m with J_M given explicitly; complex scalars act on E
through j_E, so D_{X+iY} = ∇_X + j_E∇_Y stays real.
"""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import I, Bundle, BundleMap, Chart, Poly, Section, random_poly, vf_apply
from .dorfman import LinConn
from .report import Report

Matrix = List[List[Poly]]
HALF = mpq(1, 2)


# --------------------------------------------------------------------------
# small matrix helpers
# --------------------------------------------------------------------------

def _mm(A: Sequence[Sequence[Poly]], B: Sequence[Sequence[Poly]]) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for a in range(n):
        row = []
        for b in range(m):
            acc = A[a][0] * 0
            for c in range(k):
                if A[a][c].terms and B[c][b].terms:
                    acc = acc + A[a][c] * B[c][b]
            row.append(acc)
        out.append(row)
    return out


def _madd(A, B) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _msub(A, B) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def _mscale(A, f) -> Matrix:
    return [[x * f for x in r] for r in A]


def _mv(A, v) -> List[Poly]:
    out = []
    for r in A:
        acc = v[0] * 0
        for x, y in zip(r, v):
            if x.terms and y.terms:
                acc = acc + x * y
        out.append(acc)
    return out


def _mzero(M) -> bool:
    return all(not x.terms for r in M for x in r)


def _unit(chart: Chart, m: int, i: int) -> List[Poly]:
    return [chart.one() if j == i else chart.zero() for j in range(m)]


def _rows(M) -> Matrix:
    return [list(r) for r in (M.rows if isinstance(M, BundleMap) else M)]


def _vbracket(X: Sequence[Poly], Y: Sequence[Poly]) -> List[Poly]:
    return [vf_apply(X, Y[i]) - vf_apply(Y, X[i]) for i in range(len(X))]


def nijenhuis_tensor(J: Sequence[Sequence[Poly]], X: Sequence[Poly], Y: Sequence[Poly]) -> List[Poly]:
    """N_J(X,Y) = [X,Y] − [JX,JY] + J[JX,Y] + J[X,JY]."""
    JX, JY = _mv(J, X), _mv(J, Y)
    b = _vbracket
    t = [p + q for p, q in zip(b(JX, Y), b(X, JY))]
    Jt = _mv(J, t)
    return [p - q + r for p, q, r in zip(b(X, Y), b(JX, JY), Jt)]


# --------------------------------------------------------------------------
# the structure
# --------------------------------------------------------------------------

class LinCpxStr:
    """Linear almost complex structure on TE over J_M with core morphism j_E."""

    def __init__(self, J_M, j_E, conn: LinConn, psi: Optional[Sequence[Sequence[Sequence]]] = None):
        self.chart = conn.chart
        self.m, self.k = self.chart.dim, conn.rank
        self.conn = conn
        self.TM = Bundle.tangent(self.chart)
        self.E = Bundle.simple(self.chart, "E", self.k)
        self.J_M = J_M if isinstance(J_M, BundleMap) else BundleMap(self.TM, self.TM, J_M)
        self.j_E = j_E if isinstance(j_E, BundleMap) else BundleMap(self.E, self.E, j_E)
        if not (self.J_M @ self.J_M == -BundleMap.identity(self.TM)):
            raise ValueError("J_M does not square to −1")
        if not (self.j_E @ self.j_E == -BundleMap.identity(self.E)):
            raise ValueError("j_E does not square to −1")
        z = self.chart.zero()
        if psi is None:
            psi = [[[z] * self.k for _ in range(self.k)] for _ in range(self.m)]
        if len(psi) != self.m or any(len(p) != self.k or any(len(r) != self.k for r in p) for p in psi):
            raise ValueError(f"ψ must be {self.m} matrices of size {self.k}x{self.k}")
        self.psi = [[[v if isinstance(v, Poly) else (self.chart.parse(v) if isinstance(v, str) else self.chart.const(v)) for v in r] for r in p] for p in psi]
        w = psi_j_witness(self)
        if w is not None:
            raise ValueError(f"ψ(J_M X) ≠ −j_E ψ(X): {w}")

    @property
    def JM(self) -> Matrix:
        return _rows(self.J_M)

    @property
    def jE(self) -> Matrix:
        return _rows(self.j_E)

    def psi_along(self, X: Sequence[Poly]) -> Matrix:
        k = self.k
        out = [[self.chart.zero()] * k for _ in range(k)]
        for i, xi in enumerate(X):
            if xi.terms:
                out = _madd(out, _mscale(self.psi[i], xi))
        return out

    def with_conn(self, conn: LinConn) -> "LinCpxStr":
        """Same J_E described through another linear connection."""
        eta = [_msub([list(r) for r in conn.gamma[i]], [list(r) for r in self.conn.gamma[i]]) for i in range(self.m)]
        return LinCpxStr(self.J_M, self.j_E, conn, psi_after_shift(self, eta))

    def __repr__(self):
        return f"LinCpxStr(m={self.m}, k={self.k})"


def psi_j_witness(L: LinCpxStr) -> Optional[str]:
    JM, jE = L.JM, L.jE
    for i in range(L.m):
        lhs = L.psi_along([JM[l][i] for l in range(L.m)])
        rhs = _mscale(_mm(jE, L.psi[i]), -1)
        if _msub(lhs, rhs) != [[L.chart.zero()] * L.k for _ in range(L.k)]:
            return f"at ∂_{i + 1}: {_msub(lhs, rhs)}"
    return None


def psi_after_shift(L: LinCpxStr, eta: Sequence[Matrix]) -> List[Matrix]:
    """ψ for the connection with Γ_i + η_i: ψ(X) + η(J_M X) − j_E η(X)."""
    JM, jE = L.JM, L.jE
    out = []
    for i in range(L.m):
        col = [JM[l][i] for l in range(L.m)]
        etaJ = [[L.chart.zero()] * L.k for _ in range(L.k)]
        for l, c in enumerate(col):
            if c.terms:
                etaJ = _madd(etaJ, _mscale(eta[l], c))
        out.append(_msub(_madd(L.psi[i], etaJ), _mm(jE, eta[i])))
    return out


def adapt_connection(L: LinCpxStr) -> LinConn:
    """Γ′ = Γ − ½ j_E ψ, the connection of the corrected splitting Σ′."""
    jE = L.jE
    eta = [_mscale(_mm(jE, L.psi[i]), -HALF) for i in range(L.m)]
    return L.conn.shifted(eta)


def complex_linearize(conn: LinConn, j_E) -> LinConn:
    """∇″_X e = ½∇_X e − ½ j_E∇_X(j_E e)."""
    j = _rows(j_E)
    gam = []
    for i in range(conn.chart.dim):
        G = [list(r) for r in conn.gamma[i]]
        dj = [[x.diff(i) for x in r] for r in j]
        new = _mscale(_msub(_msub(G, _mm(j, _mm(G, j))), _mm(j, dj)), HALF)
        gam.append(new)
    return LinConn(conn.chart, conn.rank, gam)


def nabla_j(conn: LinConn, j_E, i: int) -> Matrix:
    """(∇_{∂_i} j_E) = ∂_i j_E + [Γ_i, j_E]."""
    j = _rows(j_E)
    G = [list(r) for r in conn.gamma[i]]
    return _madd([[x.diff(i) for x in r] for r in j], _msub(_mm(G, j), _mm(j, G)))


def is_complex_linear(conn: LinConn, j_E) -> bool:
    return all(_mzero(nabla_j(conn, j_E, i)) for i in range(conn.chart.dim))


def adapted_complex_linear(L: LinCpxStr) -> LinCpxStr:
    """Adapt, then ℂ-linearize; ψ of the result vanishes only when J_E is integrable."""
    conn1 = adapt_connection(L)
    conn2 = complex_linearize(conn1, L.j_E)
    return L.with_conn(conn2)


# --------------------------------------------------------------------------
# curvature and the obstruction form
# --------------------------------------------------------------------------

def curvature(conn: LinConn, X: Sequence[Poly], Y: Sequence[Poly]) -> Matrix:
    k = conn.rank
    out = [[conn.chart.zero()] * k for _ in range(k)]
    for i, j in itertools.product(range(conn.chart.dim), repeat=2):
        if i != j and X[i].terms and Y[j].terms:
            out = _madd(out, _mscale([list(r) for r in conn.curvature(i, j)], X[i] * Y[j]))
    return out


def nrj_form(conn: LinConn, J_M, j_E, X: Sequence[Poly], Y: Sequence[Poly]) -> Matrix:
    """N(X,Y) = R(X,Y) − R(JX,JY) + j_E R(JX,Y) + j_E R(X,JY)."""
    J, j = _rows(J_M), _rows(j_E)
    JX, JY = _mv(J, X), _mv(J, Y)
    R = lambda a, b: curvature(conn, a, b)
    return _madd(_msub(R(X, Y), R(JX, JY)), _mm(j, _madd(R(JX, Y), R(X, JY))))


def nrj_complex(conn: LinConn, J_M, j_E, Z: Tuple, W: Tuple) -> Matrix:
    """ℂ-bilinear extension of N, with i acting on values by j_E."""
    X1, Y1 = Z
    X2, Y2 = W
    N = lambda a, b: nrj_form(conn, J_M, j_E, a, b)
    re = _msub(N(X1, X2), N(Y1, Y2))
    im = _madd(N(X1, Y2), N(Y1, X2))
    return _madd(re, _mm(_rows(j_E), im))


# --------------------------------------------------------------------------
# total space
# --------------------------------------------------------------------------

class TotalSpace:
    """Coordinates (x, p) on E; fields and J_E as polynomial data."""

    def __init__(self, L: LinCpxStr, conn: Optional[LinConn] = None):
        self.L = L
        self.conn = conn or L.conn
        self.m, self.k = L.m, L.k
        self.chart = Chart(self.m + self.k)
        self.J = self._build_J()

    def up(self, f: Poly) -> Poly:
        pad = (0,) * self.k
        return Poly(self.m + self.k, {e + pad: c for e, c in f.terms.items()})

    def p(self, a: int) -> Poly:
        return self.chart.coord(self.m + a)

    def linear(self, M: Sequence[Sequence[Poly]]) -> List[Poly]:
        """(M p)·∂_p for a k×k matrix on the base."""
        out = []
        for a in range(self.k):
            acc = self.chart.zero()
            for b in range(self.k):
                if M[a][b].terms:
                    acc = acc + self.up(M[a][b]) * self.p(b)
            out.append(acc)
        return out

    def hat(self, X: Sequence[Poly], conn: Optional[LinConn] = None) -> List[Poly]:
        conn = conn or self.conn
        g = conn.gamma_along(X)
        return [self.up(x) for x in X] + [-v for v in self.linear(g)]

    def tilde(self, M) -> List[Poly]:
        return [self.chart.zero()] * self.m + self.linear(M)

    def core(self, e: Sequence[Poly]) -> List[Poly]:
        return [self.chart.zero()] * self.m + [self.up(x) for x in e]

    def _build_J(self) -> Matrix:
        L, m, k = self.L, self.m, self.k
        JM, jE = L.JM, L.jE
        cols = []
        for i in range(m):
            JX = [JM[l][i] for l in range(m)]
            # ∂x_i = ∇̂_i + (Γ_i p)∂_p
            Gi = [list(r) for r in self.conn.gamma[i]]
            v = self.hat(JX)
            v = [a + b for a, b in zip(v, self.tilde(L.psi[i]))]
            v = [a + b for a, b in zip(v, self.tilde(_mm(jE, Gi)))]
            cols.append(v)
        for a in range(k):
            col = [jE[b][a] for b in range(k)]
            cols.append(self.core(col))
        n = m + k
        return [[cols[c][r] for c in range(n)] for r in range(n)]

    def apply(self, V: Sequence[Poly]) -> List[Poly]:
        return _mv(self.J, V)

    def nijenhuis(self, V, W) -> List[Poly]:
        return nijenhuis_tensor(self.J, V, W)

    def psi_of(self, conn: LinConn) -> List[Matrix]:
        """Read ψ back from J_E(∇̂_X) − ∇̂_{J_M X} for another connection."""
        out = []
        JM = self.L.JM
        for i in range(self.m):
            X = _unit(self.L.chart, self.m, i)
            JX = [JM[l][i] for l in range(self.m)]
            d = [a - b for a, b in zip(self.apply(self.hat(X, conn)), self.hat(JX, conn))]
            if any(x.terms for x in d[: self.m]):
                raise ArithmeticError("J_E(∇̂_X) − ∇̂_{JX} is not vertical")
            out.append(self._read_linear(d[self.m:]))
        return out

    def _read_linear(self, v: Sequence[Poly]) -> Matrix:
        """Inverse of ``linear``; rejects fields that are not fibrewise linear."""
        k, m = self.k, self.m
        M = [[Poly(m, {}) for _ in range(k)] for _ in range(k)]
        for a in range(k):
            for exp, c in v[a].terms.items():
                fib = exp[m:]
                if sum(fib) != 1:
                    raise ArithmeticError("vertical field is not linear in the fibre")
                b = fib.index(1)
                M[a][b] = M[a][b] + Poly(m, {exp[:m]: c})
        return M


def direct_route(L: LinCpxStr) -> Tuple[bool, Optional[str]]:
    """N_{J_E} on all coordinate fields of the total space."""
    T = TotalSpace(L)
    n = L.m + L.k
    for a, b in itertools.combinations(range(n), 2):
        N = T.nijenhuis(_unit(T.chart, n, a), _unit(T.chart, n, b))
        if any(x.terms for x in N):
            return False, f"N_J_E(∂_{a + 1}, ∂_{b + 1}) = {[str(x) for x in N]}"
    return True, None


def jm_nijenhuis_witness(L: LinCpxStr) -> Optional[str]:
    for i, j in itertools.combinations(range(L.m), 2):
        N = nijenhuis_tensor(L.JM, _unit(L.chart, L.m, i), _unit(L.chart, L.m, j))
        if any(x.terms for x in N):
            return f"N_J_M(∂_{i + 1}, ∂_{j + 1}) = {[str(x) for x in N]}"
    return None


def nrj_witness(conn: LinConn, J_M, j_E) -> Optional[str]:
    m = conn.chart.dim
    for i, j in itertools.combinations(range(m), 2):
        N = nrj_form(conn, J_M, j_E, _unit(conn.chart, m, i), _unit(conn.chart, m, j))
        if not _mzero(N):
            return f"N_R,j_E(∂_{i + 1}, ∂_{j + 1}) = {N}"
    return None


def condition_route(L: LinCpxStr) -> Tuple[bool, Optional[str]]:
    w = jm_nijenhuis_witness(L)
    if w:
        return False, w
    L2 = adapted_complex_linear(L)
    if any(not _mzero(p) for p in L2.psi):
        return False, f"ℂ-linearized adapted connection is not adapted: ψ = {L2.psi}"
    w = nrj_witness(L2.conn, L.J_M, L.j_E)
    return (w is None), w


def jE_integrable(L: LinCpxStr) -> bool:
    return condition_route(L)[0]


def nij_decomposition_witness(L: LinCpxStr) -> Optional[str]:
    """The two displayed Nijenhuis decompositions for an adapted connection."""
    conn = adapt_connection(L)
    T = TotalSpace(L, conn)
    m, k = L.m, L.k
    JM, jE = L.JM, L.jE
    fr = [_unit(L.chart, m, i) for i in range(m)]
    for X, Y in itertools.combinations(fr, 2):
        lhs = T.nijenhuis(T.hat(X), T.hat(Y))
        NJ = nijenhuis_tensor(JM, X, Y)
        Nr = nrj_form(conn, L.J_M, L.j_E, X, Y)
        rhs = [a - b for a, b in zip(T.hat(NJ), T.tilde(Nr))]
        if lhs != rhs:
            return f"N_J_E(∇̂_X,∇̂_Y) ≠ ∇̂_N_J_M − N_R,j_E~: {[a - b for a, b in zip(lhs, rhs)]}"
    for X in fr:
        JX = _mv(JM, X)
        for a in range(k):
            e = _unit(L.chart, k, a)
            je = _mv(jE, e)
            lhs = T.nijenhuis(T.hat(X), T.core(e))
            v = [p - q + r + s for p, q, r, s in zip(
                conn.cov(X, e), conn.cov(JX, je), _mv(jE, conn.cov(JX, e)), _mv(jE, conn.cov(X, je)))]
            if lhs != T.core(v):
                return f"N_J_E(∇̂_X, e↑) differs from its core formula at e_{a + 1}"
    return None


def jE_integrability_check(L: LinCpxStr) -> Report:
    rep = Report("jE-integrability")
    conn1 = adapt_connection(L)
    rep.run("holo.adapted", "adapted connection has ψ′ = 0",
            lambda: None if all(_mzero(p) for p in L.with_conn(conn1).psi) else "ψ′ ≠ 0")
    L2 = adapted_complex_linear(L)
    rep.run("holo.complex-linear", "ℂ-linearization commutes with j_E",
            lambda: None if is_complex_linear(L2.conn, L.j_E) else "∇″ j_E ≠ 0")
    rep.run("holo.nij-decomposition", "Nijenhuis torsion on linear and core fields", lambda: nij_decomposition_witness(L))
    rep.run("holo.JM-integrable", "N_J_M vanishes", lambda: jm_nijenhuis_witness(L))
    rep.run("holo.still-adapted", "ℂ-linearized connection stays adapted",
            lambda: None if all(_mzero(p) for p in L2.psi) else f"ψ″ = {L2.psi}")
    rep.run("holo.nrj-zero", "N_R,j_E vanishes", lambda: nrj_witness(L2.conn, L.J_M, L.j_E))
    ok_c, w_c = condition_route(L)
    ok_d, w_d = direct_route(L)
    rep.add("holo.direct-route", "N_J_E vanishes on the total space", ok_d, w_d)
    rep.add("holo.routes-agree", "condition route and direct route agree", ok_c == ok_d,
            f"conditions say {ok_c}, direct says {ok_d}")
    return rep


# --------------------------------------------------------------------------
# D = D^{1,0} + D^{0,1}
# --------------------------------------------------------------------------

class Dsplit:
    """Complexified connection D_{X+iY} e = ∇_X e + j_E∇_Y e."""

    def __init__(self, L: LinCpxStr, conn: LinConn):
        self.L = L
        self.conn = conn
        self.J = L.JM
        self.j = L.jE

    def D(self, Z: Tuple, e: Sequence[Poly]) -> List[Poly]:
        X, Y = Z
        return [a + b for a, b in zip(self.conn.cov(X, e), _mv(self.j, self.conn.cov(Y, e)))]

    def z01(self, X: Sequence[Poly]) -> Tuple:
        return (list(X), _mv(self.J, X))

    def z10(self, X: Sequence[Poly]) -> Tuple:
        return (list(X), [-x for x in _mv(self.J, X)])

    def d01(self, X, e):
        return self.D(self.z01(X), e)

    def d10(self, X, e):
        return self.D(self.z10(X), e)

    @staticmethod
    def cbracket(Z: Tuple, W: Tuple) -> Tuple:
        X1, Y1 = Z
        X2, Y2 = W
        b = _vbracket
        re = [p - q for p, q in zip(b(X1, X2), b(Y1, Y2))]
        im = [p + q for p, q in zip(b(X1, Y2), b(Y1, X2))]
        return re, im

    def curvature(self, Z: Tuple, W: Tuple) -> Matrix:
        k = self.L.k
        cols = []
        for a in range(k):
            e = _unit(self.L.chart, k, a)
            v = [p - q - r for p, q, r in zip(self.D(Z, self.D(W, e)), self.D(W, self.D(Z, e)), self.D(self.cbracket(Z, W), e))]
            cols.append(v)
        return [[cols[b][a] for b in range(k)] for a in range(k)]


def _precondition(L: LinCpxStr, conn: LinConn):
    w = jm_nijenhuis_witness(L)
    if w:
        raise ValueError(f"J_M is not integrable: {w}")
    if not is_complex_linear(conn, L.j_E):
        raise ValueError("connection is not ℂ-linear")
    if any(not _mzero(p) for p in L.with_conn(conn).psi):
        raise ValueError("connection is not adapted")


def d01_split(L: LinCpxStr, conn: Optional[LinConn] = None, seed: int = 0) -> Tuple[Dsplit, Report]:
    conn = conn or adapted_complex_linear(L).conn
    _precondition(L, conn)
    S = Dsplit(L, conn)
    rep = Report("d01")
    m = L.m
    fr = [_unit(L.chart, m, i) for i in range(m)]

    ok_n = nrj_witness(conn, L.J_M, L.j_E) is None
    bad = None
    for X, Y in itertools.combinations(fr, 2):
        R = S.curvature(S.z01(X), S.z01(Y))
        if not _mzero(R):
            bad = f"R_D(∂_X + iJ∂_X, ∂_Y + iJ∂_Y) = {R}"
            break
    rep.add("d01.flat-from-N", "N_R,j_E = 0", ok_n, None if ok_n else nrj_witness(conn, L.J_M, L.j_E))
    rep.add("d01.flat-direct", "D^{0,1} is flat", bad is None, bad)
    rep.add("d01.routes-agree", "flatness of D^{0,1} ⇔ N_R,j_E = 0", ok_n == (bad is None),
            f"N route {ok_n}, curvature route {bad is None}")

    def four():
        for X, Y in itertools.combinations(fr, 2):
            Z, W = S.z01(X), S.z01(Y)
            lhs = nrj_complex(conn, L.J_M, L.j_E, Z, W)
            rhs = _mscale(S.curvature(Z, W), 4)
            if lhs != rhs:
                return f"N^ℂ(Z,W) − 4R_D(Z,W) = {_msub(lhs, rhs)}"
        return None

    rng = random.Random(seed)

    def polar():
        for _ in range(2):
            X = [random_poly(rng, m, 1) for _ in range(m)]
            Y = [random_poly(rng, m, 1) for _ in range(m)]
            lhs = nrj_complex(conn, L.J_M, L.j_E, S.z10(X), S.z10(Y))
            rhs = _mscale(nrj_form(conn, L.J_M, L.j_E, X, Y), 4)
            if lhs != rhs:
                return f"N^ℂ(X+iJX, Y+iJY) − 4N(X,Y) = {_msub(lhs, rhs)}"
        return None

    def split():
        e = [random_poly(rng, m, 2) for _ in range(L.k)]
        for X in fr:
            s = [a + b for a, b in zip(S.d10(X, e), S.d01(X, e))]
            if s != [x * 2 for x in conn.cov(X, e)]:
                return "D^{1,0} + D^{0,1} ≠ 2∇ on X ± iJX"
        return None

    rep.run("d01.four-RD", "N^ℂ = 4R_D on (0,1)-pairs", four)
    rep.run("d01.polarization", "N^ℂ(X+iJX, Y+iJY) = 4N(X,Y)", polar)
    rep.run("d01.split", "D = D^{1,0} + D^{0,1}", split)
    return S, rep


def d01_defect(S: Dsplit, e: Sequence[Poly]) -> Optional[str]:
    for i in range(S.L.m):
        v = S.d01(_unit(S.L.chart, S.L.m, i), e)
        if any(x.terms for x in v):
            return f"D^{{0,1}} along ∂_{i + 1} = {[str(x) for x in v]}"
    return None


def adapted_holo_witness(S: Dsplit, e: Sequence[Poly]) -> Optional[str]:
    """j_E∇_X e = ∇_{J_M X} e on the frame."""
    for i in range(S.L.m):
        X = _unit(S.L.chart, S.L.m, i)
        lhs = _mv(S.j, S.conn.cov(X, e))
        rhs = S.conn.cov(_mv(S.J, X), e)
        if lhs != rhs:
            return f"j_E∇e ≠ ∇_J e along ∂_{i + 1}"
    return None


def holo_section_check(L: LinCpxStr, e, conn: Optional[LinConn] = None, S: Optional[Dsplit] = None) -> bool:
    comps = list(e.comps) if isinstance(e, Section) else [x if isinstance(x, Poly) else L.chart.parse(str(x)) for x in e]
    if S is None:
        S, rep = d01_split(L, conn)
        if not rep.by_id("d01.flat-direct").ok:
            raise ValueError("D^{0,1} is not flat")
    hol = d01_defect(S, comps) is None
    if hol and adapted_holo_witness(S, comps) is not None:
        raise ArithmeticError("holomorphic section violates j_E∇_X e = ∇_{J_M X} e")
    return hol


# --------------------------------------------------------------------------
# holomorphic Lie algebroids
# --------------------------------------------------------------------------

def anchor_holomorphic_witness(A, L: LinCpxStr) -> Optional[str]:
    JR = _mm(L.JM, _rows(A.rho))
    Rj = _mm(_rows(A.rho), L.jE)
    if JR != Rj:
        return f"J_M∘ρ − ρ∘j_A = {_msub(JR, Rj)}"
    return None


def iis_check(A, L: LinCpxStr, sections: Sequence[Section], seed: int = 0) -> Report:
    """Infinitesimal ideal system (T^{0,1}M, A^{0,1}, ∇^{0,1}) on generating holomorphic sections."""
    if L.k != A.n or L.chart != A.chart:
        raise ValueError("complex structure does not live on A")
    w = anchor_holomorphic_witness(A, L)
    if w:
        raise ValueError(f"anchor is not holomorphic: {w}")
    rep = Report("iis")
    S, drep = d01_split(L)
    rep.add("iis.d01-flat", "D^{0,1} is flat", drep.by_id("d01.flat-direct").ok, drep.by_id("d01.flat-direct").witness)
    secs = [s if isinstance(s, Section) else Section(A.A, s) for s in sections]
    jA = L.j_E

    def generators():
        for s in secs:
            w = d01_defect(S, s.comps)
            if w:
                return f"supplied section {s} is not holomorphic: {w}"
        return None

    def closed():
        for a, b in itertools.combinations(secs, 2):
            w = d01_defect(S, A.bracket(a, b).comps)
            if w:
                return f"[a,b] not holomorphic for a={a}, b={b}: {w}"
        return None

    def ideal():
        for a in secs:
            for e in A.A.frame():
                nu = e + jA(e).scale(I)
                br = A.bracket(a, nu)
                if jA(br) != br.scale(-I):
                    return f"[a, e + i j e] ∉ A^{{0,1}} for a={a}"
        return None

    def mixed():
        for a, b in itertools.product(secs, repeat=2):
            a10 = (a - jA(a).scale(I)).scale(HALF)
            b01 = (b + jA(b).scale(I)).scale(HALF)
            br = A.bracket(a10, b01)
            if not br.is_zero():
                return f"[a^(1,0), b^(0,1)] = {br}"
        return None

    rep.run("iis.generators", "supplied sections are holomorphic", generators)
    rep.run("iis.bracket-closed", "bracket of holomorphic sections is holomorphic", closed)
    rep.run("iis.ideal", "[a, A^{0,1}] ⊂ A^{0,1} for holomorphic a", ideal)
    rep.run("iis.mixed-vanish", "[a^{1,0}, b^{0,1}] = 0", mixed)
    return rep
