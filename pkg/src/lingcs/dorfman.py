"""Dorfman connections on E⊕T*M, their dull brackets and curvature.

A Dorfman connection is stored as the standard one of a linear connection ∇
on E plus a tensorial twist:

    Δ_ν τ = Δ^std_ν τ − Φtw(ν)(pr_E τ)

with Δ^std_{(X,ε)}(e,θ) = (∇_X e, ℒ_Xθ + ⟨∇*ε, e⟩).  Sections of the side
TM⊕E* are stored as (X, ε) and sections of the core E⊕T*M as (e, θ).
"""

from __future__ import annotations

import random
from typing import Callable, List, Optional, Sequence, Tuple

from .algebra import (
    Bundle,
    BundleMap,
    Chart,
    Poly,
    Section,
    iota_d,
    pair,
    random_poly,
    vf_apply,
)
from .report import Report

Matrix = List[List[Poly]]


def side_bundle(chart: Chart, k: int) -> Bundle:
    return Bundle(chart, (("TM", chart.dim), ("E*", k)))


def core_bundle(chart: Chart, k: int) -> Bundle:
    return Bundle(chart, (("E", k), ("T*M", chart.dim)))


def e_bundle(chart: Chart, k: int) -> Bundle:
    return Bundle.simple(chart, "E", k)


class LinConn:
    """Linear connection ∇_X e = Σ_i X_i (∂_i e + Γ_i e) on a trivial bundle E."""

    def __init__(self, chart: Chart, rank: int, gamma: Optional[Sequence[Sequence[Sequence]]] = None):
        self.chart = chart
        self.rank = rank
        m = chart.dim
        z = chart.zero()
        if gamma is None:
            gamma = [[[z] * rank for _ in range(rank)] for _ in range(m)]
        if len(gamma) != m or any(len(g) != rank or any(len(r) != rank for r in g) for g in gamma):
            raise ValueError(f"Christoffel data must be {m} matrices of size {rank}x{rank}")
        self.gamma: Tuple[Tuple[Tuple[Poly, ...], ...], ...] = tuple(
            tuple(tuple(v if isinstance(v, Poly) else (chart.parse(v) if isinstance(v, str) else chart.const(v)) for v in r) for r in g)
            for g in gamma
        )

    @classmethod
    def flat(cls, chart: Chart, rank: int) -> "LinConn":
        return cls(chart, rank)

    def __eq__(self, other):
        return isinstance(other, LinConn) and self.chart == other.chart and self.gamma == other.gamma

    def __hash__(self):
        return hash(self.gamma)

    def __add__(self, other: "LinConn") -> "LinConn":
        return LinConn(self.chart, self.rank, [[[a + b for a, b in zip(r, s)] for r, s in zip(g, h)] for g, h in zip(self.gamma, other.gamma)])

    def shifted(self, omega: Sequence[Sequence[Sequence[Poly]]]) -> "LinConn":
        """∇ + ω where ω_i is a k×k matrix per coordinate direction."""
        return LinConn(self.chart, self.rank, [[[a + b for a, b in zip(r, s)] for r, s in zip(g, h)] for g, h in zip(self.gamma, omega)])

    def gamma_along(self, X: Sequence[Poly]) -> Matrix:
        """Γ_X = Σ X_i Γ_i."""
        k = self.rank
        z = self.chart.zero()
        out = [[z] * k for _ in range(k)]
        for i, xi in enumerate(X):
            if not xi.terms:
                continue
            g = self.gamma[i]
            for a in range(k):
                for b in range(k):
                    if g[a][b].terms:
                        out[a][b] = out[a][b] + xi * g[a][b]
        return out

    def cov(self, X: Sequence[Poly], e: Sequence[Poly]) -> List[Poly]:
        """∇_X e on component vectors."""
        g = self.gamma_along(X)
        out = []
        for a in range(self.rank):
            acc = vf_apply(X, e[a])
            for b in range(self.rank):
                if g[a][b].terms and e[b].terms:
                    acc = acc + g[a][b] * e[b]
            out.append(acc)
        return out

    def dual_cov(self, X: Sequence[Poly], eps: Sequence[Poly]) -> List[Poly]:
        """∇*_X ε = X(ε) − Γ_X^t ε."""
        g = self.gamma_along(X)
        out = []
        for a in range(self.rank):
            acc = vf_apply(X, eps[a])
            for b in range(self.rank):
                if g[b][a].terms and eps[b].terms:
                    acc = acc - g[b][a] * eps[b]
            out.append(acc)
        return out

    def star_form(self, eps: Sequence[Poly], e: Sequence[Poly]) -> List[Poly]:
        """The 1-form ⟨∇*ε, e⟩, component i = ⟨∇*_{∂_i} ε, e⟩."""
        m = self.chart.dim
        out = []
        for i in range(m):
            X = [self.chart.one() if j == i else self.chart.zero() for j in range(m)]
            de = self.dual_cov(X, eps)
            acc = self.chart.zero()
            for a in range(self.rank):
                if de[a].terms and e[a].terms:
                    acc = acc + de[a] * e[a]
            out.append(acc)
        return out

    def curvature(self, i: int, j: int) -> Matrix:
        """R(∂_i, ∂_j) = ∂_iΓ_j − ∂_jΓ_i + [Γ_i, Γ_j]."""
        k = self.rank
        gi, gj = self.gamma[i], self.gamma[j]
        out = []
        for a in range(k):
            row = []
            for b in range(k):
                v = gj[a][b].diff(i) - gi[a][b].diff(j)
                for c in range(k):
                    v = v + gi[a][c] * gj[c][b] - gj[a][c] * gi[c][b]
                row.append(v)
            out.append(row)
        return out

    def __repr__(self):
        return f"LinConn(rank={self.rank}, m={self.chart.dim})"


class DorfmanConn:
    """Δ = std(∇) − Φtw.

    ``twist[n][a]`` is the component vector of Φtw(b_n)(e_a) in E⊕T*M, for
    b_n the n-th frame section of TM⊕E* and e_a the a-th frame section of E.
    """

    def __init__(self, conn: LinConn, twist: Optional[Sequence[Sequence[Sequence]]] = None):
        self.conn = conn
        self.chart = conn.chart
        self.m = conn.chart.dim
        self.k = conn.rank
        self.side = side_bundle(self.chart, self.k)
        self.core = core_bundle(self.chart, self.k)
        self.E = e_bundle(self.chart, self.k)
        n = self.m + self.k
        z = self.chart.zero()
        if twist is None:
            twist = [[[z] * n for _ in range(self.k)] for _ in range(n)]
        if len(twist) != n or any(len(t) != self.k or any(len(v) != n for v in t) for t in twist):
            raise ValueError(f"twist must have shape [{n}][{self.k}][{n}]")
        self.twist = tuple(
            tuple(tuple(v if isinstance(v, Poly) else (self.chart.parse(v) if isinstance(v, str) else self.chart.const(v)) for v in t) for t in tw)
            for tw in twist
        )
        self._table = None

    # -- structure ---------------------------------------------------------
    def side_section(self, X, eps) -> Section:
        return Section(self.side, list(X) + list(eps))

    def core_section(self, e, theta) -> Section:
        return Section(self.core, list(e) + list(theta))

    def twist_map(self, nu: Section) -> BundleMap:
        """Φtw(ν) ∈ Hom(E, E⊕T*M)."""
        n = self.m + self.k
        z = self.chart.zero()
        rows = [[z] * self.k for _ in range(n)]
        for s, c in enumerate(nu.comps):
            if not c.terms:
                continue
            for a in range(self.k):
                vec = self.twist[s][a]
                for out in range(n):
                    if vec[out].terms:
                        rows[out][a] = rows[out][a] + c * vec[out]
        return BundleMap(self.E, self.core, rows)

    def psi_tw(self, nu1: Section, nu2: Section) -> Section:
        """Ψtw(ν₁,ν₂) = Φtw(ν₁)^t(ν₂) ∈ Γ(E*)."""
        return self.twist_map(nu1).T(nu2)

    def has_twist(self) -> bool:
        return any(v.terms for t in self.twist for vec in t for v in vec)

    # -- operator ----------------------------------------------------------
    def std(self, nu: Section, tau: Section) -> Section:
        m, k = self.m, self.k
        X, eps = nu.comps[:m], nu.comps[m:]
        e, theta = tau.comps[:k], tau.comps[k:]
        top = self.conn.cov(X, e)
        lie = _lie_form(X, theta)
        star = self.conn.star_form(eps, e)
        return Section(self.core, top + [a + b for a, b in zip(lie, star)])

    def direct(self, nu: Section, tau: Section) -> Section:
        """Δ_ν τ from the defining formula (slow path, used for the frame table)."""
        out = self.std(nu, tau)
        if self.has_twist():
            e = Section(self.E, tau.comps[: self.k])
            out = out - self.twist_map(nu)(e)
        return out

    def table(self):
        """T[n][p] = components of Δ_{b_n} c_p on the constant frames."""
        if self._table is None:
            self._table = tuple(
                tuple(self.direct(b, c).comps for c in self.core.frame()) for b in self.side.frame()
            )
        return self._table

    def __call__(self, nu: Section, tau: Section) -> Section:
        return apply_dorfman(self, nu, tau)

    def on_e(self, nu: Section) -> BundleMap:
        """Δ_ν ∘ ι_E as a first-order operator is not a bundle map; this is its
        value on the constant frame, column a = Δ_ν(e_a, 0)."""
        cols = [self(nu, self.core.basis(a)) for a in range(self.k)]
        return BundleMap.from_columns(self.E, self.core, cols)

    def nabla(self, nu: Section, e: Sequence[Poly]) -> List[Poly]:
        """The TM⊕E*-connection ∇_ν e = pr_E Δ_ν(e,0) on E."""
        z = self.chart.zero()
        out = self(nu, self.core_section(e, [z] * self.m))
        return list(out.comps[: self.k])

    def conn_matrix(self, nu: Section) -> Matrix:
        """C_ν with column b = ∇_ν e_b (constant frame)."""
        z = self.chart.zero()
        cols = [self.nabla(nu, [self.chart.one() if a == b else z for a in range(self.k)]) for b in range(self.k)]
        return [[cols[b][a] for b in range(self.k)] for a in range(self.k)]

    def with_twist(self, extra: Sequence[Sequence[Sequence[Poly]]]) -> "DorfmanConn":
        """Δ' = Δ − extra, i.e. the twist grows by ``extra``."""
        return DorfmanConn(
            self.conn,
            [[[a + b for a, b in zip(v, w)] for v, w in zip(t, s)] for t, s in zip(self.twist, extra)],
        )

    def __repr__(self):
        return f"DorfmanConn(m={self.m}, k={self.k}, twisted={self.has_twist()})"


def _lie_form(X: Sequence[Poly], theta: Sequence[Poly]) -> List[Poly]:
    m = len(X)
    out = []
    for i in range(m):
        acc = vf_apply(X, theta[i])
        for j in range(m):
            if theta[j].terms:
                d = X[j].diff(i)
                if d.terms:
                    acc = acc + theta[j] * d
        out.append(acc)
    return out


def std_dorfman(conn: LinConn) -> DorfmanConn:
    return DorfmanConn(conn)


def apply_dorfman(D: DorfmanConn, nu: Section, tau: Section) -> Section:
    if nu.bundle.summands != D.side.summands:
        raise ValueError(f"expected a section of TM⊕E*, got {nu.bundle.label}")
    if tau.bundle.summands != D.core.summands:
        raise ValueError(f"expected a section of E⊕T*M, got {tau.bundle.label}")
    # Δ_ν τ = Σ_n ν_n Δ_{b_n}τ + Σ_n ⟨b_n,τ⟩ (0, dν_n),
    # Δ_{b_n}τ = Σ_p τ_p T[n][p] + (ρ(b_n) τ_p) c_p
    T = D.table()
    m, k = D.m, D.k
    r = m + k
    perm = D.side.dual_perm()
    z = D.chart.zero()
    out = [z] * r
    for n, vn in enumerate(nu.comps):
        if not vn.terms:
            continue
        row = T[n]
        for p, tp in enumerate(tau.comps):
            if not tp.terms:
                continue
            col = row[p]
            prod = vn * tp
            for o in range(r):
                if col[o].terms:
                    out[o] = out[o] + prod * col[o]
            if n < m:
                d = tp.diff(n)
                if d.terms:
                    out[p] = out[p] + vn * d
        pn = tau.comps[perm[n]]
        if pn.terms:
            for i in range(m):
                d = vn.diff(i)
                if d.terms:
                    out[k + i] = out[k + i] + pn * d
    return Section(D.core, out)


def dull_bracket(D: DorfmanConn, nu1: Section, nu2: Section) -> Section:
    """The dull bracket dual to Δ:
    ⟨⟦ν₁,ν₂⟧, τ⟩ = X₁⟨ν₂,τ⟩ − ⟨ν₂, Δ_{ν₁}τ⟩, evaluated on the constant core frame."""
    X1 = nu1.comps[: D.m]
    comps = []
    for t in D.core.frame():
        comps.append(vf_apply(X1, pair(nu2, t)) - pair(nu2, D(nu1, t)))
    # comps[p] = ⟨⟦ν₁,ν₂⟧, c_p⟩; reorder from core frame index to side index
    perm = D.side.dual_perm()
    return Section(D.side, [comps[perm[s]] for s in range(D.side.rank)])


def curvature_R(D: DorfmanConn, nu1: Section, nu2: Section, tau: Section) -> Section:
    """R(ν₁,ν₂)τ = Δ₁Δ₂τ − Δ₂Δ₁τ − Δ_{⟦ν₁,ν₂⟧}τ, full E⊕T*M value."""
    return D(nu1, D(nu2, tau)) - D(nu2, D(nu1, tau)) - D(dull_bracket(D, nu1, nu2), tau)


def curvature_map(D: DorfmanConn, nu1: Section, nu2: Section) -> BundleMap:
    """R(ν₁,ν₂) ∈ End(E⊕T*M) on the constant frame (it is tensorial)."""
    cols = [curvature_R(D, nu1, nu2, t) for t in D.core.frame()]
    return BundleMap.from_columns(D.core, D.core, cols)


def curvature_on_E(D: DorfmanConn, nu1: Section, nu2: Section) -> BundleMap:
    """R(ν₁,ν₂)∘ι_E ∈ Hom(E, E⊕T*M)."""
    cols = [curvature_R(D, nu1, nu2, D.core.basis(a)) for a in range(D.k)]
    return BundleMap.from_columns(D.E, D.core, cols)


def jacobiator(D: DorfmanConn, nu1: Section, nu2: Section, nu3: Section) -> Section:
    """Cyclic sum ⟦⟦ν₁,ν₂⟧,ν₃⟧ + ⟦⟦ν₂,ν₃⟧,ν₁⟧ + ⟦⟦ν₃,ν₁⟧,ν₂⟧."""
    b = lambda x, y: dull_bracket(D, x, y)
    return b(b(nu1, nu2), nu3) + b(b(nu2, nu3), nu1) + b(b(nu3, nu1), nu2)


def skew_witness(D: DorfmanConn) -> Optional[Tuple[int, int, Section]]:
    """First frame pair with nonzero symmetrised dull bracket, or None.

    The symmetrised dull bracket is tensorial, so frames suffice."""
    fr = D.side.frame()
    for p in range(len(fr)):
        for q in range(p, len(fr)):
            s = dull_bracket(D, fr[p], fr[q]) + dull_bracket(D, fr[q], fr[p])
            if not s.is_zero():
                return p, q, s
    return None


def is_skew(D: DorfmanConn) -> bool:
    return skew_witness(D) is None


# --------------------------------------------------------------------------
# Changes of splitting
# --------------------------------------------------------------------------

class HomForm:
    """A C∞-linear map ν ↦ Hom(E, E⊕T*M), stored on frames like a twist.

    ``data[n][a]`` holds the core components of the value on (b_n, e_a).  Used
    both for changes of splitting Φ₁₂ (with Δ² = Δ¹ − Φ₁₂(·)∘pr_E) and for the
    core tensor Φ of a linear generalised complex structure.
    """

    def __init__(self, chart: Chart, k: int, data: Optional[Sequence[Sequence[Sequence[Poly]]]] = None):
        self.chart = chart
        self.k = k
        self.side = side_bundle(chart, k)
        self.core = core_bundle(chart, k)
        self.E = e_bundle(chart, k)
        n = self.side.rank
        z = chart.zero()
        if data is None:
            data = [[[z] * n for _ in range(k)] for _ in range(n)]
        if len(data) != n or any(len(t) != k or any(len(v) != n for v in t) for t in data):
            raise ValueError(f"form data must have shape [{n}][{k}][{n}]")
        self.data = tuple(tuple(tuple(v) for v in t) for t in data)

    @classmethod
    def from_psi(cls, chart: Chart, k: int, psi) -> "HomForm":
        return cls(chart, k, twist_from_psi(chart, k, psi))

    @classmethod
    def from_function(cls, chart: Chart, k: int, fn: Callable[[Section], BundleMap]) -> "HomForm":
        side = side_bundle(chart, k)
        return cls(chart, k, [[list(fn(b).column(a).comps) for a in range(k)] for b in side.frame()])

    def phi(self, nu: Section) -> BundleMap:
        n = self.side.rank
        z = self.chart.zero()
        rows = [[z] * self.k for _ in range(n)]
        for s, c in enumerate(nu.comps):
            if not c.terms:
                continue
            for a in range(self.k):
                vec = self.data[s][a]
                for out in range(n):
                    if vec[out].terms:
                        rows[out][a] = rows[out][a] + c * vec[out]
        return BundleMap(self.E, self.core, rows)

    __call__ = phi

    def psi(self, nu1: Section, nu2: Section) -> Section:
        return self.phi(nu1).T(nu2)

    def psi_array(self):
        """psi[n1][n2][a] on frames."""
        fr = self.side.frame()
        return [[list(self.psi(p, q).comps) for q in fr] for p in fr]

    def is_zero(self) -> bool:
        return all(v.is_zero() for t in self.data for vec in t for v in vec)

    def skew_witness(self):
        fr = self.side.frame()
        for p in range(len(fr)):
            for q in range(p, len(fr)):
                s = self.psi(fr[p], fr[q]) + self.psi(fr[q], fr[p])
                if not s.is_zero():
                    return p, q, s
        return None

    def is_skew(self) -> bool:
        return self.skew_witness() is None

    def _combine(self, other, op):
        return HomForm(self.chart, self.k, [[[op(a, b) for a, b in zip(v, w)] for v, w in zip(t, s)] for t, s in zip(self.data, other.data)])

    def __add__(self, other: "HomForm"):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "HomForm"):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return HomForm(self.chart, self.k, [[[-v for v in vec] for vec in t] for t in self.data])

    def scale(self, c) -> "HomForm":
        return HomForm(self.chart, self.k, [[[v * c for v in vec] for vec in t] for t in self.data])

    def post(self, M: BundleMap) -> "HomForm":
        """ν ↦ M∘Φ(ν) for an endomorphism M of the core."""
        out = []
        for t in self.data:
            out.append([list(M(Section(self.core, vec)).comps) for vec in t])
        return HomForm(self.chart, self.k, out)

    def pre(self, j: BundleMap) -> "HomForm":
        """ν ↦ Φ(jν)."""
        return HomForm.from_function(self.chart, self.k, lambda b: self.phi(j(b)))

    def __eq__(self, other):
        return isinstance(other, HomForm) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"HomForm(k={self.k}, zero={self.is_zero()})"


Change = HomForm


def change_of_splitting(D1: DorfmanConn, D2: DorfmanConn) -> Change:
    if D1.chart != D2.chart or D1.k != D2.k:
        raise ValueError("Dorfman connections live on different bundles")
    data = []
    for b in D1.side.frame():
        row = []
        for a in range(D1.k):
            t = D1.core.basis(a)
            row.append(list((D1(b, t) - D2(b, t)).comps))
        data.append(row)
    return HomForm(D1.chart, D1.k, data)


def apply_change(D: DorfmanConn, ch: Change) -> DorfmanConn:
    """Δ' = Δ − Φ(ν)∘pr_E."""
    return D.with_twist(ch.data)


def same_operator(D1: DorfmanConn, D2: DorfmanConn) -> bool:
    return change_of_splitting(D1, D2).is_zero()


def dorfman_from_operator(chart: Chart, k: int, op: Callable[[Section, Section], Section]) -> DorfmanConn:
    """Recover the (∇, twist) form of an operator that satisfies the Dorfman axioms."""
    m = chart.dim
    probe = DorfmanConn(LinConn.flat(chart, k))
    gamma = []
    for i in range(m):
        X = probe.side.basis(i)
        cols = [op(X, probe.core.basis(a)).comps[:k] for a in range(k)]
        gamma.append([[cols[b][a] for b in range(k)] for a in range(k)])
    base = DorfmanConn(LinConn(chart, k, gamma))
    twist = []
    for b in base.side.frame():
        row = []
        for a in range(k):
            t = base.core.basis(a)
            row.append(list((base(b, t) - op(b, t)).comps))
        twist.append(row)
    return DorfmanConn(base.conn, twist)


def twist_from_psi(chart: Chart, k: int, psi: Sequence[Sequence[Sequence[Poly]]]) -> List[List[List[Poly]]]:
    """Twist array from Ψ(b_{n1}, b_{n2})(e_a) = psi[n1][n2][a]."""
    side = side_bundle(chart, k)
    perm = side.dual_perm()
    n = side.rank
    z = chart.zero()
    out = [[[z] * n for _ in range(k)] for _ in range(n)]
    for n1 in range(n):
        for n2 in range(n):
            for a in range(k):
                out[n1][a][perm[n2]] = psi[n1][n2][a]
    return out


def dorfman_from_psi(conn: LinConn, psi) -> DorfmanConn:
    return DorfmanConn(conn, twist_from_psi(conn.chart, conn.rank, psi))


def random_conn(rng: random.Random, chart: Chart, k: int, degree: int = 1) -> LinConn:
    m = chart.dim
    return LinConn(chart, k, [[[random_poly(rng, m, degree) for _ in range(k)] for _ in range(k)] for _ in range(m)])


def random_psi(rng: random.Random, chart: Chart, k: int, degree: int = 1, skew: bool = True):
    n = chart.dim + k
    z = chart.zero()
    psi = [[[z] * k for _ in range(n)] for _ in range(n)]
    for n1 in range(n):
        for n2 in range(n):
            if skew and n2 < n1:
                continue
            for a in range(k):
                if skew and n1 == n2:
                    continue
                v = random_poly(rng, chart.dim, degree)
                psi[n1][n2][a] = v
                if skew:
                    psi[n2][n1][a] = -v
    return psi


def random_dorfman(rng: random.Random, chart: Chart, k: int, degree: int = 1, skew: bool = True) -> DorfmanConn:
    conn = random_conn(rng, chart, k, degree)
    return dorfman_from_psi(conn, random_psi(rng, chart, k, degree, skew))


# --------------------------------------------------------------------------
# Identity suite
# --------------------------------------------------------------------------

def dorfman_identity_check(D: DorfmanConn, seed: int = 0, degree: int = 1) -> Report:
    """Axioms, dull-bracket rules, curvature identities and changes of splitting."""
    from .algebra import random_section

    rep = Report("dorfman-identities")
    rng = random.Random(seed)
    chart, m, k = D.chart, D.m, D.k
    side, core = D.side, D.core
    fr = side.frame()
    nus = [random_section(rng, side, degree) for _ in range(2)]
    taus = [random_section(rng, core, degree) for _ in range(2)]
    fs = [random_poly(rng, m, degree) for _ in range(2)]
    z = chart.zero()

    def X(nu):
        return list(nu.comps[:m])

    def dsec(f):
        return Section(core, [z] * k + [f.diff(i) for i in range(m)])

    def leibniz():
        for nu, tau, f in zip(nus, taus, fs):
            d = D(nu, tau.scale(f)) - D(nu, tau).scale(f) - tau.scale(vf_apply(X(nu), f))
            if not d.is_zero():
                return f"Δ_ν(fτ) − fΔ_ντ − X(f)τ = {d}"
        return None

    def anchor():
        for nu, tau, f in zip(nus, taus, fs):
            d = D(nu.scale(f), tau) - D(nu, tau).scale(f) - dsec(f).scale(pair(nu, tau))
            if not d.is_zero():
                return f"Δ_(fν)τ − fΔ_ντ − ⟨ν,τ⟩df = {d}"
        return None

    def exact():
        for nu, f in zip(nus, fs):
            d = D(nu, dsec(f)) - dsec(vf_apply(X(nu), f))
            if not d.is_zero():
                return f"Δ_ν(0,df) − (0,d(Xf)) = {d}"
        return None

    def dull_rules():
        n1, n2 = nus
        f = fs[0]
        b = dull_bracket(D, n1, n2)
        XY = [vf_apply(X(n1), c) - vf_apply(X(n2), c1) for c, c1 in zip(X(n2), X(n1))]
        if list(b.comps[:m]) != XY:
            return "TM part of the dull bracket is not the vector field bracket"
        d = dull_bracket(D, n1, n2.scale(f)) - b.scale(f) - n2.scale(vf_apply(X(n1), f))
        if not d.is_zero():
            return f"⟦ν₁,fν₂⟧ − f⟦ν₁,ν₂⟧ − X₁(f)ν₂ = {d}"
        d = dull_bracket(D, n1.scale(f), n2) - b.scale(f) + n1.scale(vf_apply(X(n2), f))
        if not d.is_zero():
            return f"⟦fν₁,ν₂⟧ − f⟦ν₁,ν₂⟧ + X₂(f)ν₁ = {d}"
        return None

    def r_core():
        for p in range(len(fr)):
            for q in range(p + 1, len(fr)):
                for i in range(m):
                    v = curvature_R(D, fr[p], fr[q], core.basis(k + i))
                    if not v.is_zero():
                        return f"R(b{p},b{q})(0,dx{i + 1}) = {v}"
        return None

    def jac():
        for p, q, r in _triples(len(fr)):
            lhs = jacobiator(D, fr[p], fr[q], fr[r])
            rhs = curvature_map(D, fr[p], fr[q]).T(fr[r])
            if lhs != rhs:
                return f"Jac − R^t on (b{p},b{q},b{r}) = {lhs - rhs}"
        return None

    rep.run("dorfman.axiom-leibniz", "Δ_ν(fτ) = fΔ_ντ + ℒ_X(f)τ", leibniz)
    rep.run("dorfman.axiom-anchor", "Δ_(fν)τ = fΔ_ντ + ⟨ν,τ⟩(0,df)", anchor)
    rep.run("dorfman.axiom-exact", "Δ_ν(0,df) = (0,d ℒ_X f)", exact)
    rep.run("dorfman.dull-rules", "dull bracket: anchor and Leibniz rules", dull_rules)
    rep.run("dorfman.curvature-core", "R(ν₁,ν₂)(0,θ) = 0", r_core)
    skew = is_skew(D)
    c = rep.run("dorfman.jacobiator-curvature", "Jac(ν₁,ν₂,ν₃) = R(ν₁,ν₂)^t ν₃ for skew Δ", jac)
    if not skew and not c.ok:
        c.witness = f"{c.witness} (Δ is not skew-symmetric; the identity needs skewness)"

    # changes of splitting against a seeded random skew Dorfman connection
    D2 = random_dorfman(rng, chart, k, degree, skew=True)
    ch = change_of_splitting(D, D2)

    def round_trip():
        if not same_operator(apply_change(D, ch), D2):
            return "applying Φ₁₂ to Δ₁ does not give Δ₂"
        back = change_of_splitting(D2, D)
        if not (back + ch).is_zero():
            return "Φ₂₁ ≠ −Φ₁₂"
        if not same_operator(apply_change(D2, back), D):
            return "Φ₂₁ does not return Δ₁"
        return None

    def change_bracket():
        for p in range(len(fr)):
            for q in range(len(fr)):
                lhs = dull_bracket(D2, fr[p], fr[q])
                psi = ch.psi(fr[p], fr[q])
                rhs = dull_bracket(D, fr[p], fr[q]) + Section(side, [z] * m + list(psi.comps))
                if lhs != rhs:
                    return f"⟦⟧₂ − ⟦⟧₁ − (0,Ψ₁₂) on (b{p},b{q}) = {lhs - rhs}"
        return None

    def skew_corollary():
        ok12 = ch.skew_witness() is None
        if skew and ok12 != is_skew(D2):
            return f"Δ₁ skew, Ψ₁₂ skew = {ok12}, Δ₂ skew = {is_skew(D2)}"
        # symmetric parts add up in general
        for p in range(len(fr)):
            for q in range(p, len(fr)):
                s1 = dull_bracket(D, fr[p], fr[q]) + dull_bracket(D, fr[q], fr[p])
                s2 = dull_bracket(D2, fr[p], fr[q]) + dull_bracket(D2, fr[q], fr[p])
                sp = ch.psi(fr[p], fr[q]) + ch.psi(fr[q], fr[p])
                if s2 != s1 + Section(side, [z] * m + list(sp.comps)):
                    return f"symmetric parts do not add up on (b{p},b{q})"
        return None

    rep.run("dorfman.change-round-trip", "change of splitting and its inverse", round_trip)
    rep.run("dorfman.change-bracket", "⟦ν₁,ν₂⟧₂ = ⟦ν₁,ν₂⟧₁ + (0,Ψ₁₂(ν₁,ν₂))", change_bracket)
    rep.run("dorfman.skew-corollary", "for skew Δ₁: Δ₂ skew ⇔ Ψ₁₂ skew", skew_corollary)
    return rep


def _triples(n: int):
    for p in range(n):
        for q in range(p + 1, n):
            for r in range(n):
                yield p, q, r


# --------------------------------------------------------------------------
# Generalised connections on TM⊕T*M
# --------------------------------------------------------------------------

class GenConn:
    """∇_u v = ρ(u)(v) + Σ_n u_n C_n v on 𝔼 = TM⊕T*M in the constant frame."""

    def __init__(self, chart: Chart, C: Sequence[Sequence[Sequence]]):
        self.chart = chart
        m = chart.dim
        self.bundle = Bundle(chart, (("TM", m), ("T*M", m)))
        n = 2 * m
        if len(C) != n or any(len(c) != n or any(len(r) != n for r in c) for c in C):
            raise ValueError(f"need {n} matrices of size {n}x{n}")
        self.C = tuple(tuple(tuple(v if isinstance(v, Poly) else chart.const(v) for v in r) for r in c) for c in C)

    @classmethod
    def pullback(cls, chart: Chart, gamma: Sequence[Sequence[Sequence[Poly]]]) -> "GenConn":
        """∇^ρ for a TM-connection on 𝔼 with Christoffel matrices gamma[i] (2m×2m)."""
        m = chart.dim
        z = chart.zero()
        C = [list(map(list, gamma[i])) for i in range(m)]
        C += [[[z] * (2 * m) for _ in range(2 * m)] for _ in range(m)]
        return cls(chart, C)

    def apply(self, u: Sequence[Poly], v: Sequence[Poly]) -> List[Poly]:
        m = self.chart.dim
        X = u[:m]
        out = [vf_apply(X, c) for c in v]
        for n, un in enumerate(u):
            if not un.terms:
                continue
            Cn = self.C[n]
            for a in range(2 * m):
                acc = self.chart.zero()
                for b in range(2 * m):
                    if Cn[a][b].terms and v[b].terms:
                        acc = acc + Cn[a][b] * v[b]
                if acc.terms:
                    out[a] = out[a] + un * acc
        return out

    def metric_witness(self) -> Optional[Tuple[int, int, int]]:
        """(n, a, b) with (C_n^t G + G C_n)_{ab} ≠ 0, G the pairing matrix."""
        m = self.chart.dim
        n2 = 2 * m
        G = lambda a, b: 1 if (a < m <= b and b - m == a) or (b < m <= a and a - m == b) else 0
        for n in range(n2):
            Cn = self.C[n]
            for a in range(n2):
                for b in range(n2):
                    v = self.chart.zero()
                    for c in range(n2):
                        if G(c, b):
                            v = v + Cn[c][a]
                        if G(a, c):
                            v = v + Cn[c][b]
                    if not v.is_zero():
                        return n, a, b
        return None

    def constraint_witness(self) -> Optional[Tuple[int, int]]:
        """(θ index, e index) with ∇_{ρ*θ} e ≠ 0."""
        m = self.chart.dim
        for t in range(m):
            Cn = self.C[m + t]
            for b in range(2 * m):
                if any(not Cn[a][b].is_zero() for a in range(2 * m)):
                    return t, b
        return None


def courant_bracket(u: Sequence[Poly], v: Sequence[Poly], m: int) -> List[Poly]:
    """Dorfman bracket ([X,Y], ℒ_Xβ − ι_Y dα) on TM⊕T*M components."""
    X, a = list(u[:m]), list(u[m:])
    Y, b = list(v[:m]), list(v[m:])
    top = [vf_apply(X, Y[i]) - vf_apply(Y, X[i]) for i in range(m)]
    lie = _lie_form(X, b)
    idd = iota_d(Y, a)
    return top + [p - q for p, q in zip(lie, idd)]


class ConstraintError(ValueError):
    def __init__(self, theta_index: int, e_index: int):
        super().__init__(f"∇ along ρ*(dx{theta_index + 1}) is nonzero on frame section {e_index}")
        self.theta_index = theta_index
        self.e_index = e_index


def gen_conn_to_dorfman(G: GenConn) -> DorfmanConn:
    """Δ_{e₁}e₂ = ⟦e₁,e₂⟧ + ∇_{e₂}e₁, with E = TM."""
    w = G.constraint_witness()
    if w is not None:
        raise ConstraintError(*w)
    m = G.chart.dim

    def op(nu: Section, tau: Section) -> Section:
        u, v = list(nu.comps), list(tau.comps)
        br = courant_bracket(u, v, m)
        nb = G.apply(v, u)
        return Section(tau.bundle, [p + q for p, q in zip(br, nb)])

    return dorfman_from_operator(G.chart, m, op)


def dorfman_to_gen_conn(D: DorfmanConn) -> GenConn:
    """∇_{e₂}e₁ = Δ_{e₁}e₂ − ⟦e₁,e₂⟧ on the constant frame; requires E = TM."""
    if D.k != D.m:
        raise ValueError("generalised connections need E = TM")
    m = D.m
    n = 2 * m
    fr_side = D.side.frame()
    fr_core = D.core.frame()
    C = []
    for q in range(n):
        cols = []
        for p in range(n):
            d = D(fr_side[p], fr_core[q]).comps
            br = courant_bracket(fr_side[p].comps, fr_core[q].comps, m)
            cols.append([a - b for a, b in zip(d, br)])
        C.append([[cols[p][a] for p in range(n)] for a in range(n)])
    return GenConn(D.chart, C)
