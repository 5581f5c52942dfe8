"""Generator-level calculus on the Courant algebroid TE⊕T*E → E.

Sections are finite combinations of linear sections σ(ν), core-linear
sections φ̃ and core sections τ↑.  Brackets of pure generators follow the
three structural rules

    ⟦σν₁, σν₂⟧ = σ⟦ν₁,ν₂⟧ − R(ν₁,ν₂)~,   ⟦σν, τ↑⟧ = (Δ_ν τ)↑,   ⟦τ₁↑, τ₂↑⟧ = 0

and everything else follows from the two Leibniz rules with coefficients
that are fibrewise affine functions on E.

The engine is written against a small ``SplitStructure`` interface (side Q,
core Q*, second side B) so that a split Lie 2-algebroid can reuse it.  For
TE⊕T*E the side is TM⊕E*, the core E⊕T*M and B = E.

Anchor convention: Θ(σν) acts on linear functions by ℓ_η ↦ ℓ_{∇*_ν η},
where ∇_ν = pr_E∘Δ_ν∘ι_E and ∇* is its dual.  As a linear vector field on E
this has fibre matrix −C_ν, C_ν being the matrix of ∇_ν on the constant
frame.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import Bundle, BundleMap, Chart, Poly, Section, pair, random_poly, random_section, vf_apply
from .dorfman import (
    DorfmanConn,
    change_of_splitting,
    curvature_on_E,
    dull_bracket,
)
from .report import Report

Matrix = List[List[Poly]]


# --------------------------------------------------------------------------
# Fibre functions and linear vector fields on the second side B
# --------------------------------------------------------------------------

class FiberFunction:
    """ℓ_η + q*h with η ∈ Γ(B*) and h a base scalar."""

    __slots__ = ("lin", "base")

    def __init__(self, lin: Sequence[Poly], base: Poly):
        self.lin = tuple(lin)
        self.base = base

    @classmethod
    def basic(cls, s: int, h: Poly) -> "FiberFunction":
        return cls([h * 0] * s, h)

    @classmethod
    def linear(cls, eta: Sequence[Poly]) -> "FiberFunction":
        return cls(eta, eta[0] * 0)

    def is_basic(self) -> bool:
        return all(c.is_zero() for c in self.lin)

    def is_zero(self) -> bool:
        return self.is_basic() and self.base.is_zero()

    def __add__(self, other: "FiberFunction"):
        return FiberFunction([a + b for a, b in zip(self.lin, other.lin)], self.base + other.base)

    def __sub__(self, other: "FiberFunction"):
        return FiberFunction([a - b for a, b in zip(self.lin, other.lin)], self.base - other.base)

    def __neg__(self):
        return FiberFunction([-a for a in self.lin], -self.base)

    def __mul__(self, other):
        if isinstance(other, (Poly, int)):
            return FiberFunction([a * other for a in self.lin], self.base * other)
        if not isinstance(other, FiberFunction):
            return NotImplemented
        if self.is_basic():
            return other * self.base
        if other.is_basic():
            return self * other.base
        raise ValueError("product of two fibre-linear functions leaves the affine span")

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FiberFunction) and self.lin == other.lin and self.base == other.base

    def __hash__(self):
        return hash((self.lin, self.base))

    def __repr__(self):
        parts = []
        if not self.is_basic():
            parts.append("ℓ[" + ", ".join(str(c) for c in self.lin) + "]")
        if not self.base.is_zero() or not parts:
            parts.append(f"q*({self.base})")
        return " + ".join(parts)


class LinVectorFieldE:
    """X·∂x + (D p + c)·∂p on the total space of B."""

    __slots__ = ("X", "D", "c")

    def __init__(self, X: Sequence[Poly], D: Sequence[Sequence[Poly]], c: Sequence[Poly]):
        self.X = tuple(X)
        self.D = tuple(tuple(r) for r in D)
        self.c = tuple(c)

    @classmethod
    def zero(cls, chart: Chart, s: int) -> "LinVectorFieldE":
        z = chart.zero()
        return cls([z] * chart.dim, [[z] * s for _ in range(s)], [z] * s)

    def __call__(self, f: FiberFunction) -> FiberFunction:
        s = len(self.c)
        lin = []
        for a in range(s):
            acc = vf_apply(self.X, f.lin[a])
            for b in range(s):
                if self.D[b][a].terms and f.lin[b].terms:
                    acc = acc + self.D[b][a] * f.lin[b]
            lin.append(acc)
        base = vf_apply(self.X, f.base)
        for a in range(s):
            if f.lin[a].terms and self.c[a].terms:
                base = base + f.lin[a] * self.c[a]
        return FiberFunction(lin, base)

    def __add__(self, o: "LinVectorFieldE"):
        return LinVectorFieldE(
            [a + b for a, b in zip(self.X, o.X)],
            [[a + b for a, b in zip(r, q)] for r, q in zip(self.D, o.D)],
            [a + b for a, b in zip(self.c, o.c)],
        )

    def __sub__(self, o: "LinVectorFieldE"):
        return self + (-o)

    def __neg__(self):
        return LinVectorFieldE([-a for a in self.X], [[-a for a in r] for r in self.D], [-a for a in self.c])

    def scale(self, f: FiberFunction) -> "LinVectorFieldE":
        """f·V; a fibre-linear f is only allowed on a vertical constant field."""
        if f.is_basic():
            h = f.base
            return LinVectorFieldE([h * a for a in self.X], [[h * a for a in r] for r in self.D], [h * a for a in self.c])
        if any(not a.is_zero() for a in self.X) or any(not a.is_zero() for r in self.D for a in r):
            raise ValueError("fibre-linear multiple of a linear vector field")
        s = len(self.c)
        D = [[self.c[a] * f.lin[b] for b in range(s)] for a in range(s)]
        return LinVectorFieldE([f.base * a for a in self.X], D, [f.base * a for a in self.c])

    def bracket(self, o: "LinVectorFieldE") -> "LinVectorFieldE":
        s = len(self.c)
        m = len(self.X)
        X = [vf_apply(self.X, o.X[i]) - vf_apply(o.X, self.X[i]) for i in range(m)]
        D = []
        for a in range(s):
            row = []
            for b in range(s):
                v = vf_apply(self.X, o.D[a][b]) - vf_apply(o.X, self.D[a][b])
                for c in range(s):
                    v = v + o.D[a][c] * self.D[c][b] - self.D[a][c] * o.D[c][b]
                row.append(v)
            D.append(row)
        c = []
        for a in range(s):
            v = vf_apply(self.X, o.c[a]) - vf_apply(o.X, self.c[a])
            for b in range(s):
                v = v + o.D[a][b] * self.c[b] - self.D[a][b] * o.c[b]
            c.append(v)
        return LinVectorFieldE(X, D, c)

    def __eq__(self, other):
        return isinstance(other, LinVectorFieldE) and (self.X, self.D, self.c) == (other.X, other.D, other.c)

    def __hash__(self):
        return hash((self.X, self.D, self.c))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.X + self.c) and all(a.is_zero() for r in self.D for a in r)

    def __repr__(self):
        X = ", ".join(map(str, self.X))
        D = "; ".join(", ".join(map(str, r)) for r in self.D)
        c = ", ".join(map(str, self.c))
        return f"LinVF(X=[{X}], D=[{D}], c=[{c}])"


# --------------------------------------------------------------------------
# Split structure interface
# --------------------------------------------------------------------------

class SplitStructure:
    """Data of a split metric double vector bundle with side Q, core Q* and side B.

    Subclasses provide the structure maps used by the generator calculus.
    """

    chart: Chart
    Q: Bundle
    C: Bundle
    B: Bundle
    drop_curvature: bool = False

    @property
    def m(self) -> int:
        return self.chart.dim

    @property
    def s(self) -> int:
        return self.B.rank

    def anchor_Q(self, q: Section) -> List[Poly]:
        raise NotImplementedError

    def core_anchor(self, tau: Section) -> List[Poly]:
        """∂_B τ ∈ Γ(B)."""
        raise NotImplementedError

    def coanchor(self, df: Sequence[Poly]) -> Section:
        """ρ_Q^t applied to a 1-form, as a section of the core."""
        raise NotImplementedError

    def dorfman(self, q: Section, tau: Section) -> Section:
        raise NotImplementedError

    def dull(self, q1: Section, q2: Section) -> Section:
        raise NotImplementedError

    def conn_B(self, q: Section) -> Matrix:
        """Matrix of the Q-connection on B in the constant frame (columns ∇_q b_b)."""
        raise NotImplementedError

    def curv(self, q1: Section, q2: Section) -> BundleMap:
        """The core-linear term of ⟦σq₁, σq₂⟧, a map B → Q*."""
        raise NotImplementedError

    def lift_pair(self, q1: Section, q2: Section) -> List[Poly]:
        """η with ⟨σq₁, σq₂⟩ = ℓ_η."""
        raise NotImplementedError

    def dl_frame(self, a: int) -> Tuple[Section, BundleMap]:
        """(q, φ) with Θ*dℓ_{β^a} = σ(q) + φ~ for the constant frame β^a of B*."""
        raise NotImplementedError

    def pair(self, q: Section, tau: Section) -> Poly:
        return pair(q, tau)


class GenTan(SplitStructure):
    """TE⊕T*E → E split by a Dorfman connection."""

    def __init__(self, D: DorfmanConn, drop_curvature: bool = False):
        self.D = D
        self.chart = D.chart
        self.Q = D.side
        self.C = D.core
        self.B = D.E
        self.drop_curvature = drop_curvature
        self._dl: Dict[int, Tuple[Section, BundleMap]] = {}

    def anchor_Q(self, q):
        return list(q.comps[: self.m])

    def core_anchor(self, tau):
        return list(tau.comps[: self.D.k])

    def coanchor(self, df):
        z = self.chart.zero()
        return Section(self.C, [z] * self.D.k + list(df))

    def dorfman(self, q, tau):
        return self.D(q, tau)

    def dull(self, q1, q2):
        return dull_bracket(self.D, q1, q2)

    def conn_B(self, q):
        return self.D.conn_matrix(q)

    def curv(self, q1, q2):
        if self.drop_curvature:
            return BundleMap.zero(self.B, self.C)
        return curvature_on_E(self.D, q1, q2)

    def lift_pair(self, q1, q2):
        s = self.dull(q1, q2) + self.dull(q2, q1)
        return list(s.comps[self.m:])

    def dl_frame(self, a):
        if a not in self._dl:
            k = self.D.k
            z, o = self.chart.zero(), self.chart.one()
            q = Section(self.Q, [z] * self.m + [o if b == a else z for b in range(k)])
            phi = self.D.on_e(q)
            self._dl[a] = (q, phi)
        return self._dl[a]


# --------------------------------------------------------------------------
# Sections
# --------------------------------------------------------------------------

class GTSection:
    """σ(q) + φ̃ + τ↑ for a split structure."""

    __slots__ = ("S", "nu", "phi", "tau")

    def __init__(self, S: SplitStructure, nu: Optional[Section] = None, phi: Optional[BundleMap] = None, tau: Optional[Section] = None):
        self.S = S
        self.nu = nu if nu is not None else S.Q.zero()
        self.phi = phi if phi is not None else BundleMap.zero(S.B, S.C)
        self.tau = tau if tau is not None else S.C.zero()

    @classmethod
    def lift(cls, S, nu: Section) -> "GTSection":
        return cls(S, nu=nu)

    @classmethod
    def core(cls, S, tau: Section) -> "GTSection":
        return cls(S, tau=tau)

    @classmethod
    def corelin(cls, S, phi: BundleMap) -> "GTSection":
        return cls(S, phi=phi)

    @classmethod
    def zero(cls, S) -> "GTSection":
        return cls(S)

    def __add__(self, o: "GTSection"):
        return GTSection(self.S, self.nu + o.nu, self.phi + o.phi, self.tau + o.tau)

    def __sub__(self, o: "GTSection"):
        return GTSection(self.S, self.nu - o.nu, self.phi - o.phi, self.tau - o.tau)

    def __neg__(self):
        return GTSection(self.S, -self.nu, -self.phi, -self.tau)

    def scale(self, f: FiberFunction) -> "GTSection":
        """f·s; fibre-linear f is allowed only on core sections."""
        out = GTSection(self.S, self.nu.scale(f.base), self.phi.scale(f.base), self.tau.scale(f.base))
        if not f.is_basic():
            if not self.nu.is_zero() or not self.phi.is_zero():
                raise ValueError("fibre-linear multiple of a linear section leaves the span")
            out = out + GTSection.corelin(self.S, outer(self.S, self.tau, f.lin))
        return out

    def is_zero(self) -> bool:
        return self.nu.is_zero() and self.phi.is_zero() and self.tau.is_zero()

    def __eq__(self, o):
        if not isinstance(o, GTSection):
            return NotImplemented
        return self.nu == o.nu and self.phi == o.phi and self.tau == o.tau

    def __hash__(self):
        return hash((self.nu, self.phi, self.tau))

    def __repr__(self):
        parts = []
        if not self.nu.is_zero():
            parts.append(f"σ[{', '.join(map(str, self.nu.comps))}]")
        if not self.phi.is_zero():
            parts.append(f"~[{'; '.join(', '.join(map(str, r)) for r in self.phi.rows)}]")
        if not self.tau.is_zero():
            parts.append(f"↑[{', '.join(map(str, self.tau.comps))}]")
        return " + ".join(parts) if parts else "0"


def outer(S: SplitStructure, tau: Section, eta: Sequence[Poly]) -> BundleMap:
    """The map b ↦ ⟨η, b⟩ τ, so that ℓ_η·τ↑ = (τ⊗η)~."""
    return BundleMap(S.B, S.C, [[t * e for e in eta] for t in tau.comps])


# --------------------------------------------------------------------------
# Pairing, anchor, bracket
# --------------------------------------------------------------------------

def gt_pair(s1: GTSection, s2: GTSection) -> FiberFunction:
    S = s1.S
    sdim = S.s
    z = S.chart.zero()
    lin = [z] * sdim
    base = z
    if not s1.nu.is_zero() and not s2.nu.is_zero():
        lin = [a + b for a, b in zip(lin, S.lift_pair(s1.nu, s2.nu))]
    if not s1.nu.is_zero() and not s2.tau.is_zero():
        base = base + S.pair(s1.nu, s2.tau)
    if not s2.nu.is_zero() and not s1.tau.is_zero():
        base = base + S.pair(s2.nu, s1.tau)
    if not s1.phi.is_zero() and not s2.nu.is_zero():
        lin = [a + b for a, b in zip(lin, s1.phi.T(s2.nu).comps)]
    if not s2.phi.is_zero() and not s1.nu.is_zero():
        lin = [a + b for a, b in zip(lin, s2.phi.T(s1.nu).comps)]
    return FiberFunction(lin, base)


def gt_anchor(s: GTSection) -> LinVectorFieldE:
    S = s.S
    sdim = S.s
    z = S.chart.zero()
    X = S.anchor_Q(s.nu)
    Cq = S.conn_B(s.nu)
    D = [[-Cq[a][b] for b in range(sdim)] for a in range(sdim)]
    if not s.phi.is_zero():
        for b in range(sdim):
            col = S.core_anchor(s.phi.column(b))
            for a in range(sdim):
                D[a][b] = D[a][b] + col[a]
    c = S.core_anchor(s.tau) if not s.tau.is_zero() else [z] * sdim
    return LinVectorFieldE(X, D, c)


def theta_star_d(S: SplitStructure, f: FiberFunction) -> GTSection:
    """Θ*d f for a fibre-affine f."""
    out = GTSection.core(S, S.coanchor([f.base.diff(i) for i in range(S.m)]))
    for a, eta in enumerate(f.lin):
        if eta.is_zero():
            continue
        q, phi = S.dl_frame(a)
        out = out + GTSection(S, q.scale(eta), phi.scale(eta))
        # ℓ_{β^a} (ρ^t dη_a)↑
        dcore = S.coanchor([eta.diff(i) for i in range(S.m)])
        e = [S.chart.one() if b == a else S.chart.zero() for b in range(S.s)]
        out = out + GTSection.corelin(S, outer(S, dcore, e))
    return out


# expanded form: σ-part q plus a list of (coefficient, core section)
def _expand(s: GTSection) -> Tuple[Section, List[Tuple[FiberFunction, Section]]]:
    S = s.S
    terms: List[Tuple[FiberFunction, Section]] = []
    one = FiberFunction.basic(S.s, S.chart.one())
    if not s.tau.is_zero():
        terms.append((one, s.tau))
    if not s.phi.is_zero():
        for a in range(S.s):
            col = s.phi.column(a)
            if not col.is_zero():
                e = [S.chart.one() if b == a else S.chart.zero() for b in range(S.s)]
                terms.append((FiberFunction(e, S.chart.zero()), col))
    return s.nu, terms


def _sigma_sigma(S, q1, q2) -> GTSection:
    return GTSection(S, nu=S.dull(q1, q2), phi=-S.curv(q1, q2))


def _sigma_core(S, q, tau) -> GTSection:
    return GTSection.core(S, S.dorfman(q, tau))


def _core_sigma(S, tau, q) -> GTSection:
    d = S.pair(q, tau)
    return GTSection.core(S, S.coanchor([d.diff(i) for i in range(S.m)]) - S.dorfman(q, tau))


def gt_bracket(s1: GTSection, s2: GTSection) -> GTSection:
    S = s1.S
    q1, t1 = _expand(s1)
    q2, t2 = _expand(s2)
    out = GTSection.zero(S)
    lift1 = GTSection.lift(S, q1)
    lift2 = GTSection.lift(S, q2)
    if not q1.is_zero() and not q2.is_zero():
        out = out + _sigma_sigma(S, q1, q2)
    # ⟦σq₁, f τ↑⟧ = f (Δ_{q₁}τ)↑ + (Θ(σq₁) f) τ↑
    if not q1.is_zero():
        V = gt_anchor(lift1)
        for f, tau in t2:
            out = out + _sigma_core(S, q1, tau).scale(f) + GTSection.core(S, tau).scale(V(f))
    # ⟦f τ↑, σq₂⟧ = f ⟦τ↑,σq₂⟧ − (Θ(σq₂) f) τ↑ + ⟨τ↑, σq₂⟩ Θ*df
    if not q2.is_zero():
        V = gt_anchor(lift2)
        for f, tau in t1:
            out = out + _core_sigma(S, tau, q2).scale(f) - GTSection.core(S, tau).scale(V(f))
            if not f.is_basic():
                p = S.pair(q2, tau)
                if not p.is_zero():
                    out = out + theta_star_d(S, FiberFunction(f.lin, S.chart.zero())).scale(FiberFunction.basic(S.s, p))
    # ⟦f τ₁↑, g τ₂↑⟧ = f (Θ(τ₁↑) g) τ₂↑ − g (Θ(τ₂↑) f) τ₁↑
    for f, ta in t1:
        Va = gt_anchor(GTSection.core(S, ta))
        for g, tb in t2:
            Vb = gt_anchor(GTSection.core(S, tb))
            out = out + GTSection.core(S, tb).scale(f * Va(g)) - GTSection.core(S, ta).scale(g * Vb(f))
    return out


def rebase(s: GTSection, S2: GenTan) -> GTSection:
    """Re-express s in the splitting of S2: σ¹(ν) = σ²(ν) − Φ₁₂(ν)~."""
    S1 = s.S
    if S1 is S2:
        return s
    ch = change_of_splitting(S1.D, S2.D)
    return GTSection(S2, s.nu, s.phi - ch.phi(s.nu), s.tau)


def gt_nijenhuis(J: Callable[[GTSection], GTSection], s1: GTSection, s2: GTSection) -> GTSection:
    b = gt_bracket
    return b(s1, s2) - b(J(s1), J(s2)) + J(b(J(s1), s2) + b(s1, J(s2)))


# --------------------------------------------------------------------------
# Axiom suite
# --------------------------------------------------------------------------

SHAPES = ("lift", "corelin", "core")


def random_generator(rng: random.Random, S: SplitStructure, shape: str, degree: int = 1) -> GTSection:
    if shape == "lift":
        return GTSection.lift(S, random_section(rng, S.Q, degree))
    if shape == "core":
        return GTSection.core(S, random_section(rng, S.C, degree))
    rows = [[random_poly(rng, S.m, degree) for _ in range(S.s)] for _ in range(S.C.rank)]
    return GTSection.corelin(S, BundleMap(S.B, S.C, rows))


def _describe(x) -> str:
    return repr(x)


def courant_axiom_suite(S: SplitStructure, seed: int = 0, degree: int = 1, shapes: Sequence[str] = SHAPES, label: str = "") -> Report:
    """Check the Courant axioms on every ordered triple of generator shapes."""
    rng = random.Random(seed)
    rep = Report(label or "courant-axioms")
    samples = {sh: [random_generator(rng, S, sh, degree) for _ in range(3)] for sh in shapes}
    for a in shapes:
        for b in shapes:
            s1, s2 = samples[a][0], samples[b][1]
            p = gt_pair(s1, s2)

            def sym():
                lhs = gt_bracket(s1, s2) + gt_bracket(s2, s1)
                rhs = theta_star_d(S, p)
                return None if lhs == rhs else _describe(lhs - rhs)

            def anchor():
                lhs = gt_anchor(gt_bracket(s1, s2))
                rhs = gt_anchor(s1).bracket(gt_anchor(s2))
                return None if lhs == rhs else _describe(lhs - rhs)

            rep.run(f"symmetrization[{a},{b}]", "Courant axiom: symmetric part of the bracket", sym)
            rep.run(f"anchor[{a},{b}]", "Courant property: anchor is a bracket morphism", anchor)
            for c in shapes:
                s3 = samples[c][2]

                def jac():
                    lhs = gt_bracket(s1, gt_bracket(s2, s3))
                    rhs = gt_bracket(gt_bracket(s1, s2), s3) + gt_bracket(s2, gt_bracket(s1, s3))
                    return None if lhs == rhs else _describe(lhs - rhs)

                def pairing():
                    lhs = gt_anchor(s1)(gt_pair(s2, s3))
                    rhs = gt_pair(gt_bracket(s1, s2), s3) + gt_pair(s2, gt_bracket(s1, s3))
                    return None if lhs == rhs else _describe(lhs - rhs)

                rep.run(f"jacobi[{a},{b},{c}]", "Courant axiom: Leibniz-Jacobi identity", jac)
                rep.run(f"pairing[{a},{b},{c}]", "Courant axiom: anchor derivation of the pairing", pairing)
    return rep
