"""Linear generalised complex structures on TE⊕T*E.

A linear generalised almost complex structure 𝒥 is stored as (Δ, j, Φ):

    𝒥 σ(ν) = σ(jν) + Φ(ν)~,    𝒥 τ↑ = (j_C τ)↑,    𝒥 φ̃ = (j_C∘φ)~

with j_C = −j^t.  Φ always refers to the explicit reference Δ; moving to
another splitting goes through ``rebase``.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import I, Bundle, BundleMap, Chart, Poly, Section, pair, random_poly, vf_apply
from .dorfman import (
    DorfmanConn,
    HomForm,
    LinConn,
    apply_change,
    change_of_splitting,
    dull_bracket,
    is_skew,
    jacobiator,
    std_dorfman,
)
from .gentan import GenTan, GTSection, gt_nijenhuis, gt_pair, rebase
from .report import Report

HALF = mpq(1, 2)


def _j_of(chart: Chart, bundle: Bundle, rows) -> BundleMap:
    return rows if isinstance(rows, BundleMap) else BundleMap(bundle, bundle, rows)


class LinGCS:
    def __init__(self, D: DorfmanConn, j, Phi: Optional[HomForm] = None):
        self.D = D
        self.chart = D.chart
        self.j = _j_of(D.chart, D.side, j)
        if self.j.source.summands != D.side.summands or self.j.target.summands != D.side.summands:
            raise ValueError("side morphism must be an endomorphism of TM⊕E*")
        self.jC = -self.j.T
        self.Phi = Phi if Phi is not None else HomForm(D.chart, D.k)
        self.S = GenTan(D)

    @property
    def m(self):
        return self.D.m

    @property
    def k(self):
        return self.D.k

    def psi(self, nu1: Section, nu2: Section) -> Section:
        return self.Phi.psi(nu1, nu2)

    def act(self, s: GTSection) -> GTSection:
        if s.S is not self.S:
            s = rebase(s, self.S)
        return GTSection(self.S, self.j(s.nu), self.Phi(s.nu) + self.jC @ s.phi, self.jC(s.tau))

    __call__ = act

    def generators(self) -> List[GTSection]:
        return [GTSection.lift(self.S, b) for b in self.D.side.frame()] + [
            GTSection.core(self.S, c) for c in self.D.core.frame()
        ]

    def __repr__(self):
        return f"LinGCS(m={self.m}, k={self.k})"


def rebase_gcs(G: LinGCS, D2: DorfmanConn) -> LinGCS:
    """Express 𝒥 relative to D2: Φ₂(ν) = Φ(ν) + j_C Φ₁₂(ν) − Φ₁₂(jν)."""
    ch = change_of_splitting(G.D, D2)
    Phi2 = G.Phi + ch.post(G.jC) - ch.pre(G.j)
    return LinGCS(D2, G.j, Phi2)


def same_action(G1: LinGCS, G2: LinGCS) -> Optional[str]:
    """None if the two structures act identically on generators, else a witness."""
    for s in G1.generators():
        a = G1(s)
        b = rebase(G2(rebase(s, G2.S)), G1.S)
        if a != b:
            return f"{s}: {a} vs {b}"
    return None


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------

def _is_identity(M: BundleMap) -> bool:
    return M == BundleMap.identity(M.source)


def gcs_from_complex(J_M, j_E, conn: LinConn, psi: Optional[Sequence[Sequence[Sequence[Poly]]]] = None) -> LinGCS:
    """Complex type: j = diag(J_M, −j_E^t) with Φ built from ψ relative to std(∇).

    ``psi[i]`` is the k×k matrix of ψ(∂_i).  The core tensor is
    Φ(X,ε) = (ψ(X), e ↦ −⟨ε, ψ(·)e⟩).
    """
    chart = conn.chart
    m, k = chart.dim, conn.rank
    TM = Bundle.tangent(chart)
    E = Bundle.simple(chart, "E", k)
    JM = J_M if isinstance(J_M, BundleMap) else BundleMap(TM, TM, J_M)
    jE = j_E if isinstance(j_E, BundleMap) else BundleMap(E, E, j_E)
    if not (JM @ JM == -BundleMap.identity(TM)):
        raise ValueError("J_M does not square to −1")
    if not (jE @ jE == -BundleMap.identity(E)):
        raise ValueError("j_E does not square to −1")
    D = std_dorfman(conn)
    z = chart.zero()
    j = BundleMap.blocks(D.side, D.side, [[JM, None], [None, -(jE.T)]])
    if psi is None:
        return LinGCS(D, j)
    n = m + k
    data = []
    for s in range(n):
        row = []
        for a in range(k):
            vec = [z] * n
            if s < m:
                for b in range(k):
                    vec[b] = psi[s][b][a]
            else:
                c = s - m
                for i in range(m):
                    vec[k + i] = -psi[i][c][a]
            row.append(vec)
        data.append(row)
    return LinGCS(D, j, HomForm(chart, k, data))


def gcs_from_symplectic(tau, tau_inv, D: Optional[DorfmanConn] = None, chart: Optional[Chart] = None) -> LinGCS:
    """j(X, ε) = (−τ⁻¹ε, τX) for an isomorphism τ: TM → E*, Φ = 0."""
    if D is None:
        if chart is None:
            raise ValueError("need a chart or a reference Dorfman connection")
        D = std_dorfman(LinConn.flat(chart, chart.dim))
    chart = D.chart
    TM = Bundle.tangent(chart)
    Es = Bundle.simple(chart, "E*", D.k)
    t = tau if isinstance(tau, BundleMap) else BundleMap(TM, Es, tau)
    ti = tau_inv if isinstance(tau_inv, BundleMap) else BundleMap(Es, TM, tau_inv)
    if not (_is_identity(t @ ti) and _is_identity(ti @ t)):
        raise ValueError("τ and τ⁻¹ are not inverse to each other")
    j = BundleMap.blocks(D.side, D.side, [[None, -ti], [t, None]])
    return LinGCS(D, j)


# --------------------------------------------------------------------------
# Almost structure
# --------------------------------------------------------------------------

def gacs_check(G: LinGCS) -> Report:
    rep = Report("gacs")
    side = G.D.side
    fr = side.frame()

    def squares():
        d = G.j @ G.j + BundleMap.identity(side)
        return None if d.is_zero() else f"j² + 1 = {d}"

    def transpose():
        d = G.j + G.jC.T
        return None if d.is_zero() else f"j + j_C^t = {d}"

    def skew():
        w = G.Phi.skew_witness()
        return None if w is None else f"Ψ(b{w[0]},b{w[1]}) + Ψ(b{w[1]},b{w[0]}) = {w[2]}"

    def jinv():
        for p, q in itertools.product(range(len(fr)), repeat=2):
            d = G.psi(fr[p], fr[q]) + G.psi(G.j(fr[p]), G.j(fr[q]))
            if not d.is_zero():
                return f"Ψ + j*Ψ on (b{p},b{q}) = {d}"
        return None

    def square_generators():
        for s in G.generators():
            d = G(G(s)) + s
            if not d.is_zero():
                return f"𝒥²({s}) + id = {d}"
        return None

    def orthogonal():
        gens = G.generators()
        for s1, s2 in itertools.product(gens, repeat=2):
            d = gt_pair(G(s1), G(s2)) - gt_pair(s1, s2)
            if not d.is_zero():
                return f"⟨𝒥s₁,𝒥s₂⟩ − ⟨s₁,s₂⟩ on ({s1}, {s2}) = {d}"
        return None

    rep.run("gacs.j-squared", "side morphism squares to −1", squares)
    rep.run("gacs.j-transpose", "core morphism is minus the dual of the side morphism", transpose)
    rep.run("gacs.psi-skew", "Ψ is skew-symmetric", skew)
    rep.run("gacs.psi-j", "Ψ = −j*Ψ", jinv)
    rep.run("gacs.direct-square", "𝒥² = −1 on generators", square_generators)
    rep.run("gacs.direct-orthogonal", "𝒥 is orthogonal on generators", orthogonal)
    return rep


# --------------------------------------------------------------------------
# Adapted splittings and j-equivalence
# --------------------------------------------------------------------------

def adapting_change(G: LinGCS) -> HomForm:
    """Φ₁₂ with Ψ₁₂(ν₁,ν₂) = −½ Ψ(ν₁, jν₂)."""
    fr = G.D.side.frame()
    psi = [[[-HALF * c for c in G.psi(p, G.j(q)).comps] for q in fr] for p in fr]
    return HomForm.from_psi(G.chart, G.k, psi)


def adapt_dorfman(G: LinGCS) -> DorfmanConn:
    if not gacs_check(G).ok:
        raise ValueError("adapt_dorfman needs a generalised almost complex structure")
    if not is_skew(G.D):
        raise ValueError("adapt_dorfman needs a skew reference Dorfman connection")
    if G.Phi.is_zero():
        return G.D
    return apply_change(G.D, adapting_change(G))


def adapted(G: LinGCS) -> LinGCS:
    return rebase_gcs(G, adapt_dorfman(G))


def j_invariance_witness(form: HomForm, j: BundleMap):
    fr = form.side.frame()
    for p, q in itertools.product(range(len(fr)), repeat=2):
        d = form.psi(fr[p], fr[q]) - form.psi(j(fr[p]), j(fr[q]))
        if not d.is_zero():
            return p, q, d
    return None


def j_equivalent(D1: DorfmanConn, D2: DorfmanConn, j: BundleMap) -> bool:
    return j_invariance_witness(change_of_splitting(D1, D2), j) is None


def j_invariant_seed(rng: random.Random, chart: Chart, k: int, j: BundleMap, degree: int = 1) -> HomForm:
    """A skew j-invariant change form: symmetrise a random skew form over {1, j}."""
    from .dorfman import random_psi

    base = HomForm.from_psi(chart, k, random_psi(rng, chart, k, degree, skew=True))
    fr = base.side.frame()
    psi = [[list((base.psi(p, q) + base.psi(j(p), j(q))).comps) for q in fr] for p in fr]
    return HomForm.from_psi(chart, k, psi)


# --------------------------------------------------------------------------
# Integrability
# --------------------------------------------------------------------------

def nijenhuis_j(D: DorfmanConn, j: BundleMap, nu1: Section, nu2: Section) -> Section:
    b = lambda x, y: dull_bracket(D, x, y)
    return b(nu1, nu2) - b(j(nu1), j(nu2)) + j(b(j(nu1), nu2) + b(nu1, j(nu2)))


def jacobi_condition(D: DorfmanConn, j: BundleMap, n1: Section, n2: Section, n3: Section) -> Section:
    J = lambda a, b, c: jacobiator(D, a, b, c)
    return J(j(n1), j(n2), n3) + J(j(n1), n2, j(n3)) + J(n1, j(n2), j(n3)) - J(n1, n2, n3)


def condition_route(G: LinGCS) -> Tuple[bool, Optional[str], List[Tuple[int, int]]]:
    """Adapt, then check N_j ≡ 0 and the Jacobiator condition on frames."""
    A = adapted(G)
    fr = A.D.side.frame()
    n = len(fr)
    bad = []
    witness = None
    for p in range(n):
        for q in range(p + 1, n):
            N = nijenhuis_j(A.D, A.j, fr[p], fr[q])
            if not N.is_zero():
                bad.append((p, q))
                witness = witness or f"N_j(b{p},b{q}) = {N}"
    if bad:
        return False, witness, bad
    for p, q, r in itertools.combinations(range(n), 3):
        c = jacobi_condition(A.D, A.j, fr[p], fr[q], fr[r])
        if not c.is_zero():
            return False, f"Jacobiator condition on (b{p},b{q},b{r}) = {c}", []
    return True, None, []


def direct_route(G: LinGCS) -> Tuple[bool, Optional[str], dict]:
    """N_𝒥 on all pairs of frame generators."""
    gens = G.generators()
    r = G.D.side.rank
    fails = {}
    witness = None
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            N = gt_nijenhuis(G, gens[a], gens[b])
            if not N.is_zero():
                fails[(a, b)] = N
                if witness is None:
                    kind = lambda x: "σ" if x < r else "↑"
                    witness = f"N_𝒥({kind(a)}{a % r}, {kind(b)}{b % r}) = {N}"
    return not fails, witness, fails


def is_integrable(G: LinGCS) -> Report:
    rep = Report("integrability")
    if not gacs_check(G).ok:
        rep.add("integrable.precondition", "generalised almost complex structure", False, "gacs_check fails")
        return rep
    c_ok, c_w, c_bad = condition_route(G)
    d_ok, d_w, d_fails = direct_route(G)
    rep.add("integrable.condition-route", "N_j and the Jacobiator condition for the adapted dull bracket", c_ok, c_w)
    rep.add("integrable.direct-route", "Nijenhuis tensor of 𝒥 on generators", d_ok, d_w)
    rep.add("integrable.routes-agree", "both characterisations of integrability agree", c_ok == d_ok,
            f"condition route {c_ok}, direct route {d_ok}")

    def consistent():
        # the σ-part of N_𝒥(σb_p, σb_q) is N_j(b_p, b_q)
        A = adapted(G)
        fr = A.D.side.frame()
        for (p, q) in c_bad:
            N = d_fails.get((p, q))
            nj = nijenhuis_j(A.D, A.j, fr[p], fr[q])
            if N is None or N.nu != nj:
                return f"witness mismatch on (b{p},b{q})"
        if not c_ok and not d_ok and not c_bad:
            r = len(fr)
            if not any(a < r and b < r for a, b in d_fails):
                return "Jacobi-type failure not visible on lift pairs"
        return None

    rep.run("integrable.witness-consistency", "failing witnesses of both routes correspond", consistent)
    return rep


# --------------------------------------------------------------------------
# The bracket 𝔸 and the complex anchor
# --------------------------------------------------------------------------

class ABracket:
    def __init__(self, D: DorfmanConn, j: BundleMap):
        self.D = D
        self.j = j
        self.m = D.m

    def __call__(self, nu1: Section, nu2: Section) -> Section:
        b = dull_bracket(self.D, nu1, nu2) - dull_bracket(self.D, self.j(nu1), self.j(nu2))
        return b.scale(HALF)

    def anchor(self, nu: Section) -> List[Poly]:
        """ρ_j(ν) = ½(pr_TM ν − i pr_TM jν), a complex vector field."""
        jn = self.j(nu)
        return [HALF * (a - I * b) for a, b in zip(nu.comps[: self.m], jn.comps[: self.m])]

    def cscale(self, f: Poly, nu: Section) -> Section:
        """Complex scalar action with i acting as j."""
        return nu.scale(f.re()) + self.j(nu).scale(f.im())


def bracket_A(G: LinGCS, adapt: bool = True) -> ABracket:
    D = adapt_dorfman(G) if adapt else G.D
    return ABracket(D, G.j)


def _cbracket(X: Sequence[Poly], Y: Sequence[Poly]) -> List[Poly]:
    return [vf_apply(X, Y[i]) - vf_apply(Y, X[i]) for i in range(len(X))]


def leibniz_A_check(G: LinGCS, seed: int = 0, degree: int = 1, integrable: Optional[bool] = None) -> Report:
    """Complex Lie algebroid axioms of (𝔸, ρ_j) on frames and random data."""
    from .algebra import random_section

    rep = Report("abracket")
    A = bracket_A(G)
    rng = random.Random(seed)
    side = G.D.side
    fr = side.frame()
    n = len(fr)
    if integrable is None:
        integrable = is_integrable(G).ok
    samples = [random_section(rng, side, degree) for _ in range(3)]
    fs = [random_poly(rng, G.m, degree) for _ in range(2)]
    fc = random_poly(rng, G.m, degree) + I * random_poly(rng, G.m, degree)

    def skew():
        for p in range(n):
            for q in range(p, n):
                d = A(fr[p], fr[q]) + A(fr[q], fr[p])
                if not d.is_zero():
                    return f"𝔸(b{p},b{q}) + 𝔸(b{q},b{p}) = {d}"
        d = A(samples[0], samples[0])
        return None if d.is_zero() else f"𝔸(ν,ν) = {d}"

    def clinear():
        for p, q in itertools.product(range(n), repeat=2):
            d = A(fr[p], G.j(fr[q])) - G.j(A(fr[p], fr[q]))
            if not d.is_zero():
                return f"𝔸(b{p}, j b{q}) − j𝔸(b{p},b{q}) = {d}"
        return None

    def jacobi():
        trip = list(itertools.combinations(fr, 3)) + [tuple(samples)]
        for a, b, c in trip:
            d = A(A(a, b), c) + A(A(b, c), a) + A(A(c, a), b)
            if not d.is_zero():
                return f"Jacobiator of 𝔸 = {d}"
        return None

    def leibniz():
        n1, n2 = samples[0], samples[1]
        for f in fs + [fc]:
            lhs = A(n1, A.cscale(f, n2))
            rho_f = sum((r * f.diff(i) for i, r in enumerate(A.anchor(n1))), G.chart.zero())
            rhs = A.cscale(f, A(n1, n2)) + A.cscale(rho_f, n2)
            if lhs != rhs:
                return f"Leibniz defect {lhs - rhs}"
        return None

    def anchor_morphism():
        for a, b in list(itertools.combinations(fr, 2)) + [(samples[0], samples[1])]:
            lhs = A.anchor(A(a, b))
            rhs = _cbracket(A.anchor(a), A.anchor(b))
            if lhs != rhs:
                return f"ρ_j𝔸 − [ρ_j,ρ_j] = {[x - y for x, y in zip(lhs, rhs)]}"
        return None

    rep.run("A.skew", "𝔸 is skew-symmetric", skew)
    rep.run("A.leibniz", "Leibniz rule of 𝔸 with the complex anchor", leibniz)
    if integrable:
        rep.run("A.complex-linear", "𝔸(ν₁, jν₂) = j𝔸(ν₁,ν₂)", clinear)
        rep.run("A.jacobi", "Jacobi identity of 𝔸", jacobi)
        rep.run("A.anchor-morphism", "complex anchor preserves brackets", anchor_morphism)
    else:
        rep.skip("A.complex-linear", "𝔸(ν₁, jν₂) = j𝔸(ν₁,ν₂)", "structure not integrable")
        rep.skip("A.jacobi", "Jacobi identity of 𝔸", "structure not integrable")
        rep.skip("A.anchor-morphism", "complex anchor preserves brackets", "structure not integrable")
    return rep


def symplectic_identification(G: LinGCS, tau_inv: BundleMap, nu: Section) -> List[Poly]:
    """(X, τY) ↦ X + iY."""
    m = G.m
    Y = tau_inv(Section(tau_inv.source, nu.comps[m:])).comps
    return [x + I * y for x, y in zip(nu.comps[:m], Y)]


def symplectic_bracket_check(G: LinGCS, tau_inv: BundleMap, seed: int = 0) -> Optional[str]:
    """𝔸 = ½[·,·]_ℂ under the τ-identification; None on success."""
    from .algebra import random_section

    A = bracket_A(G)
    rng = random.Random(seed)
    pairs = list(itertools.combinations(G.D.side.frame(), 2))
    pairs += [(random_section(rng, G.D.side, 2), random_section(rng, G.D.side, 2)) for _ in range(3)]
    for a, b in pairs:
        lhs = symplectic_identification(G, tau_inv, A(a, b))
        Za = symplectic_identification(G, tau_inv, a)
        Zb = symplectic_identification(G, tau_inv, b)
        rhs = [HALF * c for c in _cbracket(Za, Zb)]
        if lhs != rhs:
            return f"𝔸 − ½[·,·]_ℂ = {[x - y for x, y in zip(lhs, rhs)]}"
        anc = A.anchor(a)
        if anc != [HALF * z for z in Za]:
            return "complex anchor is not ½ of the identification"
    return None


# --------------------------------------------------------------------------
# Quasi-real complex Lie algebroids
# --------------------------------------------------------------------------

class QuasiRealError(ValueError):
    pass


def quasi_real_roundtrip(j: BundleMap, D: DorfmanConn, anchor: Optional[Callable[[Section], List[Poly]]] = None) -> LinGCS:
    """Rebuild 𝒥 from j and a dull bracket realising 𝔸.

    The realising conditions are [ν₁,ν₂] = ½(⟦ν₁,ν₂⟧ − ⟦jν₁,jν₂⟧) and
    j[ν₁,ν₂] = ½(⟦jν₁,ν₂⟧ + ⟦ν₁,jν₂⟧), with anchor ½(pr ν − i pr jν).
    """
    A = ABracket(D, j)
    fr = D.side.frame()
    for b in fr:
        want = A.anchor(b)
        if anchor is not None and anchor(b) != want:
            raise QuasiRealError(f"anchor is not of the form ½(pr ν − i pr jν) on {b}")
    if not is_skew(D):
        raise QuasiRealError("realising dull bracket must be skew-symmetric")
    for p, q in itertools.product(range(len(fr)), repeat=2):
        a = A(fr[p], fr[q])
        other = (dull_bracket(D, j(fr[p]), fr[q]) + dull_bracket(D, fr[p], j(fr[q]))).scale(HALF)
        if j(a) != other:
            raise QuasiRealError(f"bracket does not realise 𝔸 on (b{p},b{q})")
    return LinGCS(D, j)


# --------------------------------------------------------------------------
# Eigenbundles
# --------------------------------------------------------------------------

class Eigenframes:
    def __init__(self, G: LinGCS):
        self.G = G
        side, core = G.D.side, G.D.core
        self.U = {s: [self.proj_U(b, s) for b in side.frame()] for s in (1, -1)}
        self.K = {s: [self.proj_K(c, s) for c in core.frame()] for s in (1, -1)}

    def proj_U(self, nu: Section, sign: int) -> Section:
        """½(ν ∓ i jν), the ±i eigen-part."""
        return (nu - self.G.j(nu).scale(I * sign)).scale(HALF)

    def proj_K(self, tau: Section, sign: int) -> Section:
        return (tau - self.G.jC(tau).scale(I * sign)).scale(HALF)


def eigenframes(G: LinGCS) -> Eigenframes:
    return Eigenframes(G)


def eigen_check(G: LinGCS, seed: int = 0, integrable: Optional[bool] = None) -> Report:
    from .algebra import random_section

    rep = Report("eigen")
    ef = eigenframes(G)
    A = bracket_A(G)
    D = A.D
    rng = random.Random(seed)
    side = G.D.side
    if integrable is None:
        integrable = is_integrable(G).ok

    for sign, name in ((1, "+"), (-1, "-")):
        def annihilator(sign=sign):
            for u in ef.U[sign]:
                for k in ef.K[sign]:
                    v = pair(u, k)
                    if not v.is_zero():
                        return f"⟨u,k⟩ = {v}"
            return None

        def eigen(sign=sign):
            for u in ef.U[sign]:
                if G.j(u) != u.scale(I * sign):
                    return f"j u ≠ ±i u for {u}"
            for k in ef.K[sign]:
                if G.jC(k) != k.scale(I * sign):
                    return f"j_C k ≠ ±i k for {k}"
            return None

        def intertwine(sign=sign):
            pairs = list(itertools.combinations(side.frame(), 2))
            pairs += [(random_section(rng, side, 1), random_section(rng, side, 1))]
            for a, b in pairs:
                lhs = ef.proj_U(A(a, b), sign)
                rhs = dull_bracket(D, ef.proj_U(a, sign), ef.proj_U(b, sign))
                if lhs != rhs:
                    return f"π(𝔸(ν₁,ν₂)) − ⟦πν₁,πν₂⟧ = {lhs - rhs}"
                if sign == 1 and A.anchor(a) != list(ef.proj_U(a, 1).comps[: G.m]):
                    return "complex anchor differs from pr_TM on U₊"
            return None

        def closes(sign=sign):
            for u1, u2 in itertools.combinations(ef.U[sign], 2):
                b = dull_bracket(D, u1, u2)
                if G.j(b) != b.scale(I * sign):
                    return f"⟦u₁,u₂⟧ leaves U{name}: {b}"
            return None

        rep.run(f"eigen.annihilator{name}", "U± and K± annihilate each other", annihilator)
        rep.run(f"eigen.eigenvalues{name}", "frames are eigenvectors of j and j_C", eigen)
        if integrable:
            rep.run(f"eigen.intertwiner{name}", "ν ↦ ½(ν ∓ ijν) intertwines 𝔸 with the restricted bracket", intertwine)
            rep.run(f"eigen.closure{name}", "adapted dull bracket closes on U±", closes)
        else:
            rep.skip(f"eigen.intertwiner{name}", "intertwiner", "structure not integrable")
            rep.skip(f"eigen.closure{name}", "closure", "structure not integrable")
    return rep


def complex_type_blocks_check(G: LinGCS, J_M: BundleMap, j_E: BundleMap) -> Optional[str]:
    """U₊ frame elements are purely T^{1,0}M or purely (E^{0,1})*."""
    ef = eigenframes(G)
    m = G.m
    for u in ef.U[1]:
        X, eps = u.comps[:m], u.comps[m:]
        hasX = any(not c.is_zero() for c in X)
        hasE = any(not c.is_zero() for c in eps)
        if hasX and hasE:
            return f"mixed U₊ frame element {u}"
        if hasX:
            Xs = Section(J_M.source, X)
            if J_M(Xs) != Xs.scale(I):
                return f"TM part not of type (1,0): {u}"
        if hasE:
            es = Section(j_E.T.source, eps)
            if j_E.T(es) != es.scale(-I):
                return f"E* part does not annihilate E^(1,0): {u}"
    return None


# --------------------------------------------------------------------------
# Kähler pairs
# --------------------------------------------------------------------------

def commute_witness(G1: LinGCS, G2: LinGCS) -> Optional[str]:
    if not (G1.j @ G2.j == G2.j @ G1.j):
        return "j₁j₂ ≠ j₂j₁"
    for s in G1.generators():
        a = G1(rebase(G2(rebase(s, G2.S)), G1.S))
        b = rebase(G2(rebase(G1(s), G2.S)), G1.S)
        if a != b:
            return f"𝒥₁𝒥₂ ≠ 𝒥₂𝒥₁ on {s}"
    return None


def kahler_lemma_witness(G1: LinGCS, G2: LinGCS) -> Optional[str]:
    """Ψ₂(j₁ν₁,ν₂) + Ψ₂(ν₁,j₁ν₂) = Ψ₁(j₂ν₁,ν₂) + Ψ₁(ν₁,j₂ν₂) relative to a common Δ."""
    if G2.D is not G1.D:
        G2 = rebase_gcs(G2, G1.D)
    fr = G1.D.side.frame()
    j1, j2 = G1.j, G2.j
    for p, q in itertools.product(fr, repeat=2):
        lhs = G2.psi(j1(p), q) + G2.psi(p, j1(q))
        rhs = G1.psi(j2(p), q) + G1.psi(p, j2(q))
        if lhs != rhs:
            return f"Kähler Ψ identity defect {lhs - rhs}"
    return None


class KahlerError(ValueError):
    pass


def kahler_adapt(G1: LinGCS, G2: LinGCS, report: Optional[Report] = None) -> DorfmanConn:
    rep = report if report is not None else Report("kahler")
    if G2.D is not G1.D:
        G2 = rebase_gcs(G2, G1.D)
    w = commute_witness(G1, G2)
    if w is not None:
        raise KahlerError(w)
    if not (gacs_check(G1).ok and gacs_check(G2).ok):
        raise KahlerError("both structures must be generalised almost complex")
    rep.add("kahler.lemma", "Ψ identity for commuting structures", *_okw(kahler_lemma_witness(G1, G2)))
    D1 = adapt_dorfman(G1)
    H2 = rebase_gcs(G2, D1)
    fr = D1.side.frame()
    psi = [[[-HALF * c for c in H2.psi(p, H2.j(q)).comps] for q in fr] for p in fr]
    ch = HomForm.from_psi(G1.chart, G1.k, psi)
    D = apply_change(D1, ch)
    w = j_invariance_witness(ch, G1.j)
    rep.add("kahler.second-step-j1-equivalent", "second change of splitting is j₁-invariant", w is None, w and f"{w[2]}")
    F1 = rebase_gcs(G1, D)
    F2 = rebase_gcs(G2, D)
    rep.add("kahler.phi1-zero", "adapted to 𝒥₁", F1.Phi.is_zero(), "Φ₁ ≠ 0")
    rep.add("kahler.phi2-zero", "adapted to 𝒥₂", F2.Phi.is_zero(), "Φ₂ ≠ 0")
    return D


def _okw(w):
    return (w is None, w)


def kahler_metric_positive(G1: LinGCS, G2: LinGCS, points: Sequence[Sequence]) -> Tuple[bool, Optional[str]]:
    """G = −𝒥₁𝒥₂ evaluated on the generator frame at points (x, p) of E."""
    if G2.D is not G1.D:
        G2 = rebase_gcs(G2, G1.D)
    gens = G1.generators()
    mat = [[gt_pair(G1(G2(s1)).__neg__(), s2) for s2 in gens] for s1 in gens]
    for pt in points:
        x, p = pt[: G1.m], pt[G1.m:]
        M = []
        for row in mat:
            r = []
            for f in row:
                v = f.base.evaluate(x)
                for a, c in enumerate(f.lin):
                    v = v + c.evaluate(x) * mpq(p[a])
                r.append(mpq(v))
            M.append(r)
        if not _positive_definite(M):
            return False, f"not positive definite at {tuple(pt)}"
    return True, None


def _positive_definite(M) -> bool:
    n = len(M)
    for a in range(n):
        for b in range(n):
            if M[a][b] != M[b][a]:
                return False
    A = [row[:] for row in M]
    for i in range(n):
        if A[i][i] <= 0:
            return False
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            for c in range(i, n):
                A[r][c] -= f * A[i][c]
    return True


def kahler_check(G1: LinGCS, G2: LinGCS, points: Sequence[Sequence] = ((0, 0, 0, 0),)) -> Report:
    rep = Report("kahler")
    try:
        kahler_adapt(G1, G2, rep)
    except KahlerError as e:
        rep.add("kahler.commute", "side morphisms commute", False, str(e))
        return rep
    pts = [tuple(p) + (0,) * (G1.m + G1.k - len(p)) for p in points]
    ok, w = kahler_metric_positive(G1, G2, pts)
    if ok:
        rep.add("kahler.positivity", "G = −𝒥₁𝒥₂ positive at sampled points", True)
    else:
        # the core is isotropic and preserved, so this is expected for linear pairs
        rep.skip("kahler.positivity", "G = −𝒥₁𝒥₂ positive at sampled points", f"reported only: {w}")
    return rep
