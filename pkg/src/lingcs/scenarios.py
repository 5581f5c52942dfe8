"""Scenario files and the built-in scenario registry.

A scenario is plain ``key = value`` text, one record per line, ``#`` starts a
comment.  Indexed records use 1-based indices, e.g. ``conn.gamma[1][2][1]``;
missing entries are zero.  A record may also be given with fewer indices and
a nested list value, e.g. ``cplx.JM = [[0, -1], [1, 0]]``.  Every numeric
entry is a polynomial string in the coordinates x1..xm.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .algebra import Bundle, BundleMap, Chart, ParseError, Poly
from .dorfman import DorfmanConn, HomForm, LinConn, is_skew, twist_from_psi
from .gcs import LinGCS, gcs_from_complex, gcs_from_symplectic, rebase_gcs
from .holomorphic import LinCpxStr


class ScenarioError(ValueError):
    """Validation or parse failure; the message starts with the field path."""


_GCS_RECORDS = {
    "gcs.kind": ("choice", ("explicit", "complex", "symplectic")),
    "gcs.j": ("poly", ("n", "n")),
    "gcs.psi": ("poly", ("n", "n", "k")),
    "gcs.phi": ("poly", ("n", "k", "n")),
    "cplx.JM": ("poly", ("m", "m")),
    "cplx.jE": ("poly", ("k", "k")),
    "cplx.psi": ("poly", ("m", "k", "k")),
    "symp.tau": ("poly", ("k", "m")),
    "symp.tau_inv": ("poly", ("m", "k")),
}

RECORDS: Dict[str, Tuple[str, object]] = {
    "name": ("text", None),
    "description": ("text", None),
    "m": ("int", None),
    "k": ("int", None),
    "seed": ("int", None),
    "conn.gamma": ("poly", ("m", "k", "k")),
    "twist.phi": ("poly", ("n", "k", "n")),
    "twist.psi": ("poly", ("n", "n", "k")),
    **_GCS_RECORDS,
    **{"kahler." + key: spec for key, spec in _GCS_RECORDS.items()},
    "algebroid.n": ("int", None),
    "algebroid.rho": ("poly", ("m", "A")),
    "algebroid.c": ("poly", ("A", "A", "A")),
    "lie2.r": ("int", None),
    "lie2.s": ("int", None),
    "lie2.rho": ("poly", ("m", "r")),
    "lie2.dB": ("poly", ("s", "r")),
    "lie2.c": ("poly", ("r", "r", "r")),
    "lie2.gamma": ("poly", ("r", "s", "s")),
    "lie2.omega": ("poly", ("r", "r", "r", "s")),
    "lie2.j": ("poly", ("r", "r")),
    "lie2.phi": ("poly", ("r", "r", "s")),
    "holo.section": ("poly", ("*", "k")),
    "holo.expect": ("poly", ("*",)),
    "defect.drop_curvature": ("int", None),
}

_DIM_SOURCE = {"m": "m", "k": "k", "A": "algebroid.n", "r": "lie2.r", "s": "lie2.s"}
_LINE = re.compile(r"^\s*([A-Za-z_][\w.]*)((?:\s*\[\s*\d+\s*\])*)\s*=\s*(.*?)\s*$")
_INDEX = re.compile(r"\[\s*(\d+)\s*\]")


def _split_list(text: str, where: str) -> List[str]:
    """Top-level comma split of '[a, b, [c]]' (brackets stripped)."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ScenarioError(f"{where}: expected a bracketed list, got {text!r}")
    body = body[1:-1]
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ScenarioError(f"{where}: unbalanced brackets")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ScenarioError(f"{where}: unbalanced brackets")
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return parts


@dataclass
class _Raw:
    line: int
    key: str
    index: Tuple[int, ...]
    value: str


@dataclass
class Scenario:
    name: str
    m: int
    k: Optional[int] = None
    description: str = ""
    seed: Optional[int] = None
    ints: Dict[str, int] = field(default_factory=dict)
    text: Dict[str, str] = field(default_factory=dict)
    arrays: Dict[str, Dict[Tuple[int, ...], Poly]] = field(default_factory=dict)
    shapes: Dict[str, Tuple[int, ...]] = field(default_factory=dict)

    # -- raw access ---------------------------------------------------------
    @cached_property
    def chart(self) -> Chart:
        return Chart(self.m)

    def has(self, key: str) -> bool:
        return key in self.arrays or key in self.text or key in self.ints

    def array(self, key: str, shape: Optional[Tuple[int, ...]] = None):
        """Dense nested list of Poly for ``key`` (zeros where unset)."""
        shape = shape or self.shapes.get(key) or self._shape(key)
        data = self.arrays.get(key, {})
        z = self.chart.zero()

        def build(prefix, dims):
            if not dims:
                return data.get(prefix, z)
            return [build(prefix + (i,), dims[1:]) for i in range(dims[0])]

        return build((), shape)

    def _shape(self, key: str) -> Tuple[int, ...]:
        dims = RECORDS[key][1]
        return tuple(_dim_value(self.ints, d, key) for d in dims)

    # -- geometric objects ---------------------------------------------------
    @cached_property
    def conn(self) -> Optional[LinConn]:
        if self.k is None:
            return None
        return LinConn(self.chart, self.k, self.array("conn.gamma"))

    @cached_property
    def dorfman(self) -> Optional[DorfmanConn]:
        if self.conn is None:
            return None
        tw = self.array("twist.phi")
        if "twist.psi" in self.arrays:
            extra = twist_from_psi(self.chart, self.k, self.array("twist.psi"))
            tw = [[[a + b for a, b in zip(v, w)] for v, w in zip(t, s)] for t, s in zip(tw, extra)]
        return DorfmanConn(self.conn, tw)

    def _gcs(self, prefix: str) -> Optional[LinGCS]:
        kind = self.text.get(prefix + "gcs.kind")
        if kind is None:
            return None
        D = self.dorfman
        if D is None:
            raise ScenarioError(f"{prefix}gcs.kind: a GCS needs the rank k of E")
        chart = self.chart
        if kind == "complex":
            G = gcs_from_complex(self.array(prefix + "cplx.JM"), self.array(prefix + "cplx.jE"), self.conn,
                                 self.array(prefix + "cplx.psi") if prefix + "cplx.psi" in self.arrays else None)
            return G if _same(G.D, D) else rebase_gcs(G, D)
        if kind == "symplectic":
            return gcs_from_symplectic(self.array(prefix + "symp.tau"), self.array(prefix + "symp.tau_inv"), D)
        phi = HomForm(chart, self.k, self.array(prefix + "gcs.phi"))
        if prefix + "gcs.psi" in self.arrays:
            phi = phi + HomForm.from_psi(chart, self.k, self.array(prefix + "gcs.psi"))
        return LinGCS(D, self.array(prefix + "gcs.j"), phi)

    @cached_property
    def gcs(self) -> Optional[LinGCS]:
        return self._gcs("")

    @cached_property
    def kahler_partner(self) -> Optional[LinGCS]:
        return self._gcs("kahler.")

    @property
    def kind(self) -> Optional[str]:
        return self.text.get("gcs.kind")

    @cached_property
    def tau_inv(self) -> Optional[BundleMap]:
        if self.kind != "symplectic":
            return None
        return BundleMap(Bundle.simple(self.chart, "E*", self.k), Bundle.tangent(self.chart), self.array("symp.tau_inv"))

    @cached_property
    def cpx(self) -> Optional[LinCpxStr]:
        if self.kind != "complex":
            return None
        psi = self.array("cplx.psi") if "cplx.psi" in self.arrays else None
        return LinCpxStr(self.array("cplx.JM"), self.array("cplx.jE"), self.conn, psi)

    @cached_property
    def algebroid(self):
        if "algebroid.n" not in self.ints:
            return None
        from .algebroid import LieAlgebroid

        return LieAlgebroid(self.chart, self.ints["algebroid.n"], self.array("algebroid.rho"), self.array("algebroid.c"))

    @cached_property
    def lie2(self):
        """Lie2GCS from explicit ``lie2.*`` records, else transported from the GCS."""
        from .lie2 import Lie2GCS, SplitLie2

        if "lie2.r" in self.ints:
            r, s = self.ints["lie2.r"], self.ints.get("lie2.s", 0)
            chart = self.chart
            Q = Bundle.simple(chart, "Q", r)
            B = Bundle.simple(chart, "B", s)
            S = SplitLie2(chart, Q, B, self.array("lie2.rho"), self.array("lie2.dB"), self.array("lie2.c"),
                          self.array("lie2.gamma"), self.array("lie2.omega"))
            phi = [BundleMap(S.B, S.C, p) for p in self.array("lie2.phi")]
            return Lie2GCS(S, self.array("lie2.j"), phi)
        if self.gcs is not None and is_skew(self.gcs.D):
            return Lie2GCS.from_lingcs(self.gcs)
        return None

    @cached_property
    def holo_sections(self) -> List[Tuple[List[Poly], bool]]:
        data = self.arrays.get("holo.section", {})
        count = max((idx[0] + 1 for idx in data), default=0)
        expect = self.arrays.get("holo.expect", {})
        out = []
        for t in range(count):
            e = [data.get((t, a), self.chart.zero()) for a in range(self.k)]
            ex = expect.get((t,))
            out.append((e, True if ex is None else not ex.is_zero()))
        return out

    @property
    def drop_curvature(self) -> bool:
        return bool(self.ints.get("defect.drop_curvature", 0))


def _same(D1: DorfmanConn, D2: DorfmanConn) -> bool:
    from .dorfman import same_operator

    return same_operator(D1, D2)


def _dim_value(ints: Dict[str, int], d: str, key: str) -> int:
    if d == "n":
        return _dim_value(ints, "m", key) + _dim_value(ints, "k", key)
    src = _DIM_SOURCE[d]
    if src not in ints:
        raise ScenarioError(f"{key}: needs `{src}` to be declared")
    return ints[src]


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    raws: List[_Raw] = []
    for no, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        mt = _LINE.match(stripped)
        if not mt:
            raise ScenarioError(f"{source}:{no}: expected `key = value`, got {stripped!r}")
        key, idx, value = mt.group(1), mt.group(2), mt.group(3)
        if key not in RECORDS:
            raise ScenarioError(f"{source}:{no}: {key}: unknown record")
        index = tuple(int(i) for i in _INDEX.findall(idx))
        raws.append(_Raw(no, key, index, value))

    ints: Dict[str, int] = {}
    texts: Dict[str, str] = {}
    for r in raws:
        kind, spec = RECORDS[r.key]
        where = f"{source}:{r.line}: {r.key}"
        if kind in ("int", "text", "choice"):
            if r.index:
                raise ScenarioError(f"{where}: takes no index")
            if r.key in ints or r.key in texts:
                raise ScenarioError(f"{where}: given twice")
        if kind == "int":
            try:
                ints[r.key] = int(r.value)
            except ValueError:
                raise ScenarioError(f"{where}: expected an integer, got {r.value!r}") from None
            if ints[r.key] < 0 or (r.key in ("m", "k", "algebroid.n", "lie2.r") and ints[r.key] < 1):
                raise ScenarioError(f"{where}: out of range")
        elif kind == "choice":
            if r.value not in spec:
                raise ScenarioError(f"{where}: expected one of {', '.join(spec)}, got {r.value!r}")
            texts[r.key] = r.value
        elif kind == "text":
            texts[r.key] = r.value
    if "m" not in ints:
        raise ScenarioError(f"{source}: m: the chart dimension is required")
    sc = Scenario(
        name=texts.get("name", Path(source).stem),
        m=ints["m"],
        k=ints.get("k"),
        description=texts.get("description", ""),
        seed=ints.get("seed"),
        ints=ints,
        text=texts,
    )
    chart = sc.chart
    for r in raws:
        kind, dims = RECORDS[r.key]
        if kind != "poly":
            continue
        where = f"{source}:{r.line}: {r.key}"
        shape = []
        for d in dims:
            shape.append(None if d == "*" else _dim_value(ints, d, f"{source}:{r.line}: {r.key}"))
        if len(r.index) > len(shape):
            raise ScenarioError(f"{where}: too many indices (expected {len(shape)})")
        for pos, (i, size) in enumerate(zip(r.index, shape)):
            label = dims[pos]
            if i < 1 or (size is not None and i > size):
                bound = "≥1" if size is None else f"1..{size}"
                raise ScenarioError(f"{where}{''.join(f'[{x}]' for x in r.index)}: index {i} out of range {bound} "
                                    f"(rank mismatch with `{_DIM_SOURCE.get(label, label)}`)")
        base = tuple(i - 1 for i in r.index)
        rest = shape[len(r.index):]
        entries = _fill(r.value, rest, where, chart)
        store = sc.arrays.setdefault(r.key, {})
        for sub, v in entries:
            full = base + sub
            if full in store:
                raise ScenarioError(f"{where}: entry {[i + 1 for i in full]} given twice")
            store[full] = v
    for key, data in sc.arrays.items():
        dims = RECORDS[key][1]
        if "*" in dims:
            count = max(idx[0] for idx in data) + 1 if data else 0
            sc.shapes[key] = (count,) + tuple(_dim_value(ints, d, key) for d in dims[1:])
    try:
        _validate(sc)
    except ScenarioError as e:
        msg = str(e)
        raise ScenarioError(msg if msg.startswith(source) else f"{source}: {msg}") from None
    return sc


def _fill(value: str, shape: List[Optional[int]], where: str, chart: Chart):
    if not shape:
        return [((), _poly(value, where, chart))]
    items = _split_list(value, where)
    size = shape[0]
    if size is not None and len(items) != size:
        raise ScenarioError(f"{where}: expected {size} entries, got {len(items)} (rank mismatch)")
    out = []
    for i, item in enumerate(items):
        for sub, v in _fill(item, shape[1:], f"{where}[{i + 1}]", chart):
            out.append(((i,) + sub, v))
    return out


def _poly(text: str, where: str, chart: Chart) -> Poly:
    try:
        return chart.parse(text)
    except ParseError as e:
        raise ScenarioError(f"{where}: malformed polynomial {text!r}: {e}") from None


def _validate(sc: Scenario):
    """Cross-record consistency checks."""
    kinds = [("", sc.text.get("gcs.kind")), ("kahler.", sc.text.get("kahler.gcs.kind"))]
    for prefix, kind in kinds:
        if kind is None:
            continue
        need = {"complex": ["cplx.JM", "cplx.jE"], "symplectic": ["symp.tau", "symp.tau_inv"], "explicit": ["gcs.j"]}[kind]
        for key in need:
            if prefix + key not in sc.arrays:
                raise ScenarioError(f"{prefix}{key}: required for gcs.kind = {kind}")
        if kind == "symplectic" and sc.k != sc.m:
            raise ScenarioError(f"{prefix}symp.tau: symplectic type needs k = m (rank mismatch: m={sc.m}, k={sc.k})")
    if "lie2.r" in sc.ints:
        r = sc.ints["lie2.r"]
        if r % 2:
            raise ScenarioError(f"lie2.r: a complex structure needs even rank, got {r}")
    if "holo.section" in sc.arrays and sc.kind != "complex":
        raise ScenarioError("holo.section: needs gcs.kind = complex")
    try:
        sc.dorfman
        sc.gcs
        sc.kahler_partner
        sc.algebroid
        if "lie2.r" in sc.ints:
            sc.lie2
        if sc.kind == "complex":
            sc.cpx
    except ScenarioError:
        raise
    except ValueError as e:
        raise ScenarioError(f"{sc.name}: {e}") from None


def load_scenario(path: str) -> Scenario:
    """``builtin:NAME`` or a path to a scenario file."""
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if name not in BUILTIN:
            raise ScenarioError(f"unknown built-in scenario {name!r}; see list-scenarios")
        return parse_scenario(BUILTIN[name], f"builtin:{name}")
    p = Path(path)
    if not p.exists():
        raise ScenarioError(f"{path}: no such file")
    return parse_scenario(p.read_text(encoding="utf-8"), str(p))


# --------------------------------------------------------------------------
# Built-in registry
# --------------------------------------------------------------------------

_J0 = "[[0, -1], [1, 0]]"
_I2 = "[[1, 0], [0, 1]]"

_FLAT_GCS = f"""
gcs.kind = complex
cplx.JM = {_J0}
cplx.jE = {_J0}
"""

S_FLAT = f"""
name = S_flat
description = m=2, k=2, flat connection, no twist, flat holomorphic type j = diag(J0, J0)
m = 2
k = 2
{_FLAT_GCS}
kahler.gcs.kind = symplectic
kahler.symp.tau = {_I2}
kahler.symp.tau_inv = {_I2}
holo.section[1] = [1, 0]
holo.section[2] = [x1, x2]
holo.section[3] = [x1^2 - x2^2, 2*x1*x2]
holo.section[4] = [x1, -x2]
holo.expect[4] = 0
holo.section[5] = [x1, 0]
holo.expect[5] = 0
"""

S_SYMP = f"""
name = S_symp
description = m=2, k=2, symplectic type with tau = identity
m = 2
k = 2
gcs.kind = symplectic
symp.tau = {_I2}
symp.tau_inv = {_I2}
kahler.gcs.kind = complex
kahler.cplx.JM = {_J0}
kahler.cplx.jE = {_J0}
"""

_POLY_BASE = """
m = 2
k = 1
conn.gamma[1][1][1] = x1*x2 - 1
conn.gamma[2][1][1] = 2*x1^2 + x2
twist.psi[1][2][1] = x1 + 3/2*x2^2
twist.psi[2][1][1] = -x1 - 3/2*x2^2
twist.psi[1][3][1] = x2 - 2
twist.psi[3][1][1] = -x2 + 2
twist.psi[2][3][1] = 1/2*x1*x2
twist.psi[3][2][1] = -1/2*x1*x2
"""

S_POLY = f"""
name = S_poly
description = m=2, k=1, polynomial connection and skew twist, no GCS
{_POLY_BASE}
"""

S_PERT = """
name = S_pert
description = S_flat with a non-skew perturbation of Psi (designed gacs failures)
m = 2
k = 2
gcs.kind = explicit
gcs.j = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
gcs.psi[1][1][1] = x1
gcs.psi[1][2][2] = 1
gcs.psi[2][1][2] = -1
"""

_TM_ALGEBROID = """
algebroid.n = 2
algebroid.rho = [[1, 0], [0, 1]]
"""

S_TM = f"""
name = S_tm
description = A = TM over R^2 with the flat holomorphic structure (Glanon, C+-, Drinfeld)
m = 2
k = 2
{_FLAT_GCS}
{_TM_ALGEBROID}
"""

_NAB_DORFMAN = """
m = 2
k = 2
conn.gamma[1] = [[x2, 0], [1, 0]]
conn.gamma[2] = [[0, x1], [0, 1/2]]
twist.psi[1][3][1] = x1
twist.psi[3][1][1] = -x1
twist.psi[2][4][2] = 1
twist.psi[4][2][2] = -1
twist.psi[1][2][2] = x2 - 1
twist.psi[2][1][2] = 1 - x2
"""

S_NAB = f"""
name = S_nab
description = rank-2 nonabelian algebroid [e1,e2] = e2, rho(e1) = d/dx1, rho(e2) = 0, with a skew Dorfman connection
{_NAB_DORFMAN}
algebroid.n = 2
algebroid.rho = [[1, 0], [0, 0]]
algebroid.c[1][2][2] = 1
algebroid.c[2][1][2] = -1
"""


def _c3_text() -> str:
    lines = [
        "name = S_c3",
        "description = strictness witness: Q = C^3, B of rank 1, d_B = 0, omega = Re(dz1 dz2 dz3)",
        "m = 1",
        "lie2.r = 6",
        "lie2.s = 1",
        "lie2.j = [" + ", ".join(
            "[" + ", ".join(
                ("-1" if (a % 2 == 0 and b == a + 1) else "1" if (a % 2 == 1 and b == a - 1) else "0") for b in range(6)
            ) + "]" for a in range(6)
        ) + "]",
    ]
    vol = {(0, 2, 4): 1, (0, 3, 5): -1, (1, 2, 5): -1, (1, 3, 4): -1}
    for idx, v in vol.items():
        for perm in itertools.permutations(range(3)):
            sign = 1
            for i in range(3):
                for k in range(i + 1, 3):
                    if perm[i] > perm[k]:
                        sign = -sign
            a, b, c = (idx[p] + 1 for p in perm)
            lines.append(f"lie2.omega[{a}][{b}][{c}][1] = {v * sign}")
    return "\n".join(lines) + "\n"


S_C3 = _c3_text()

# defect scenarios: each one breaks exactly one ingredient
DEFECTS = {
    "S_pert.j2": """
name = S_pert.j2
description = side morphism does not square to -1
m = 2
k = 2
gcs.kind = explicit
gcs.j = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -2], [0, 0, 1, 0]]
""",
    "S_pert.nonint": f"""
name = S_pert.nonint
description = complex type with a connection that is not complex-linear (non-integrable)
m = 2
k = 2
conn.gamma[1][1][1] = x2
{_FLAT_GCS}
""",
    "S_pert.kahler": f"""
name = S_pert.kahler
description = S_flat with a symplectic partner that does not commute with it
m = 2
k = 2
{_FLAT_GCS}
kahler.gcs.kind = symplectic
kahler.symp.tau = [[1, 0], [0, 2]]
kahler.symp.tau_inv = [[1, 0], [0, 1/2]]
""",
    "S_poly.nonskew": f"""
name = S_poly.nonskew
description = S_poly with a non-skew twist
{_POLY_BASE}
twist.psi[1][1][1] = x1
""",
    "S_poly.nocurv": f"""
name = S_poly.nocurv
description = S_poly with the curvature term dropped from the lift bracket
{_POLY_BASE}
defect.drop_curvature = 1
""",
    "S_nab.anchor": f"""
name = S_nab.anchor
description = S_nab with rho(e2) = d/dx2, so the anchor is not a morphism of brackets
{_NAB_DORFMAN}
algebroid.n = 2
algebroid.rho = [[1, 0], [0, 1]]
algebroid.c[1][2][2] = 1
algebroid.c[2][1][2] = -1
""",
    "S_tm.antiholo": f"""
name = S_tm.antiholo
description = S_tm with j_E = -J0, so the anchor is anti-holomorphic
m = 2
k = 2
gcs.kind = complex
cplx.JM = {_J0}
cplx.jE = [[0, 1], [-1, 0]]
{_TM_ALGEBROID}
""",
}

BUILTIN: Dict[str, str] = {
    "S_flat": S_FLAT,
    "S_symp": S_SYMP,
    "S_poly": S_POLY,
    "S_pert": S_PERT,
    "S_tm": S_TM,
    "S_nab": S_NAB,
    "S_c3": S_C3,
    **DEFECTS,
}


def builtin(name: str) -> Scenario:
    return load_scenario("builtin:" + name)
