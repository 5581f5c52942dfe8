"""Exact polynomial scalars on a single chart and linear algebra on trivialised bundles.

Every coefficient function is a polynomial in the chart coordinates with
rational or Gaussian-rational coefficients.  Values are immutable; all
operations return new objects.
"""

from __future__ import annotations

import operator
import random
from fractions import Fraction
from itertools import product as _iproduct
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

_MPQ = type(mpq(0))
RATIONAL = (int, Fraction, _MPQ)
_add = operator.add


class ParseError(ValueError):
    """Raised for malformed polynomial text.  ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class NotRealError(ValueError):
    pass


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------

class Gauss:
    """a + b*i with a, b rational.  Only used when b != 0 (see ``_norm``)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __add__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = _as_gauss(other)
        return _norm(Gauss(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = _as_gauss(other)
        return _norm(Gauss(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        return _as_gauss(other) - self

    def __mul__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = _as_gauss(other)
        return _norm(Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        o = _as_gauss(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return _norm(Gauss((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d))

    def __rtruediv__(self, other):
        if not isinstance(other, _NUMERIC):
            return NotImplemented
        return _as_gauss(other) / self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, RATIONAL):
            return self.im == 0 and self.re == other
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return Gauss(self.re, -self.im)

    def __repr__(self):
        return f"Gauss({self.re}, {self.im})"


Coeff = Union[_MPQ, Gauss]
_NUMERIC = RATIONAL + (Gauss,)
I = Gauss(0, 1)


def _as_gauss(c) -> Gauss:
    if isinstance(c, Gauss):
        return c
    return Gauss(c, 0)


def _norm(c):
    if isinstance(c, Gauss) and c.im == 0:
        return c.re
    return c


def _coeff(c) -> Coeff:
    if isinstance(c, Gauss):
        return _norm(c)
    if isinstance(c, complex):
        raise TypeError("floating complex numbers are not exact")
    if isinstance(c, float):
        raise TypeError("floats are not exact")
    return mpq(c)


def _conj(c):
    return c.conjugate() if isinstance(c, Gauss) else c


def _re(c):
    return c.re if isinstance(c, Gauss) else c


def _im(c):
    return c.im if isinstance(c, Gauss) else mpq(0)


# --------------------------------------------------------------------------
# Chart
# --------------------------------------------------------------------------

class Chart:
    """A single coordinate chart x1..xm."""

    def __init__(self, dim: int, names: Optional[Sequence[str]] = None):
        if dim < 1:
            raise ValueError("chart dimension must be >= 1")
        self.dim = dim
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(dim))
        if len(self.names) != dim or len(set(self.names)) != dim or "i" in self.names:
            raise ValueError("bad coordinate names")

    def __eq__(self, other):
        return isinstance(other, Chart) and self.dim == other.dim and self.names == other.names

    def __hash__(self):
        return hash((self.dim, self.names))

    def __repr__(self):
        return f"Chart({self.dim})"

    def zero(self) -> "Poly":
        return Poly(self.dim, {})

    def one(self) -> "Poly":
        return Poly.constant(self.dim, 1)

    def const(self, c) -> "Poly":
        return Poly.constant(self.dim, c)

    def coord(self, k: int) -> "Poly":
        """The coordinate function x_{k+1} (0-based index)."""
        e = [0] * self.dim
        e[k] = 1
        return Poly(self.dim, {tuple(e): mpq(1)})

    def parse(self, text: str) -> "Poly":
        return parse_scalar(text, self)


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------

def _grlex_key(exp: Tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Polynomial with rational (mpq) or Gauss coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  A Poly whose
    coefficients are all real plays the role of a real scalar; otherwise it is
    a complex scalar.  Equality is structural.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Dict[Tuple[int, ...], Coeff]):
        self.nvars = nvars
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, nvars: int, items: Iterable[Tuple[Tuple[int, ...], object]]) -> "Poly":
        acc: Dict[Tuple[int, ...], Coeff] = {}
        for e, c in items:
            if len(e) != nvars:
                raise ValueError("exponent length mismatch")
            c = _coeff(c)
            if e in acc:
                c = acc[e] + c
            acc[e] = c
        return cls(nvars, {e: _norm(c) for e, c in acc.items() if c})

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        c = _coeff(c)
        return cls(nvars, {(0,) * nvars: c} if c else {})

    # -- arithmetic --------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("chart mismatch between scalars")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        if not isinstance(other, (Poly,) + RATIONAL + (Gauss,)):
            return NotImplemented
        o = self._lift(other)
        if not o.terms:
            return self
        if not self.terms:
            return o
        t = dict(self.terms)
        for e, c in o.terms.items():
            if e in t:
                s = _norm(t[e] + c)
                if s:
                    t[e] = s
                else:
                    del t[e]
            else:
                t[e] = c
        return Poly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Poly,) + RATIONAL + (Gauss,)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RATIONAL + (Gauss,)):
            c = _coeff(other)
            if not c:
                return Poly(self.nvars, {})
            return Poly(self.nvars, {e: _norm(a * c) for e, a in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        o = self._lift(other)
        if not self.terms or not o.terms:
            return Poly(self.nvars, {})
        t: Dict[Tuple[int, ...], Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(map(_add, e1, e2))
                c = c1 * c2
                if e in t:
                    t[e] = t[e] + c
                else:
                    t[e] = c
        return Poly(self.nvars, {e: _norm(c) for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = other
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            c = other.constant_term()
        c = _coeff(c)
        if not c:
            raise ZeroDivisionError("division by zero")
        inv = mpq(1) / c if not isinstance(c, Gauss) else Gauss(1) / c
        return self * inv

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, RATIONAL + (Gauss,)):
            return self.terms == Poly.constant(self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Coeff:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_real(self) -> bool:
        return not any(isinstance(c, Gauss) for c in self.terms.values())

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], Coeff]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- calculus ----------------------------------------------------------
    def diff(self, k: int) -> "Poly":
        """Partial derivative in coordinate k (0-based)."""
        if not 0 <= k < self.nvars:
            raise IndexError(f"coordinate index {k} out of range")
        t = {}
        for e, c in self.terms.items():
            p = e[k]
            if p:
                ne = e[:k] + (p - 1,) + e[k + 1:]
                t[ne] = _norm(c * p)
        return Poly(self.nvars, t)

    def evaluate(self, point: Sequence) -> Coeff:
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        pt = [_coeff(v) for v in point]
        total: Coeff = mpq(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(pt, e):
                if p:
                    v = v * x ** p if not isinstance(x, Gauss) else v * _gpow(x, p)
            total = total + v
        return _norm(total)

    # -- complex structure -------------------------------------------------
    def conjugate(self) -> "Poly":
        return Poly(self.nvars, {e: _conj(c) for e, c in self.terms.items()})

    def re(self) -> "Poly":
        return Poly(self.nvars, {e: _re(c) for e, c in self.terms.items() if _re(c)})

    def im(self) -> "Poly":
        return Poly(self.nvars, {e: _im(c) for e, c in self.terms.items() if _im(c)})

    def real_part(self) -> "Poly":
        """Return self as a real scalar; raises if it has imaginary terms."""
        if not self.is_real():
            raise NotRealError(f"scalar {self} is not real")
        return self

    # -- printing ----------------------------------------------------------
    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or tuple(f"x{i + 1}" for i in range(self.nvars))
        if not self.terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                (names[k] if p == 1 else f"{names[k]}^{p}") for k, p in enumerate(e) if p
            )
            if isinstance(c, Gauss) and c.re != 0:
                body = f"({_fmt_frac(c.re)} {'-' if c.im < 0 else '+'} {_fmt_unit(abs(c.im), 'i')})"
                sign = "+"
                text = body + ("*" + mono if mono else "")
            else:
                val = c.im if isinstance(c, Gauss) else c
                sign = "-" if val < 0 else "+"
                mag = abs(val)
                factors = []
                if isinstance(c, Gauss):
                    factors.append(_fmt_unit(mag, "i"))
                elif mag != 1 or not mono:
                    factors.append(_fmt_frac(mag))
                if mono:
                    factors.append(mono)
                text = "*".join(factors)
            if idx == 0:
                out.append(("-" if sign == "-" else "") + text)
            else:
                out.append(f" {sign} {text}")
        return "".join(out)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.to_string()!r})"


def _gpow(x: Gauss, p: int):
    v = Gauss(1)
    for _ in range(p):
        v = v * x
    return v


def _fmt_frac(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_unit(mag, unit: str) -> str:
    return unit if mag == 1 else f"{_fmt_frac(mag)}*{unit}"


Scalar = Poly


def partial(s: Poly, i: int) -> Poly:
    """Partial derivative in the i-th coordinate, 1-based as in x1..xm."""
    if not 1 <= i <= s.nvars:
        raise IndexError(f"coordinate index {i} out of range 1..{s.nvars}")
    return s.diff(i - 1)


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.pos = 0
        self.chart = chart
        self.index = {n: k for k, n in enumerate(chart.names)}

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        if not self.text.strip():
            self.error("empty expression")
        p = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            at = self.pos
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.error("division only by a nonzero constant", at)
                p = p / q
        return p

    def unary(self) -> Poly:
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.unary()
        if c == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected integer exponent")
            base = base ** int(self.text[start:self.pos])
        return base

    def atom(self) -> Poly:
        c = self.peek()
        n = self.chart.dim
        if not c:
            self.error("unexpected end of input")
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if c.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Poly.constant(n, int(self.text[start:self.pos]))
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name == "i":
                return Poly(n, {(0,) * n: I})
            if name not in self.index:
                self.error(f"unknown coordinate {name!r}", start)
            return self.chart.coord(self.index[name])
        self.error(f"unexpected character {c!r}")


def parse_scalar(text: str, chart: Chart) -> Poly:
    return _Parser(text, chart).parse()


def random_poly(rng: random.Random, nvars: int, max_degree: int = 2, complex_: bool = False) -> Poly:
    """Random polynomial, coefficients drawn from {-2..2}/{1,2}."""
    items = []
    for e in _iproduct(range(max_degree + 1), repeat=nvars):
        if sum(e) > max_degree:
            continue
        c = mpq(rng.randint(-2, 2), rng.choice((1, 2)))
        if complex_:
            c = Gauss(c, mpq(rng.randint(-2, 2), rng.choice((1, 2))))
        items.append((e, c))
    return Poly.from_terms(nvars, items)


# --------------------------------------------------------------------------
# Bundles, sections, bundle maps
# --------------------------------------------------------------------------

_DUAL_LABEL = {"TM": "T*M", "T*M": "TM"}


def dual_label(label: str) -> str:
    if label in _DUAL_LABEL:
        return _DUAL_LABEL[label]
    return label[:-1] if label.endswith("*") else label + "*"


class Bundle:
    """A trivialised vector bundle over a chart, possibly a direct sum.

    ``summands`` is a tuple of (label, rank).  The dual of a direct sum
    lists the dual summands in reverse order, so that the dual of TM⊕E* is
    E⊕T*M.  ``complex_`` marks a complexification.
    """

    def __init__(self, chart: Chart, summands: Sequence[Tuple[str, int]], complex_: bool = False):
        if not summands:
            raise ValueError("bundle needs at least one summand")
        for _, r in summands:
            if r < 1:
                raise ValueError("bundle ranks must be positive")
        self.chart = chart
        self.summands = tuple((str(l), int(r)) for l, r in summands)
        self.complex_ = complex_

    @classmethod
    def simple(cls, chart: Chart, label: str, rank: int) -> "Bundle":
        return cls(chart, ((label, rank),))

    @classmethod
    def tangent(cls, chart: Chart) -> "Bundle":
        return cls(chart, (("TM", chart.dim),))

    @classmethod
    def cotangent(cls, chart: Chart) -> "Bundle":
        return cls(chart, (("T*M", chart.dim),))

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.summands)

    @property
    def label(self) -> str:
        lab = "⊕".join(l for l, _ in self.summands)
        return lab + "_C" if self.complex_ else lab

    def offsets(self) -> List[int]:
        out, acc = [], 0
        for _, r in self.summands:
            out.append(acc)
            acc += r
        return out

    def __add__(self, other: "Bundle") -> "Bundle":
        if self.chart != other.chart:
            raise ValueError("chart mismatch")
        return Bundle(self.chart, self.summands + other.summands, self.complex_ or other.complex_)

    def dual(self) -> "Bundle":
        return Bundle(self.chart, tuple((dual_label(l), r) for l, r in reversed(self.summands)), self.complex_)

    def complexify(self) -> "Bundle":
        return Bundle(self.chart, self.summands, True)

    def real_form(self) -> "Bundle":
        return Bundle(self.chart, self.summands, False)

    def dual_perm(self) -> List[int]:
        """perm[s] = index in the dual bundle of the dual of basis vector s."""
        n = len(self.summands)
        doffs = [0] * n
        acc = 0
        for j in reversed(range(n)):
            doffs[j] = acc
            acc += self.summands[j][1]
        perm = []
        for j, (_, r) in enumerate(self.summands):
            for t in range(r):
                perm.append(doffs[j] + t)
        return perm

    def __eq__(self, other):
        return (
            isinstance(other, Bundle)
            and self.chart == other.chart
            and self.summands == other.summands
            and self.complex_ == other.complex_
        )

    def __hash__(self):
        return hash((self.chart, self.summands, self.complex_))

    def __repr__(self):
        return f"Bundle({self.label}, rank={self.rank})"

    # frames
    def zero(self) -> "Section":
        z = self.chart.zero()
        return Section(self, (z,) * self.rank)

    def basis(self, s: int) -> "Section":
        z, o = self.chart.zero(), self.chart.one()
        return Section(self, tuple(o if t == s else z for t in range(self.rank)))

    def frame(self) -> List["Section"]:
        return [self.basis(s) for s in range(self.rank)]

    def section(self, comps: Sequence) -> "Section":
        return Section(self, comps)


def _to_poly(chart: Chart, v) -> Poly:
    if isinstance(v, Poly):
        if v.nvars != chart.dim:
            raise ValueError("scalar from a different chart")
        return v
    if isinstance(v, str):
        return parse_scalar(v, chart)
    return Poly.constant(chart.dim, v)


class Section:
    """Components of a section in the global frame of ``bundle``."""

    __slots__ = ("bundle", "comps")

    def __init__(self, bundle: Bundle, comps: Sequence):
        comps = tuple(_to_poly(bundle.chart, c) for c in comps)
        if len(comps) != bundle.rank:
            raise ValueError(f"expected {bundle.rank} components, got {len(comps)}")
        self.bundle = bundle
        self.comps = comps

    @classmethod
    def join(cls, bundle: Bundle, *parts: "Section") -> "Section":
        comps: List[Poly] = []
        for p in parts:
            comps.extend(p.comps if isinstance(p, Section) else p)
        return cls(bundle, comps)

    def parts(self) -> List[Tuple[Poly, ...]]:
        out = []
        for off, (_, r) in zip(self.bundle.offsets(), self.bundle.summands):
            out.append(self.comps[off:off + r])
        return out

    def _check(self, other: "Section"):
        if not isinstance(other, Section):
            raise TypeError("expected a Section")
        if other.bundle.rank != self.bundle.rank or other.bundle.summands != self.bundle.summands:
            raise ValueError(f"bundle mismatch: {self.bundle.label} vs {other.bundle.label}")

    def _wrap(self, comps) -> "Section":
        b = self.bundle
        if any(not c.is_real() for c in comps) and not b.complex_:
            b = b.complexify()
        return Section(b, comps)

    def __add__(self, other):
        self._check(other)
        return self._wrap(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        self._check(other)
        return self._wrap(tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return Section(self.bundle, tuple(-a for a in self.comps))

    def scale(self, f) -> "Section":
        f = _to_poly(self.bundle.chart, f)
        return self._wrap(tuple(f * a for a in self.comps))

    def __mul__(self, f):
        if isinstance(f, Section):
            return NotImplemented
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.bundle.summands == other.bundle.summands and self.comps == other.comps

    def __hash__(self):
        return hash((self.bundle.summands, self.comps))

    def __getitem__(self, k):
        return self.comps[k]

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.comps)

    def __len__(self):
        return len(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.comps)

    def conjugate(self) -> "Section":
        return Section(self.bundle, tuple(c.conjugate() for c in self.comps))

    def real_part(self) -> "Section":
        if not self.is_real():
            raise NotRealError("section has imaginary components")
        return Section(self.bundle.real_form(), self.comps)

    def re(self) -> "Section":
        return Section(self.bundle.real_form(), tuple(c.re() for c in self.comps))

    def im(self) -> "Section":
        return Section(self.bundle.real_form(), tuple(c.im() for c in self.comps))

    def complexify(self) -> "Section":
        return Section(self.bundle.complexify(), self.comps)

    def map_comps(self, fn) -> "Section":
        return self._wrap(tuple(fn(c) for c in self.comps))

    def __repr__(self):
        return f"Section({self.bundle.label}: [{', '.join(str(c) for c in self.comps)}])"


def pair(s: Section, t: Section) -> Poly:
    """Canonical pairing of a section of V with a section of V*."""
    if t.bundle.summands != s.bundle.dual().summands:
        raise ValueError(f"cannot pair {s.bundle.label} with {t.bundle.label}")
    perm = s.bundle.dual_perm()
    acc = s.bundle.chart.zero()
    for k, p in enumerate(perm):
        a, b = s.comps[k], t.comps[p]
        if a.terms and b.terms:
            acc = acc + a * b
    return acc


def pair_QT(nu: Section, tau: Section) -> Poly:
    """⟨(X,ε),(e,θ)⟩ = ε(e) + θ(X)."""
    if nu.bundle.rank != tau.bundle.rank:
        raise ValueError("rank mismatch in pairing")
    return pair(nu, tau)


class BundleMap:
    """A bundle map given by its matrix in the global frames."""

    __slots__ = ("source", "target", "rows")

    def __init__(self, source: Bundle, target: Bundle, rows: Sequence[Sequence]):
        rows = tuple(tuple(_to_poly(source.chart, v) for v in r) for r in rows)
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ValueError(
                f"matrix shape must be {target.rank}x{source.rank} for {source.label} -> {target.label}"
            )
        self.source = source
        self.target = target
        self.rows = rows

    @classmethod
    def zero(cls, source: Bundle, target: Bundle) -> "BundleMap":
        z = source.chart.zero()
        return cls(source, target, [[z] * source.rank for _ in range(target.rank)])

    @classmethod
    def identity(cls, bundle: Bundle) -> "BundleMap":
        z, o = bundle.chart.zero(), bundle.chart.one()
        n = bundle.rank
        return cls(bundle, bundle, [[o if a == b else z for b in range(n)] for a in range(n)])

    @classmethod
    def from_columns(cls, source: Bundle, target: Bundle, cols: Sequence[Section]) -> "BundleMap":
        if len(cols) != source.rank:
            raise ValueError("wrong number of columns")
        return cls(source, target, [[c.comps[a] for c in cols] for a in range(target.rank)])

    @classmethod
    def blocks(cls, source: Bundle, target: Bundle, grid) -> "BundleMap":
        """Assemble from blocks indexed by (target summand, source summand); None is zero."""
        z = source.chart.zero()
        rows = [[z] * source.rank for _ in range(target.rank)]
        toffs, soffs = target.offsets(), source.offsets()
        for bi, brow in enumerate(grid):
            for bj, blk in enumerate(brow):
                if blk is None:
                    continue
                m = blk.rows if isinstance(blk, BundleMap) else blk
                for a, r in enumerate(m):
                    for b, v in enumerate(r):
                        rows[toffs[bi] + a][soffs[bj] + b] = _to_poly(source.chart, v)
        return cls(source, target, rows)

    def __call__(self, s: Section) -> Section:
        if s.bundle.summands != self.source.summands:
            raise ValueError(f"map from {self.source.label} applied to {s.bundle.label}")
        z = self.source.chart.zero()
        out = []
        for r in self.rows:
            acc = z
            for m, c in zip(r, s.comps):
                if m.terms and c.terms:
                    acc = acc + m * c
            out.append(acc)
        return Section(self.target, out)._wrap(tuple(out))

    def column(self, b: int) -> Section:
        return Section(self.target, [r[b] for r in self.rows])

    def columns(self) -> List[Section]:
        return [self.column(b) for b in range(self.source.rank)]

    def __matmul__(self, other: "BundleMap") -> "BundleMap":
        if other.target.summands != self.source.summands:
            raise ValueError(f"cannot compose {self.source.label} <- {other.target.label}")
        z = self.source.chart.zero()
        rows = []
        for r in self.rows:
            row = []
            for b in range(other.source.rank):
                acc = z
                for k, m in enumerate(r):
                    o = other.rows[k][b]
                    if m.terms and o.terms:
                        acc = acc + m * o
                row.append(acc)
            rows.append(row)
        return BundleMap(other.source, self.target, rows)

    def _check(self, other):
        if self.source.summands != other.source.summands or self.target.summands != other.target.summands:
            raise ValueError("bundle map shape mismatch")

    def __add__(self, other):
        self._check(other)
        return BundleMap(self.source, self.target, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return BundleMap(self.source, self.target, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return BundleMap(self.source, self.target, [[-a for a in r] for r in self.rows])

    def scale(self, f) -> "BundleMap":
        f = _to_poly(self.source.chart, f)
        return BundleMap(self.source, self.target, [[f * a for a in r] for r in self.rows])

    def __mul__(self, f):
        if isinstance(f, BundleMap):
            return NotImplemented
        return self.scale(f)

    __rmul__ = __mul__

    @property
    def T(self) -> "BundleMap":
        """Dual map target* -> source*."""
        sp = self.source.dual_perm()
        tp = self.target.dual_perm()
        sd, td = self.source.dual(), self.target.dual()
        z = self.source.chart.zero()
        rows = [[z] * td.rank for _ in range(sd.rank)]
        for a in range(self.target.rank):
            for b in range(self.source.rank):
                rows[sp[b]][tp[a]] = self.rows[a][b]
        return BundleMap(td, sd, rows)

    def __eq__(self, other):
        if not isinstance(other, BundleMap):
            return NotImplemented
        return (
            self.source.summands == other.source.summands
            and self.target.summands == other.target.summands
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self.rows for v in r)

    def is_real(self) -> bool:
        return all(v.is_real() for r in self.rows for v in r)

    def conjugate(self) -> "BundleMap":
        return BundleMap(self.source, self.target, [[v.conjugate() for v in r] for r in self.rows])

    def real_part(self) -> "BundleMap":
        if not self.is_real():
            raise NotRealError("bundle map has imaginary entries")
        return self

    def re(self) -> "BundleMap":
        return BundleMap(self.source, self.target, [[v.re() for v in r] for r in self.rows])

    def im(self) -> "BundleMap":
        return BundleMap(self.source, self.target, [[v.im() for v in r] for r in self.rows])

    def complexify(self) -> "BundleMap":
        return BundleMap(self.source.complexify(), self.target.complexify(), self.rows)

    def map_entries(self, fn) -> "BundleMap":
        return BundleMap(self.source, self.target, [[fn(v) for v in r] for r in self.rows])

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self.rows)
        return f"BundleMap({self.source.label} -> {self.target.label}: [{body}])"


# --------------------------------------------------------------------------
# Calculus on the chart
# --------------------------------------------------------------------------

def _check_label(s: Section, label: str):
    if s.bundle.summands != ((label, s.bundle.chart.dim),):
        raise ValueError(f"expected a section of {label}, got {s.bundle.label}")


def vf_apply(X: Sequence[Poly], f: Poly) -> Poly:
    """X(f) = Σ X_j ∂_j f for a component vector X."""
    acc = f * 0
    for j, xj in enumerate(X):
        if xj.terms:
            d = f.diff(j)
            if d.terms:
                acc = acc + xj * d
    return acc


def lie_bracket_vf(X: Section, Y: Section) -> Section:
    _check_label(X, "TM")
    _check_label(Y, "TM")
    comps = [vf_apply(X.comps, Y.comps[i]) - vf_apply(Y.comps, X.comps[i]) for i in range(len(X))]
    return Section(X.bundle, comps)


def lie_deriv_form(X: Section, theta: Section) -> Section:
    _check_label(X, "TM")
    _check_label(theta, "T*M")
    m = len(X)
    comps = []
    for i in range(m):
        acc = vf_apply(X.comps, theta.comps[i])
        for j in range(m):
            if theta.comps[j].terms:
                acc = acc + theta.comps[j] * X.comps[j].diff(i)
        comps.append(acc)
    return Section(theta.bundle, comps)


def exterior_d(f: Poly, chart: Optional[Chart] = None) -> Section:
    chart = chart or Chart(f.nvars)
    return Section(Bundle.cotangent(chart), [f.diff(i) for i in range(f.nvars)])


def iota_d(V: Sequence[Poly], alpha: Sequence[Poly]) -> List[Poly]:
    """Components of ι_V dα for a 1-form α: Σ_j V_j (∂_j α_i − ∂_i α_j)."""
    m = len(alpha)
    out = []
    for i in range(m):
        acc = alpha[0] * 0
        for j in range(m):
            if V[j].terms:
                t = alpha[i].diff(j) - alpha[j].diff(i)
                if t.terms:
                    acc = acc + V[j] * t
        out.append(acc)
    return out


def random_section(rng: random.Random, bundle: Bundle, max_degree: int = 2, complex_: bool = False) -> Section:
    return Section(bundle, [random_poly(rng, bundle.chart.dim, max_degree, complex_) for _ in range(bundle.rank)])


def const_matrix(chart: Chart, rows: Sequence[Sequence]) -> List[List[Poly]]:
    return [[_to_poly(chart, v) for v in r] for r in rows]
