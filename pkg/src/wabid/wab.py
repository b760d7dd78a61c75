"""The Lie algebra W(a,b) with basis {L_m, I_m : m in Z}.

    [L_m, L_n] = (m - n) L_{m+n}
    [L_m, I_n] = -(n + a + b m) I_{m+n}
    [I_m, I_n] = 0

[I_m, L_n] is obtained by antisymmetry from the [L, I] constants.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

from .linalg import GaussInt
from .scalar import ONE, ZERO, Scalar, ScalarParseError, as_scalar, parse_scalar

__all__ = [
    "Params",
    "BasisVector",
    "Element",
    "L",
    "I",
    "basis_key",
    "basis_window",
    "structure_constant",
    "basis_bracket",
    "bracket",
    "check_jacobi",
    "shift_iso",
    "check_shift_homomorphism",
    "IntegralBracket",
    "jacobi_violations",
]

_TAG_RANK = {"L": 0, "I": 1}


class BasisVector(NamedTuple):
    tag: str  # "L" or "I"
    degree: int

    def __str__(self) -> str:
        return f"{self.tag}[{self.degree}]"


def basis_key(v: BasisVector) -> tuple[int, int]:
    """Sort key: L before I, then by degree."""
    return _TAG_RANK[v.tag], v.degree


def basis_window(radius: int) -> list[BasisVector]:
    """All basis vectors with |degree| <= radius, in canonical order."""
    out = [BasisVector("L", m) for m in range(-radius, radius + 1)]
    out += [BasisVector("I", m) for m in range(-radius, radius + 1)]
    return out


@dataclass(frozen=True)
class Params:
    a: Scalar
    b: Scalar

    def __init__(self, a, b):
        object.__setattr__(self, "a", as_scalar(a))
        object.__setattr__(self, "b", as_scalar(b))

    def __str__(self) -> str:
        return f"W({self.a},{self.b})"

    def shifted(self, k: int) -> Params:
        """Parameters of the target of the degree-shift isomorphism, W(a+k, b)."""
        return Params(self.a + k, self.b)

    def normalized(self) -> tuple[Params, int]:
        """Shift a by an integer so that 0 <= Re(a) < 1; returns (params, shift)."""
        k = -math.floor(self.a.re)
        return self.shifted(k), k


class Element:
    """Finitely supported linear combination of basis vectors.  Zero
    coefficients are never stored, so equality is dict equality."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[BasisVector, object] | Iterable | None = None):
        clean: dict[BasisVector, Scalar] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for v, c in items:
                if not isinstance(v, BasisVector):
                    v = BasisVector(*v)
                c = as_scalar(c)
                if c:
                    clean[v] = c
        self._terms = clean

    @classmethod
    def _from_clean(cls, terms: dict[BasisVector, Scalar]) -> Element:
        e = cls.__new__(cls)
        e._terms = terms
        return e

    @classmethod
    def basis(cls, tag: str, degree: int, coef=ONE) -> Element:
        return cls({BasisVector(tag, degree): coef})

    @property
    def terms(self) -> Mapping[BasisVector, Scalar]:
        return MappingProxyType(self._terms)

    def coefficient(self, v: BasisVector) -> Scalar:
        return self._terms.get(v, ZERO)

    def items(self):
        return self._terms.items()

    def support(self) -> list[BasisVector]:
        return sorted(self._terms, key=basis_key)

    def degrees(self) -> set[int]:
        return {v.degree for v in self._terms}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[BasisVector]:
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: Element) -> Element:
        out = dict(self._terms)
        for v, c in other._terms.items():
            s = out.get(v)
            s = c if s is None else s + c
            if s:
                out[v] = s
            else:
                out.pop(v, None)
        return Element._from_clean(out)

    def __neg__(self) -> Element:
        return Element._from_clean({v: -c for v, c in self._terms.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __mul__(self, scalar) -> Element:
        s = as_scalar(scalar)
        if not s:
            return Element()
        return Element._from_clean({v: c * s for v, c in self._terms.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for v in self.support():
            c = self._terms[v]
            coef = str(c) if c.is_real else f"({c})"
            parts.append(f"{coef}*{v}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Element({self})"

    @classmethod
    def parse(cls, text: str) -> Element:
        """Inverse of ``str``: e.g. ``3/2*L[-1] + (0+1/1i)*I[4]``."""
        text = text.strip()
        if text == "0":
            return cls()
        terms: dict[BasisVector, Scalar] = {}
        for chunk in text.split(" + "):
            m = _TERM_RE.match(chunk.strip())
            if not m:
                raise ScalarParseError(f"cannot parse term {chunk!r}")
            v = BasisVector(m.group(2), int(m.group(3)))
            c = parse_scalar(m.group(1))
            terms[v] = terms.get(v, ZERO) + c
        return cls(terms)


_TERM_RE = re.compile(r"^(.+)\*([LI])\[(-?\d+)\]$")


def L(m: int, coef=ONE) -> Element:
    return Element.basis("L", m, coef)


def I(m: int, coef=ONE) -> Element:  # noqa: E743
    return Element.basis("I", m, coef)


def structure_constant(params: Params, u: BasisVector, v: BasisVector) -> Scalar:
    """Coefficient c with [u, v] = c * e_{deg u + deg v} (tag determined by u, v)."""
    if u.tag == "L":
        if v.tag == "L":
            return Scalar(u.degree - v.degree)
        return -(params.a + params.b * u.degree + v.degree)
    if v.tag == "L":
        # [I_m, L_n] = -[L_n, I_m]
        return params.a + params.b * v.degree + u.degree
    return ZERO


def basis_bracket(params: Params, u: BasisVector, v: BasisVector) -> tuple[Scalar, BasisVector] | None:
    c = structure_constant(params, u, v)
    if not c:
        return None
    tag = "L" if (u.tag == "L" and v.tag == "L") else "I"
    return c, BasisVector(tag, u.degree + v.degree)


def bracket(params: Params, x: Element, y: Element) -> Element:
    out: dict[BasisVector, Scalar] = {}
    for u, cu in x.items():
        for v, cv in y.items():
            bb = basis_bracket(params, u, v)
            if bb is None:
                continue
            c, w = bb
            assert w.degree == u.degree + v.degree
            s = out.get(w, ZERO) + c * cu * cv
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return Element._from_clean(out)


def check_jacobi(params: Params, x: Element, y: Element, z: Element) -> Element:
    """[x,[y,z]] + [y,[z,x]] + [z,[x,y]]; zero in a Lie algebra."""
    br = lambda p, q: bracket(params, p, q)  # noqa: E731
    return br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))


def shift_iso(k: int, x: Element) -> Element:
    """The isomorphism W(a,b) -> W(a+k,b): L_m -> L_m, I_m -> I_{m-k}."""
    if k == 0:
        return x
    return Element._from_clean(
        {(v if v.tag == "L" else BasisVector("I", v.degree - k)): c for v, c in x.items()}
    )


def check_shift_homomorphism(params: Params, k: int, x: Element, y: Element) -> Element:
    """sigma([x,y]) - [sigma x, sigma y]_{a+k,b}; zero when sigma is a homomorphism."""
    lhs = shift_iso(k, bracket(params, x, y))
    rhs = bracket(params.shifted(k), shift_iso(k, x), shift_iso(k, y))
    return lhs - rhs


def _lcm_den(*qs: Fraction) -> int:
    d = 1
    for q in qs:
        d = d * q.denominator // math.gcd(d, q.denominator)
    return d


class IntegralBracket:
    """Structure constants scaled by a common denominator so that every
    bracket coefficient is an integer (real parameters) or a Gaussian
    integer.  Used when assembling constraint systems."""

    def __init__(self, params: Params):
        a, b = params.a, params.b
        self.scale = _lcm_den(a.re, a.im, b.re, b.im)
        self.is_real = a.is_real and b.is_real
        s = self.scale
        if self.is_real:
            self._a = int(a.re * s)
            self._b = int(b.re * s)
        else:
            self._a = GaussInt(int(a.re * s), int(a.im * s))
            self._b = GaussInt(int(b.re * s), int(b.im * s))

    def coef(self, tu: str, m: int, tv: str, n: int):
        """scale * structure constant of [tu_m, tv_n] (0 when the bracket vanishes)."""
        s = self.scale
        if tu == "L":
            if tv == "L":
                return s * (m - n)
            return -(self._a + self._b * m + s * n)
        if tv == "L":
            return self._a + self._b * n + s * m
        return 0

    @staticmethod
    def target(tu: str, tv: str) -> str:
        return "L" if tu == "L" and tv == "L" else "I"


def jacobi_violations(params: Params, R: int) -> list[tuple[BasisVector, BasisVector, BasisVector]]:
    """Basis triples with |degree| <= R whose Jacobi sum is nonzero.

    Works on scaled integer constants; every term of the Jacobi sum of three
    basis vectors is a multiple of the same basis vector, so the residual is
    a single number per triple.
    """
    ib = IntegralBracket(params)
    coef, target = ib.coef, ib.target
    window = basis_window(R)
    bad = []

    def nested(u, v, w):
        # [u, [v, w]] as (coefficient, tag)
        c1 = coef(v.tag, v.degree, w.tag, w.degree)
        if not c1:
            return 0
        t1 = target(v.tag, w.tag)
        c2 = coef(u.tag, u.degree, t1, v.degree + w.degree)
        return c1 * c2

    for x in window:
        for y in window:
            for z in window:
                if nested(x, y, z) + nested(y, z, x) + nested(z, x, y):
                    bad.append((x, y, z))
    return bad
