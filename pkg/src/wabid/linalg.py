"""Sparse exact linear algebra over Z / Z[i] with fraction-free elimination.

Rows are ``dict[int, coeff]`` keyed by column index; coefficients are
Python ints or :class:`GaussInt`.  Column order is the integer order, and
every pivot is the leftmost nonzero of its row, so the reduced echelon
form (and with it the nullspace basis returned here) depends only on the
row space and the column numbering, not on the order rows arrive in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .scalar import Scalar

__all__ = [
    "GaussInt",
    "SparseEchelon",
    "NullspaceBasis",
    "integral_row",
    "rank",
    "span_defect",
    "in_span",
]


class GaussInt:
    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = re
        self.im = im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, o):
        if isinstance(o, int):
            return GaussInt(self.re + o, self.im)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __sub__(self, o):
        if isinstance(o, int):
            return GaussInt(self.re - o, self.im)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussInt(o - self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, int):
            return GaussInt(self.re * o, self.im * o)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"


def _content(x) -> int:
    if isinstance(x, int):
        return abs(x)
    return math.gcd(x.re, x.im)


def _divexact(x, g: int):
    if isinstance(x, int):
        return x // g
    return GaussInt(x.re // g, x.im // g)


def _to_field(x):
    if isinstance(x, int):
        return Fraction(x)
    if x.im == 0:
        return Fraction(x.re)
    return Scalar(x.re, x.im)


def _normalize(row: dict) -> None:
    g = 0
    for v in row.values():
        g = math.gcd(g, _content(v))
        if g == 1:
            return
    if g > 1:
        for j in row:
            row[j] = _divexact(row[j], g)


class SparseEchelon:
    """Incrementally maintained row echelon form."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, object]) -> dict:
        """Reduce ``row`` until its leading column is not a pivot column."""
        row = {j: v for j, v in row.items() if v}
        pivots = self.pivots
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                return row
            a = row.pop(c)
            b = p[c]
            if isinstance(a, int) and isinstance(b, int):
                g = math.gcd(a, b)
                ma, mb = b // g, a // g
            else:
                ma, mb = b, a
            if ma != 1:
                for j in row:
                    row[j] = ma * row[j]
            for j, v in p.items():
                if j == c:
                    continue
                w = row.get(j)
                nv = -(mb * v) if w is None else w - mb * v
                if nv:
                    row[j] = nv
                else:
                    del row[j]
            _normalize(row)
        return row

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; returns True when it increases the rank."""
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        lead = r[c]
        if isinstance(lead, int) and lead < 0:
            for j in r:
                r[j] = -r[j]
        self.pivots[c] = r
        return True

    def contains(self, row: Mapping[int, object]) -> bool:
        return not self.reduce(row)

    def nullspace(self, ncols: int) -> list[dict[int, object]]:
        """Basis of the kernel, one vector per free column (ascending).

        The vector for free column f has entry 1 at f, 0 at every other
        free column, so the basis is that of the reduced echelon form.
        Entries are Fractions (or Scalars for complex systems).
        """
        free = [c for c in range(ncols) if c not in self.pivots]
        # value of each pivot variable as a combination of free variables
        expr: dict[int, dict[int, object]] = {}
        for c in sorted(self.pivots, reverse=True):
            row = self.pivots[c]
            acc: dict[int, object] = {}
            for j, v in row.items():
                if j == c:
                    continue
                if j in self.pivots:
                    src = expr[j]
                    if not src:
                        continue
                    fv = _to_field(v)
                    for f, t in src.items():
                        s = acc.get(f, 0) + fv * t
                        if s:
                            acc[f] = s
                        else:
                            acc.pop(f, None)
                else:
                    s = acc.get(j, 0) + _to_field(v)
                    if s:
                        acc[j] = s
                    else:
                        acc.pop(j, None)
            if acc:
                d = -_to_field(row[c])
                expr[c] = {f: t / d for f, t in acc.items()}
            else:
                expr[c] = {}
        basis = []
        for f in free:
            vec: dict[int, object] = {f: Fraction(1)}
            for c, e in expr.items():
                t = e.get(f)
                if t:
                    vec[c] = t
            basis.append(dict(sorted(vec.items())))
        return basis


def integral_row(vec: Mapping[int, object]) -> dict[int, object]:
    """Scale a Fraction/Scalar vector to an int/GaussInt row with the same span."""
    den = 1
    complex_ = False
    for v in vec.values():
        if isinstance(v, Scalar):
            den = math.lcm(den, v.re.denominator, v.im.denominator)
            complex_ = complex_ or bool(v.im)
        elif isinstance(v, Fraction):
            den = math.lcm(den, v.denominator)
    out: dict[int, object] = {}
    for j, v in vec.items():
        if not v:
            continue
        if isinstance(v, Scalar):
            re, im = int(v.re * den), int(v.im * den)
            out[j] = GaussInt(re, im) if complex_ else re
        else:
            out[j] = int(Fraction(v) * den)
    return out


def rank(vectors: Iterable[Mapping[int, object]]) -> int:
    ech = SparseEchelon()
    for v in vectors:
        ech.add(integral_row(v))
    return ech.rank


def in_span(vector: Mapping[int, object], basis: Iterable[Mapping[int, object]]) -> bool:
    ech = SparseEchelon()
    for v in basis:
        ech.add(integral_row(v))
    return ech.contains(integral_row(vector))


def span_defect(left: Sequence[Mapping[int, object]], right: Sequence[Mapping[int, object]]) -> int:
    """0 iff span(left) == span(right); otherwise the total number of
    independent directions present in one span but not the other."""
    r_left, r_right = rank(left), rank(right)
    r_both = rank(list(left) + list(right))
    return (r_both - r_left) + (r_both - r_right)


@dataclass
class NullspaceBasis:
    """Kernel of an assembled system, with unknowns labelled by ``columns``.

    ``vectors`` hold exact entries keyed by column index.  The certified
    dimension is the rank of the vectors restricted to ``interior``.
    """

    columns: list[Hashable]
    vectors: list[dict[int, object]]
    interior: list[int] = field(default_factory=list)
    equations: int = 0

    @property
    def raw_dimension(self) -> int:
        return len(self.vectors)

    def restricted(self, cols: Iterable[int] | None = None) -> list[dict[int, object]]:
        keep = set(self.interior if cols is None else cols)
        return [{j: v for j, v in vec.items() if j in keep} for vec in self.vectors]

    @property
    def certified_dimension(self) -> int:
        return rank(self.restricted())

    def labelled(self, vec: Mapping[int, object]) -> dict[Hashable, object]:
        return {self.columns[j]: v for j, v in vec.items()}
