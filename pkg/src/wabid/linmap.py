"""Linear maps on a finite window of W(a,b) and derivations.

The derivation solver works one degree shift k at a time: a homogeneous
map D of shift k sends L_m, I_m into span{L_{m+k}, I_{m+k}}, so its
unknowns are two coefficients per basis vector of the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .linalg import NullspaceBasis, SparseEchelon, in_span, rank
from .scalar import ONE, Scalar, as_scalar
from .wab import (
    BasisVector,
    Element,
    IntegralBracket,
    Params,
    basis_window,
    bracket,
)

__all__ = [
    "WindowTooSmallError",
    "WindowedLinearMap",
    "DerivationSolveReport",
    "CANONICAL_DERIVATIONS",
    "inner_derivation",
    "canonical_derivation",
    "is_derivation",
    "solve_derivations",
    "in_solution_space",
    "expected_derivation_dimension",
    "CANONICAL_PARAMS",
]


class WindowTooSmallError(ValueError):
    """Raised when a window admits no constraint or violates R >= margin + 2."""


@dataclass(frozen=True)
class WindowedLinearMap:
    radius: int
    values: Mapping[BasisVector, Element]
    shift: int | None = None

    def __post_init__(self):
        clean = {}
        for v, e in self.values.items():
            if abs(v.degree) > self.radius:
                raise ValueError(f"key {v} outside radius {self.radius}")
            if self.shift is not None and any(d != v.degree + self.shift for d in e.degrees()):
                raise ValueError(f"value at {v} not homogeneous of shift {self.shift}")
            if e:
                clean[v] = e
        object.__setattr__(self, "values", clean)

    def in_window(self, v: BasisVector) -> bool:
        return abs(v.degree) <= self.radius

    def at(self, v: BasisVector) -> Element:
        if not self.in_window(v):
            raise KeyError(f"{v} outside window of radius {self.radius}")
        return self.values.get(v, _ZERO_ELEMENT)

    def __call__(self, x: Element) -> Element:
        out = Element()
        for v, c in x.items():
            out = out + self.at(v) * c
        return out

    def __add__(self, other: WindowedLinearMap) -> WindowedLinearMap:
        r = min(self.radius, other.radius)
        keys = {v for v in list(self.values) + list(other.values) if abs(v.degree) <= r}
        vals = {v: self.values.get(v, _ZERO_ELEMENT) + other.values.get(v, _ZERO_ELEMENT) for v in keys}
        shift = self.shift if self.shift == other.shift else None
        return WindowedLinearMap(r, vals, shift)

    def __mul__(self, c) -> WindowedLinearMap:
        return WindowedLinearMap(self.radius, {v: e * c for v, e in self.values.items()}, self.shift)

    __rmul__ = __mul__

    def __neg__(self) -> WindowedLinearMap:
        return self * -1

    def __sub__(self, other: WindowedLinearMap) -> WindowedLinearMap:
        return self + (-other)

    def restrict(self, radius: int) -> WindowedLinearMap:
        return WindowedLinearMap(
            radius, {v: e for v, e in self.values.items() if abs(v.degree) <= radius}, self.shift
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, WindowedLinearMap):
            return NotImplemented
        return self.radius == other.radius and self.values == other.values

    def is_zero(self) -> bool:
        return not self.values


_ZERO_ELEMENT = Element()


def inner_derivation(params: Params, x: Element, R: int) -> WindowedLinearMap:
    """ad x : y -> [x, y] on the window |degree| <= R."""
    degs = x.degrees()
    shift = next(iter(degs)) if len(degs) == 1 else (0 if not degs else None)
    vals = {v: bracket(params, x, Element({v: ONE})) for v in basis_window(R)}
    return WindowedLinearMap(R, vals, shift)


def _d1(v: BasisVector) -> Element:
    return Element({v: ONE}) if v.tag == "I" else _ZERO_ELEMENT


def _l_to_i(coef):
    def apply(v: BasisVector) -> Element:
        if v.tag == "I":
            return _ZERO_ELEMENT
        return Element({BasisVector("I", v.degree): coef(v.degree)})

    return apply


CANONICAL_DERIVATIONS = {
    "D1": _d1,
    "D2_00": _l_to_i(lambda m: m - 1),
    "D2_01": _l_to_i(lambda m: m * m - m),
    "D2_02": _l_to_i(lambda m: m**3),
    "D3": _l_to_i(lambda m: m),
}

# parameters (a, b) at which each outer derivation is defined
CANONICAL_PARAMS = {
    "D2_00": (0, 0),
    "D2_01": (0, 1),
    "D2_02": (0, 2),
    "D3": (0, 0),
}


def canonical_derivation(which: str, R: int) -> WindowedLinearMap:
    try:
        rule = CANONICAL_DERIVATIONS[which]
    except KeyError:
        raise ValueError(f"unknown canonical derivation {which!r}") from None
    return WindowedLinearMap(R, {v: rule(v) for v in basis_window(R)}, 0)


def _pair_admitted(params: Params, x: BasisVector, y: BasisVector, R: int) -> bool:
    if abs(x.degree + y.degree) <= R:
        return True
    return not bracket(params, Element({x: ONE}), Element({y: ONE}))


def is_derivation(params: Params, D: WindowedLinearMap) -> list[tuple[BasisVector, BasisVector, Element]]:
    """Leibniz residuals D([x,y]) - [D x, y] - [x, D y] that do not vanish.

    Only basis pairs whose needed evaluations lie in D's window are checked.
    """
    R = D.radius
    window = basis_window(R)
    out = []
    for x in window:
        ex = Element({x: ONE})
        Dx = D.at(x)
        for y in window:
            if not _pair_admitted(params, x, y, R):
                continue
            ey = Element({y: ONE})
            res = D(bracket(params, ex, ey)) - bracket(params, Dx, ey) - bracket(params, ex, D.at(y))
            if res:
                out.append((x, y, res))
    return out


@dataclass
class DerivationSolveReport:
    params: Params
    degree_shift: int
    raw_dimension: int
    certified_dimension: int
    basis: list[WindowedLinearMap]
    interior_radius: int
    nullspace: NullspaceBasis = field(repr=False, default=None)


def _columns(R: int):
    cols = []
    for v in basis_window(R):
        for t in ("L", "I"):
            cols.append((v, t))
    return cols


def solve_derivations(params: Params, k: int, R: int, interior_margin: int) -> DerivationSolveReport:
    """Solve the Leibniz rule for homogeneous maps of shift k on |degree| <= R."""
    if R < interior_margin + 2:
        raise WindowTooSmallError(f"radius {R} < margin {interior_margin} + 2")
    ib = IntegralBracket(params)
    cols = _columns(R)
    index = {c: j for j, c in enumerate(cols)}
    window = basis_window(R)
    rows = []
    for xi, x in enumerate(window):
        for y in window[xi + 1:]:
            m, n = x.degree, y.degree
            out: dict[str, dict[int, object]] = {"L": {}, "I": {}}

            def put(tag, col, c):
                if not c:
                    return
                row = out[tag]
                s = row.get(col, 0) + c
                if s:
                    row[col] = s
                else:
                    row.pop(col, None)

            cxy = ib.coef(x.tag, m, y.tag, n)
            if cxy:
                if abs(m + n) > R:
                    continue
                w = BasisVector(ib.target(x.tag, y.tag), m + n)
                for t in ("L", "I"):
                    put(t, index[(w, t)], cxy)
            for t in ("L", "I"):
                # -[D x, y]: D x has component t_{m+k}
                put(ib.target(t, y.tag), index[(x, t)], -ib.coef(t, m + k, y.tag, n))
                # -[x, D y]
                put(ib.target(x.tag, t), index[(y, t)], -ib.coef(x.tag, m, t, n + k))
            rows.extend(r for r in out.values() if r)
    if not rows:
        raise WindowTooSmallError("no Leibniz constraint fits in the window")
    rows.sort(key=len)
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    vectors = ech.nullspace(len(cols))
    inner_r = R - interior_margin
    interior = [j for j, (v, _) in enumerate(cols) if abs(v.degree) <= inner_r]
    ns = NullspaceBasis(cols, vectors, interior, equations=len(rows))
    basis = [_vector_to_map(ns, vec, R, k) for vec in vectors]
    return DerivationSolveReport(
        params=params,
        degree_shift=k,
        raw_dimension=ns.raw_dimension,
        certified_dimension=ns.certified_dimension,
        basis=basis,
        interior_radius=inner_r,
        nullspace=ns,
    )


def _vector_to_map(ns: NullspaceBasis, vec, R: int, k: int) -> WindowedLinearMap:
    vals: dict[BasisVector, dict] = {}
    for j, c in vec.items():
        v, t = ns.columns[j]
        vals.setdefault(v, {})[BasisVector(t, v.degree + k)] = as_scalar(c)
    return WindowedLinearMap(R, {v: Element(d) for v, d in vals.items()}, k)


def map_vector(D: WindowedLinearMap, columns, k: int) -> dict[int, Scalar]:
    """Coordinates of a shift-k map in the solver's column layout."""
    vec = {}
    for j, (v, t) in enumerate(columns):
        if abs(v.degree) > D.radius:
            continue
        c = D.at(v).coefficient(BasisVector(t, v.degree + k))
        if c:
            vec[j] = c
    return vec


def in_solution_space(report: DerivationSolveReport, D: WindowedLinearMap) -> bool:
    """Whether D, restricted to the interior window, lies in the certified space."""
    ns = report.nullspace
    k = report.degree_shift
    keep = set(ns.interior)
    target = {j: c for j, c in map_vector(D, ns.columns, k).items() if j in keep}
    return in_span(target, ns.restricted())


def certified_rank(report: DerivationSolveReport) -> int:
    return rank(report.nullspace.restricted())


def expected_derivation_dimension(params: Params, k: int) -> int | None:
    """Dimension of the shift-k derivation space implied by the known
    classification (inner derivations plus D1, D2, D3 where defined).

    Only meaningful for normalized parameters, 0 <= Re(a) < 1; returns None
    otherwise.
    """
    a, b = params.a, params.b
    if not (0 <= a.re < 1):
        return None
    # ad L_k never vanishes; ad I_k vanishes iff b = 0 and a + k = 0
    dim = 1 + (0 if (b == 0 and a + k == 0) else 1)
    if k == 0:
        dim += 1  # D1
        if a == 0 and b == 0:
            dim += 2  # D2_00, D3
        elif a == 0 and b in (1, 2):
            dim += 1  # D2_01 / D2_02
    return dim
