"""Bilinear maps on a window of W(a,b), biderivations and their classification.

A bilinear map f is a biderivation when it is a derivation in each slot:

    f([x,y], z) = [x, f(y,z)] + [f(x,z), y]          (first)
    f(x, [y,z]) = [f(x,y), z] + [y, f(x,z)]          (second)

Maps are solved one degree shift k at a time (f(e_m, e_n) supported in
degree m+n+k).  The closed-form families are

    Psi_Omega   (b = 0):        f(L_m, L_n) = sum_k mu_k I_{m+n+k}
    Upsilon^a   (b = 1):        f(L_m, L_n) = sum_k (m+n+k+a) mu_k I_{m+n+k}
    Theta^a_mu  (b = -1, a in Z): f(L_m, L_n) = (m-n) mu I_{m+n-a}

all vanishing whenever an argument is an I, plus the inner maps lambda[x,y].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import GaussInt, NullspaceBasis, SparseEchelon, in_span, rank, span_defect
from .linmap import WindowTooSmallError
from .scalar import ONE, Scalar, as_scalar
from .wab import (
    BasisVector,
    Element,
    IntegralBracket,
    Params,
    basis_window,
    bracket,
    shift_iso,
)

__all__ = [
    "WindowedBilinearMap",
    "FamilySpec",
    "FamilyMismatchError",
    "BiderSolveReport",
    "ClassificationVerdict",
    "family_map",
    "predicted_families",
    "is_biderivation",
    "op_map",
    "decompose",
    "transport",
    "solve_biderivations",
    "classify",
    "delta_system_solve",
    "delta_generator",
    "map_vector",
]

Pair = tuple[BasisVector, BasisVector]
_ZERO_ELEMENT = Element()


@dataclass(frozen=True)
class WindowedBilinearMap:
    radius: int
    values: Mapping[Pair, Element]
    shift: int | None = None

    def __post_init__(self):
        clean = {}
        for (x, y), e in self.values.items():
            if abs(x.degree) > self.radius or abs(y.degree) > self.radius:
                raise ValueError(f"key ({x}, {y}) outside radius {self.radius}")
            if self.shift is not None:
                want = x.degree + y.degree + self.shift
                if any(d != want for d in e.degrees()):
                    raise ValueError(f"value at ({x}, {y}) not of shift {self.shift}")
            if e:
                clean[(x, y)] = e
        object.__setattr__(self, "values", clean)

    def in_window(self, x: BasisVector, y: BasisVector) -> bool:
        return abs(x.degree) <= self.radius and abs(y.degree) <= self.radius

    def at(self, x: BasisVector, y: BasisVector) -> Element:
        if not self.in_window(x, y):
            raise KeyError(f"({x}, {y}) outside window of radius {self.radius}")
        return self.values.get((x, y), _ZERO_ELEMENT)

    def __call__(self, x: Element, y: Element) -> Element:
        out = Element()
        for u, cu in x.items():
            for v, cv in y.items():
                out = out + self.at(u, v) * (cu * cv)
        return out

    def _combine(self, other: WindowedBilinearMap, sign: int) -> WindowedBilinearMap:
        r = min(self.radius, other.radius)
        vals = {}
        for key in set(self.values) | set(other.values):
            if abs(key[0].degree) > r or abs(key[1].degree) > r:
                continue
            a = self.values.get(key, _ZERO_ELEMENT)
            b = other.values.get(key, _ZERO_ELEMENT)
            vals[key] = a + b if sign > 0 else a - b
        shift = self.shift if self.shift == other.shift else None
        return WindowedBilinearMap(r, vals, shift)

    def __add__(self, other: WindowedBilinearMap) -> WindowedBilinearMap:
        return self._combine(other, 1)

    def __sub__(self, other: WindowedBilinearMap) -> WindowedBilinearMap:
        return self._combine(other, -1)

    def __mul__(self, c) -> WindowedBilinearMap:
        c = as_scalar(c)
        return WindowedBilinearMap(self.radius, {k: e * c for k, e in self.values.items()}, self.shift)

    __rmul__ = __mul__

    def __neg__(self) -> WindowedBilinearMap:
        return self * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, WindowedBilinearMap):
            return NotImplemented
        return self.radius == other.radius and self.values == other.values

    def is_zero(self) -> bool:
        return not self.values

    def restrict(self, radius: int) -> WindowedBilinearMap:
        vals = {
            (x, y): e
            for (x, y), e in self.values.items()
            if abs(x.degree) <= radius and abs(y.degree) <= radius
        }
        return WindowedBilinearMap(radius, vals, self.shift)

    def with_inferred_shift(self) -> WindowedBilinearMap:
        shifts = {d - x.degree - y.degree for (x, y), e in self.values.items() for d in e.degrees()}
        shift = shifts.pop() if len(shifts) == 1 else (0 if not shifts else None)
        return WindowedBilinearMap(self.radius, self.values, shift)


# -- families -------------------------------------------------------------------


class FamilyMismatchError(ValueError):
    """A family was requested on an algebra where it is not defined."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str  # "Inner", "Psi", "Upsilon", "Theta"
    lam: Scalar = ONE
    omega: Mapping[int, Scalar] = field(default_factory=dict)
    mu: Scalar = ONE

    def __post_init__(self):
        if self.kind not in ("Inner", "Psi", "Upsilon", "Theta"):
            raise ValueError(f"unknown family {self.kind!r}")
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "mu", as_scalar(self.mu))
        omega = {int(k): as_scalar(v) for k, v in dict(self.omega).items()}
        object.__setattr__(self, "omega", {k: v for k, v in sorted(omega.items()) if v})

    def __hash__(self):
        return hash((self.kind, self.lam, tuple(self.omega.items()), self.mu))

    def validate(self, params: Params) -> None:
        b = params.b
        if self.kind == "Psi" and b != 0:
            raise FamilyMismatchError("Psi requires b = 0")
        if self.kind == "Upsilon" and b != 1:
            raise FamilyMismatchError("Upsilon requires b = 1")
        if self.kind == "Theta" and not (b == -1 and params.a.is_integer()):
            raise FamilyMismatchError("Theta requires b = -1 and integer a")

    def __str__(self) -> str:
        if self.kind == "Inner":
            return f"Inner(lambda={self.lam})"
        if self.kind == "Theta":
            return f"Theta(mu={self.mu})"
        om = ",".join(f"{k}:{v}" for k, v in self.omega.items())
        return f"{self.kind}({{{om}}})"


def family_map(params: Params, spec: FamilySpec, R: int, *, validate: bool = True) -> WindowedBilinearMap:
    """Tabulate a family member on the window |degree| <= R."""
    if validate:
        spec.validate(params)
    window = basis_window(R)
    vals: dict[Pair, Element] = {}
    shift: int | None = None
    if spec.kind == "Inner":
        for x in window:
            ex = Element({x: ONE})
            for y in window:
                vals[(x, y)] = bracket(params, ex, Element({y: ONE})) * spec.lam
        shift = 0
    else:
        ls = [v for v in window if v.tag == "L"]
        for x in ls:
            for y in ls:
                m, n = x.degree, y.degree
                if spec.kind == "Psi":
                    terms = {BasisVector("I", m + n + k): mu for k, mu in spec.omega.items()}
                elif spec.kind == "Upsilon":
                    terms = {
                        BasisVector("I", m + n + k): (params.a + (m + n + k)) * mu
                        for k, mu in spec.omega.items()
                    }
                else:
                    a = int(params.a.re) if params.a.is_integer() else None
                    if a is None:
                        raise FamilyMismatchError("Theta needs an integer a to place its output")
                    terms = {BasisVector("I", m + n - a): spec.mu * (m - n)}
                vals[(x, y)] = Element(terms)
        if spec.kind == "Theta":
            shift = -int(params.a.re)
        elif len(spec.omega) == 1:
            shift = next(iter(spec.omega))
        elif not spec.omega:
            shift = 0
    return WindowedBilinearMap(R, vals, shift)


def predicted_families(params: Params, k: int) -> list[FamilySpec]:
    """Directions of the shift-k biderivation space in the closed-form classification."""
    a, b = params.a, params.b
    out = []
    if k == 0:
        out.append(FamilySpec("Inner"))
    if b == 0:
        out.append(FamilySpec("Psi", omega={k: 1}))
    elif b == 1:
        out.append(FamilySpec("Upsilon", omega={k: 1}))
    elif b == -1 and a.is_integer() and k == -int(a.re):
        out.append(FamilySpec("Theta"))
    return out


# -- checking -------------------------------------------------------------------


def _common_den(values: Iterable[Element]) -> int:
    d = 1
    for e in values:
        for c in e._terms.values():
            d = math.lcm(d, c.re.denominator, c.im.denominator)
    return d


def _int_table(f: WindowedBilinearMap, den: int) -> dict[Pair, dict[BasisVector, object]]:
    table = {}
    for key, e in f.values.items():
        row = {}
        for v, c in e.items():
            re, im = int(c.re * den), int(c.im * den)
            row[v] = GaussInt(re, im) if im else re
        table[key] = row
    return table


def _acc(out: dict, v: BasisVector, c) -> None:
    if not c:
        return
    s = out.get(v, 0) + c
    if s:
        out[v] = s
    else:
        out.pop(v, None)


def _to_element(vec: dict, den: int) -> Element:
    terms = {}
    for v, c in vec.items():
        if isinstance(c, GaussInt):
            terms[v] = Scalar(Fraction(c.re, den), Fraction(c.im, den))
        else:
            terms[v] = Scalar(Fraction(c, den))
    return Element(terms)


def is_biderivation(params: Params, f: WindowedBilinearMap) -> list[tuple[tuple, str, Element]]:
    """Nonzero residuals of both biderivation identities on the window.

    A triple is checked only when every value of f and every bracket the
    identity needs lies inside the window.  The first identity is
    antisymmetric in (x, y) and the second in (y, z), so each is checked
    once per unordered pair.  Residual = left side minus right side.
    """
    R = f.radius
    ib = IntegralBracket(params)
    s = ib.scale
    den = _common_den(f.values.values())
    F = _int_table(f, den)
    empty: dict = {}
    window = basis_window(R)
    nw = len(window)
    out = []

    def left(u: BasisVector, vec: dict, res: dict, sign: int) -> None:
        # res += sign * [u, vec]
        for w, c in vec.items():
            cc = ib.coef(u.tag, u.degree, w.tag, w.degree)
            if cc:
                _acc(res, BasisVector(ib.target(u.tag, w.tag), u.degree + w.degree), sign * cc * c)

    def right(vec: dict, u: BasisVector, res: dict, sign: int) -> None:
        # res += sign * [vec, u]
        for w, c in vec.items():
            cc = ib.coef(w.tag, w.degree, u.tag, u.degree)
            if cc:
                _acc(res, BasisVector(ib.target(w.tag, u.tag), w.degree + u.degree), sign * cc * c)

    for i in range(nw):
        x = window[i]
        for j in range(nw):
            y = window[j]
            for l in range(nw):
                z = window[l]
                if i < j:
                    cxy = ib.coef(x.tag, x.degree, y.tag, y.degree)
                    ok = not cxy or abs(x.degree + y.degree) <= R
                    if ok:
                        res: dict = {}
                        if cxy:
                            w = BasisVector(ib.target(x.tag, y.tag), x.degree + y.degree)
                            for v, c in F.get((w, z), empty).items():
                                _acc(res, v, cxy * c)
                        left(x, F.get((y, z), empty), res, -1)
                        right(F.get((x, z), empty), y, res, -1)
                        if res:
                            out.append(((x, y, z), "first", _to_element(res, den * s)))
                if j < l:
                    cyz = ib.coef(y.tag, y.degree, z.tag, z.degree)
                    ok = not cyz or abs(y.degree + z.degree) <= R
                    if ok:
                        res = {}
                        if cyz:
                            w = BasisVector(ib.target(y.tag, z.tag), y.degree + z.degree)
                            for v, c in F.get((x, w), empty).items():
                                _acc(res, v, cyz * c)
                        right(F.get((x, y), empty), z, res, -1)
                        left(y, F.get((x, z), empty), res, -1)
                        if res:
                            out.append(((x, y, z), "second", _to_element(res, den * s)))
    return out


def op_map(f: WindowedBilinearMap) -> WindowedBilinearMap:
    """f^op(x, y) = f(y, x)."""
    return WindowedBilinearMap(f.radius, {(y, x): e for (x, y), e in f.values.items()}, f.shift)


def decompose(f: WindowedBilinearMap) -> tuple[WindowedBilinearMap, WindowedBilinearMap]:
    """(f_minus, f_plus) = ((f - f^op)/2, (f + f^op)/2)."""
    half = Scalar(Fraction(1, 2))
    fo = op_map(f)
    return (f - fo) * half, (f + fo) * half


def transport(params: Params, k: int, f: WindowedBilinearMap) -> WindowedBilinearMap:
    """f^sigma on W(a+k, b), where sigma(L_m) = L_m, sigma(I_m) = I_{m-k}.

    f^sigma(sigma x, sigma y) = sigma(f(x, y)); the window shrinks by |k| so
    that every preimage is tabulated.
    """
    R = f.radius - abs(k)
    if R < 0:
        raise WindowTooSmallError(f"cannot transport radius {f.radius} by {k}")

    def pre(v: BasisVector) -> BasisVector:
        return v if v.tag == "L" else BasisVector("I", v.degree + k)

    window = basis_window(R)
    vals = {(X, Y): shift_iso(k, f.at(pre(X), pre(Y))) for X in window for Y in window}
    return WindowedBilinearMap(R, vals).with_inferred_shift()


# -- solving --------------------------------------------------------------------


def _columns(R: int) -> list[tuple[BasisVector, BasisVector, str]]:
    window = basis_window(R)
    return [(x, y, t) for x in window for y in window for t in ("L", "I")]


def map_vector(f: WindowedBilinearMap, columns, k: int) -> dict[int, Scalar]:
    """Coordinates of the shift-k component of f in a solver column layout."""
    vec = {}
    for j, (x, y, t) in enumerate(columns):
        if not f.in_window(x, y):
            continue
        c = f.at(x, y).coefficient(BasisVector(t, x.degree + y.degree + k))
        if c:
            vec[j] = c
    return vec


def _assemble(params: Params, k: int, R: int) -> tuple[list, list[dict]]:
    ib = IntegralBracket(params)
    coef, target = ib.coef, ib.target
    window = basis_window(R)
    nw = len(window)
    cols = _columns(R)
    pos = {v: i for i, v in enumerate(window)}
    tag_ix = {"L": 0, "I": 1}

    def col(x: BasisVector, y: BasisVector, t: str) -> int:
        return (pos[x] * nw + pos[y]) * 2 + tag_ix[t]

    def in_win(v: BasisVector) -> bool:
        return abs(v.degree) <= R

    rows: list[dict] = []

    def emit(out):
        for r in out.values():
            if r:
                rows.append(r)

    def put(out, tag, j, c):
        if not c:
            return
        row = out[tag]
        s = row.get(j, 0) + c
        if s:
            row[j] = s
        else:
            del row[j]

    for i, x in enumerate(window):
        m = x.degree
        for jj, y in enumerate(window):
            n = y.degree
            for ll, z in enumerate(window):
                t = z.degree
                if i < jj:
                    # f([x,y],z) - [x, f(y,z)] - [f(x,z), y]
                    cxy = coef(x.tag, m, y.tag, n)
                    if not cxy or abs(m + n) <= R:
                        out = {"L": {}, "I": {}}
                        if cxy:
                            w = BasisVector(target(x.tag, y.tag), m + n)
                            for to in ("L", "I"):
                                put(out, to, col(w, z, to), cxy)
                        for to in ("L", "I"):
                            put(out, target(x.tag, to), col(y, z, to), -coef(x.tag, m, to, n + t + k))
                            put(out, target(to, y.tag), col(x, z, to), -coef(to, m + t + k, y.tag, n))
                        emit(out)
                if jj < ll:
                    # f(x,[y,z]) - [f(x,y), z] - [y, f(x,z)]
                    cyz = coef(y.tag, n, z.tag, t)
                    if not cyz or abs(n + t) <= R:
                        out = {"L": {}, "I": {}}
                        if cyz:
                            w = BasisVector(target(y.tag, z.tag), n + t)
                            for to in ("L", "I"):
                                put(out, to, col(x, w, to), cyz)
                        for to in ("L", "I"):
                            put(out, target(to, z.tag), col(x, y, to), -coef(to, m + n + k, z.tag, t))
                            put(out, target(y.tag, to), col(x, z, to), -coef(y.tag, n, to, m + t + k))
                        emit(out)
    return cols, rows


def _solve_nullspace(params: Params, k: int, R: int, interior_margin: int) -> NullspaceBasis:
    if R < interior_margin + 2:
        raise WindowTooSmallError(f"radius {R} < margin {interior_margin} + 2")
    cols, rows = _assemble(params, k, R)
    if not rows:
        raise WindowTooSmallError("no biderivation constraint fits in the window")
    rows.sort(key=len)
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    vectors = ech.nullspace(len(cols))
    inner_r = R - interior_margin
    interior = [j for j, (x, y, _) in enumerate(cols) if abs(x.degree) <= inner_r and abs(y.degree) <= inner_r]
    return NullspaceBasis(cols, vectors, interior, equations=len(rows))


def _vector_to_map(ns: NullspaceBasis, vec, R: int, k: int) -> WindowedBilinearMap:
    vals: dict[Pair, dict] = {}
    for j, c in vec.items():
        x, y, t = ns.columns[j]
        vals.setdefault((x, y), {})[BasisVector(t, x.degree + y.degree + k)] = as_scalar(c)
    return WindowedBilinearMap(R, {key: Element(d) for key, d in vals.items()}, k)


@dataclass
class BiderSolveReport:
    params: Params
    degree_shift: int
    raw_dimension: int
    certified_dimension: int
    basis: list[WindowedBilinearMap]
    family_residual: int
    predicted: list[FamilySpec] = field(default_factory=list)
    nullspace: NullspaceBasis = field(default=None, repr=False)

    @property
    def predicted_dimension(self) -> int:
        return len(self.predicted)

    @property
    def ok(self) -> bool:
        return self.certified_dimension == self.predicted_dimension and self.family_residual == 0

    def interior_vectors(self) -> list[dict[int, object]]:
        return self.nullspace.restricted()

    def contains(self, f: WindowedBilinearMap) -> bool:
        """Whether the shift component of f, restricted to the interior, is certified."""
        keep = set(self.nullspace.interior)
        vec = {j: c for j, c in map_vector(f, self.nullspace.columns, self.degree_shift).items() if j in keep}
        return in_span(vec, self.interior_vectors())


def solve_biderivations(params: Params, k: int, R: int, interior_margin: int) -> BiderSolveReport:
    """Brute-force shift-k biderivation space on |degree| <= R, compared with
    the predicted family span on the interior window."""
    ns = _solve_nullspace(params, k, R, interior_margin)
    basis = [_vector_to_map(ns, vec, R, k) for vec in ns.vectors]
    predicted = predicted_families(params, k)
    keep = set(ns.interior)
    fam_vecs = []
    for spec in predicted:
        fv = map_vector(family_map(params, spec, R), ns.columns, k)
        fam_vecs.append({j: c for j, c in fv.items() if j in keep})
    certified = ns.restricted()
    return BiderSolveReport(
        params=params,
        degree_shift=k,
        raw_dimension=ns.raw_dimension,
        certified_dimension=rank(certified),
        basis=basis,
        family_residual=span_defect(certified, fam_vecs),
        predicted=predicted,
        nullspace=ns,
    )


@dataclass
class ClassificationVerdict:
    params: Params
    radius: int
    interior_margin: int
    reports: list[BiderSolveReport]
    errors: dict[int, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.ok for r in self.reports)

    def table(self) -> dict[int, int]:
        return {r.degree_shift: r.certified_dimension for r in self.reports}


def classify(params: Params, k_range: Iterable[int], R: int, interior_margin: int) -> ClassificationVerdict:
    reports = [solve_biderivations(params, k, R, interior_margin) for k in k_range]
    return ClassificationVerdict(params, R, interior_margin, reports)


# -- the delta system -------------------------------------------------------------


def delta_system_solve(R: int, interior_margin: int) -> NullspaceBasis:
    """Kernel of (i - m) k_i^(n) = (2n - m - i) h_{m-n+i}^(m), all indices in [-R, R].

    Columns are ("k", i, n) and ("h", i, m).
    """
    if R < interior_margin + 2:
        raise WindowTooSmallError(f"radius {R} < margin {interior_margin} + 2")
    rng = range(-R, R + 1)
    cols = [(name, i, j) for name in ("k", "h") for i in rng for j in rng]
    index = {c: j for j, c in enumerate(cols)}
    ech = SparseEchelon()
    neq = 0
    for m in rng:
        for n in rng:
            for i in rng:
                s = m - n + i
                if abs(s) > R:
                    continue
                row = {}
                a, b = i - m, -(2 * n - m - i)
                if a:
                    row[index[("k", i, n)]] = a
                if b:
                    j = index[("h", s, m)]
                    row[j] = row.get(j, 0) + b
                row = {j: v for j, v in row.items() if v}
                if row:
                    neq += 1
                    ech.add(row)
    if not neq:
        raise WindowTooSmallError("no delta-system equation fits in the window")
    r_in = R - interior_margin
    interior = [j for j, (_, i, n) in enumerate(cols) if abs(i) <= r_in and abs(n) <= r_in]
    return NullspaceBasis(cols, ech.nullspace(len(cols)), interior, equations=neq)


def delta_generator(ns: NullspaceBasis) -> dict[int, Fraction]:
    """k_i^(m) = h_i^(m) = delta_{m,i}, in the column layout of ``ns``."""
    return {j: Fraction(1) for j, (_, i, m) in enumerate(ns.columns) if i == m}
