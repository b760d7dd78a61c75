"""Commutative post-Lie products on W(a,b).

A commutative post-Lie structure is a bilinear product x o y with

    (i)   x o y = y o x
    (ii)  [x,y] o z = x o (y o z) - y o (x o z)
    (iii) x o [y,z] = [x o y, z] + [y, x o z]

Every such product is a biderivation, so the sweep below enumerates the
solved biderivation spaces and shows that no nonzero direction survives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .bider import BiderSolveReport, WindowedBilinearMap, decompose, solve_biderivations
from .linalg import SparseEchelon, integral_row, rank
from .scalar import ONE
from .wab import BasisVector, Element, Params, bracket

__all__ = [
    "PostLieCandidate",
    "Witness",
    "Direction",
    "PostLieVerdict",
    "check_postlie",
    "iter_witnesses",
    "first_witness",
    "triviality_sweep",
]

AXIOMS = ("commutativity", "leibniz_like", "derivation_in_second")


@dataclass(frozen=True)
class PostLieCandidate:
    params: Params
    product: WindowedBilinearMap

    def __post_init__(self):
        if self.product.radius < 3:
            raise ValueError("product window radius must be at least 3")


@dataclass(frozen=True)
class Witness:
    axiom: str
    args: tuple[BasisVector, ...]
    residual: Element

    def __post_init__(self):
        if not self.residual:
            raise ValueError("a witness needs a nonzero residual")

    def __str__(self) -> str:
        args = ", ".join(str(v) for v in self.args)
        return f"{self.axiom}({args}): {self.residual}"


def _tuples(radius: int, n: int) -> Iterator[tuple[BasisVector, ...]]:
    degs = range(-radius, radius + 1)
    for ds in itertools.product(degs, repeat=n):
        for tags in itertools.product("LI", repeat=n):
            yield tuple(BasisVector(t, d) for t, d in zip(tags, ds))


def _prod(f: WindowedBilinearMap, x: Element, y: Element) -> Element | None:
    try:
        return f(x, y)
    except KeyError:
        return None


def iter_witnesses(c: PostLieCandidate, search_radius: int | None = None) -> Iterator[Witness]:
    """All axiom violations, axiom by axiom, each in lexicographic (m, n, t) order.

    Instances needing a product value outside the window are skipped.
    """
    f, params = c.product, c.params
    r = f.radius if search_radius is None else min(search_radius, f.radius)
    br = lambda p, q: bracket(params, p, q)  # noqa: E731
    e = lambda v: Element({v: ONE})  # noqa: E731
    for x, y in _tuples(r, 2):
        res = f.at(x, y) - f.at(y, x)
        if res:
            yield Witness("commutativity", (x, y), res)
    for x, y, z in _tuples(r, 3):
        ex, ey, ez = e(x), e(y), e(z)
        lhs = _prod(f, br(ex, ey), ez)
        yz, xz = f.at(y, z), f.at(x, z)
        r1, r2 = _prod(f, ex, yz), _prod(f, ey, xz)
        if lhs is None or r1 is None or r2 is None:
            continue
        res = lhs - (r1 - r2)
        if res:
            yield Witness("leibniz_like", (x, y, z), res)
    for x, y, z in _tuples(r, 3):
        ex, ey, ez = e(x), e(y), e(z)
        lhs = _prod(f, ex, br(ey, ez))
        if lhs is None:
            continue
        res = lhs - br(f.at(x, y), ez) - br(ey, f.at(x, z))
        if res:
            yield Witness("derivation_in_second", (x, y, z), res)


def check_postlie(c: PostLieCandidate, search_radius: int | None = None) -> list[Witness]:
    return list(iter_witnesses(c, search_radius))


def first_witness(c: PostLieCandidate, search_radius: int = 3) -> Witness | None:
    return next(iter_witnesses(c, search_radius), None)


# -- the triviality sweep -----------------------------------------------------------


@dataclass
class Direction:
    degree_shift: int
    index: int
    witness: Witness | None


@dataclass
class PostLieVerdict:
    params: Params
    directions: list[Direction]
    commutative_dimension: int
    leibniz_rank: int
    quadratic_terms_vanish: bool
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.errors
            and all(d.witness is not None for d in self.directions)
            and self.quadratic_terms_vanish
            and self.leibniz_rank == self.commutative_dimension
        )


def _certified_directions(report: BiderSolveReport) -> list[WindowedBilinearMap]:
    """Subset of the solved basis whose interior restrictions are independent."""
    keep = report.nullspace.interior
    ech = SparseEchelon()
    out = []
    for vec, f in zip(report.nullspace.restricted(keep), report.basis):
        if ech.add(integral_row(vec)):
            out.append(f)
    return out


def _coords(e: Element, tag: tuple) -> dict:
    return {tag + (v,): c for v, c in e.items()}


def _combine(maps: list[WindowedBilinearMap], coeffs: dict[int, object]) -> WindowedBilinearMap:
    out = None
    for j, c in coeffs.items():
        term = maps[j] * c
        out = term if out is None else out + term
    return out


def triviality_sweep(
    params: Params, k_range: Iterable[int], R: int, interior_margin: int = 2, search_radius: int = 3
) -> PostLieVerdict:
    """Exclude every biderivation direction as a commutative post-Lie product.

    Each certified direction gets a witness.  In addition the argument is
    made for arbitrary combinations on the interior window: commutativity
    cuts the space down linearly; on what remains both composed terms of
    (ii) vanish identically (values lie in span{I} and I-arguments are
    annihilated), so (ii) is linear there and must have trivial kernel.
    """
    directions: list[Direction] = []
    maps: list[WindowedBilinearMap] = []
    errors: list[str] = []
    for k in k_range:
        try:
            report = solve_biderivations(params, k, R, interior_margin)
        except Exception as exc:  # reported, not raised
            errors.append(f"k={k}: {exc}")
            continue
        for idx, f in enumerate(_certified_directions(report)):
            w = first_witness(PostLieCandidate(params, f), search_radius)
            directions.append(Direction(k, idx, w))
            maps.append(f)

    inner_r = R - interior_margin

    # commutative combinations: kernel of c -> sum_j c_j (g_j - g_j^op)
    skew_rows: dict = {}
    for j, g in enumerate(maps):
        g_minus, _ = decompose(g.restrict(inner_r))
        for (x, y), val in g_minus.values.items():
            for key, c in _coords(val, (x, y)).items():
                skew_rows.setdefault(key, {})[j] = c
    ech = SparseEchelon()
    for row in skew_rows.values():
        ech.add(integral_row(row))
    combos = ech.nullspace(len(maps))
    comm = [_combine(maps, c) for c in combos]

    quadratic_ok = True
    for h in comm:
        for (x, y), val in h.restrict(inner_r).values.items():
            if x.tag == "I" or y.tag == "I" or any(v.tag != "I" for v in val):
                quadratic_ok = False

    # left side of (ii), [x,y] o z, as a linear function of the combination
    lhs_vectors = []
    for h in comm:
        vec: dict = {}
        for x, y, z in _tuples(min(search_radius, inner_r), 3):
            xy = bracket(params, Element({x: ONE}), Element({y: ONE}))
            val = _prod(h, xy, Element({z: ONE}))
            if val:
                vec.update(_coords(val, (x, y, z)))
        lhs_vectors.append(vec)
    keys = {key: i for i, key in enumerate(sorted({k for v in lhs_vectors for k in v}, key=str))}
    leibniz_rank = rank([{keys[k]: c for k, c in v.items()} for v in lhs_vectors])

    return PostLieVerdict(
        params=params,
        directions=directions,
        commutative_dimension=len(comm),
        leibniz_rank=leibniz_rank,
        quadratic_terms_vanish=quadratic_ok,
        errors=errors,
    )
