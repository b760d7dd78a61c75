import itertools
import random
from fractions import Fraction

import pytest

import oracle
from wabid.bider import (
    FamilyMismatchError,
    FamilySpec,
    WindowedBilinearMap,
    classify,
    decompose,
    delta_generator,
    delta_system_solve,
    family_map,
    is_biderivation,
    op_map,
    predicted_families,
    solve_biderivations,
    transport,
)
from wabid.linalg import in_span
from wabid.linmap import WindowTooSmallError
from wabid.wab import BasisVector, Element, I, L, Params, basis_key

Lv = lambda m: BasisVector("L", m)  # noqa: E731
Iv = lambda m: BasisVector("I", m)  # noqa: E731
W00, W01, W0m1 = Params(0, 0), Params(0, 1), Params(0, -1)


def test_family_examples():
    theta = family_map(W0m1, FamilySpec("Theta", mu=1), 4)
    assert theta.at(Lv(1), Lv(0)) == I(1)
    psi = family_map(W00, FamilySpec("Psi", omega={2: 5}), 4)
    assert psi.at(Lv(1), Lv(1)) == I(4, 5)
    assert psi.at(Lv(0), Iv(3)) == Element()
    ups = family_map(W01, FamilySpec("Upsilon", omega={0: 1}), 4)
    assert ups.at(Lv(1), Lv(-1)) == Element()
    assert ups.at(Lv(1), Lv(2)) == I(3, 3)


def test_family_shift_metadata():
    assert family_map(Params(2, -1), FamilySpec("Theta"), 4).shift == -2
    assert family_map(W00, FamilySpec("Psi", omega={3: 1}), 4).shift == 3
    assert family_map(W00, FamilySpec("Psi", omega={1: 1, 2: 1}), 4).shift is None
    assert family_map(W00, FamilySpec("Inner", lam=2), 4).shift == 0


@pytest.mark.parametrize(
    "params, spec",
    [
        (W01, FamilySpec("Psi", omega={0: 1})),
        (W00, FamilySpec("Upsilon", omega={0: 1})),
        (Params(Fraction(1, 2), -1), FamilySpec("Theta")),
        (W00, FamilySpec("Theta")),
    ],
)
def test_family_mismatch(params, spec):
    with pytest.raises(FamilyMismatchError):
        family_map(params, spec, 3)


def test_unknown_family_kind():
    with pytest.raises(ValueError):
        FamilySpec("Zeta")


def test_is_biderivation_examples():
    for p in (W00, Params(Fraction(1, 3), Fraction(5, 2)), Params(2, -1)):
        assert is_biderivation(p, family_map(p, FamilySpec("Inner", lam=3), 6)) == []
    assert is_biderivation(W0m1, family_map(W0m1, FamilySpec("Theta", mu=1), 6)) == []
    forced = family_map(W00, FamilySpec("Theta", mu=1), 6, validate=False)
    bad = is_biderivation(W00, forced)
    assert bad
    (x, y, z), side, res = bad[0]
    assert side in ("first", "second") and res


def _as_oracle_map(f: WindowedBilinearMap):
    def call(u, v):
        val = f.at(BasisVector(*u), BasisVector(*v))
        return {(w.tag, w.degree): oracle.num(c.re) for w, c in val.items()}

    return call


def _canonical(t, side):
    x, y, z = t
    if side == "first":
        x, y = sorted((x, y), key=basis_key)
    else:
        y, z = sorted((y, z), key=basis_key)
    return x, y, z


@pytest.mark.parametrize(
    "params, spec, validate",
    [
        (W00, FamilySpec("Theta", mu=1), False),
        (W01, FamilySpec("Psi", omega={1: 1}), False),
        (W01, FamilySpec("Upsilon", omega={1: 2, -1: 1}), True),
        (Params(2, -1), FamilySpec("Theta", mu=3), True),
    ],
)
def test_is_biderivation_matches_reference(params, spec, validate):
    R = 3
    f = family_map(params, spec, R, validate=validate)
    triples = list(itertools.product(oracle.basis(R), repeat=3))
    ref = oracle.biderivation_residuals(params.a, params.b, _as_oracle_map(f), R, triples)
    # the first identity is antisymmetric in (x, y), the second in (y, z)
    want = {(_canonical(tuple(BasisVector(*v) for v in t), side), side) for t, side, _ in ref}
    got = {(_canonical(t, side), side) for t, side, _ in is_biderivation(params, f)}
    assert got == want
    assert bool(want) == (not validate)


def test_op_map():
    psi = family_map(W00, FamilySpec("Psi", omega={0: 1, 2: 3}), 4)
    assert op_map(psi) == psi
    ups = family_map(Params(Fraction(1, 2), 1), FamilySpec("Upsilon", omega={1: 1}), 4)
    assert op_map(ups) == ups
    inner = family_map(W00, FamilySpec("Inner", lam=1), 4)
    assert op_map(inner) == family_map(W00, FamilySpec("Inner", lam=-1), 4)
    theta = family_map(Params(2, -1), FamilySpec("Theta", mu=1), 4)
    assert op_map(theta) == -theta


def test_decompose():
    inner = family_map(W00, FamilySpec("Inner", lam=Fraction(2, 3)), 4)
    psi = family_map(W00, FamilySpec("Psi", omega={0: 1, -1: 4}), 4)
    fm, fp = decompose(inner + psi)
    assert fm == inner and fp == psi
    assert decompose(psi) == (psi * 0, psi)
    fm, fp = decompose(inner)
    assert fm == inner and fp.is_zero()


def test_decompose_random_map():
    rng = random.Random(11)
    keys = [(Lv(m), Iv(n)) for m in range(-2, 3) for n in range(-2, 3)]
    f = WindowedBilinearMap(2, {k: L(0, rng.randint(-5, 5)) + I(1, rng.randint(-5, 5)) for k in keys})
    fm, fp = decompose(f)
    assert fm + fp == f
    assert op_map(fm) == -fm and op_map(fp) == fp


def test_transport_identity():
    f = family_map(W00, FamilySpec("Psi", omega={1: 2}), 4)
    assert transport(W00, 0, f) == f


@pytest.mark.parametrize("k", [1, 2, 3])
def test_transport_psi_reindexes_omega(k):
    omega = {-1: 2, 0: 1, 3: Fraction(1, 2)}
    f = family_map(W00, FamilySpec("Psi", omega=omega), 6)
    g = transport(W00, k, f)
    want = family_map(Params(k, 0), FamilySpec("Psi", omega={t - k: mu for t, mu in omega.items()}), 6 - k)
    assert g == want
    assert is_biderivation(Params(k, 0), g) == []


@pytest.mark.parametrize("a", [1, 2, -1])
def test_transport_theta(a):
    f = family_map(W0m1, FamilySpec("Theta", mu=Fraction(3, 2)), 6)
    g = transport(W0m1, a, f)
    assert g == family_map(Params(a, -1), FamilySpec("Theta", mu=Fraction(3, 2)), 6 - abs(a))
    assert g.shift == -a


def test_transport_preserves_non_biderivations():
    forced = family_map(W01, FamilySpec("Psi", omega={0: 1}), 5, validate=False)
    assert is_biderivation(W01, forced)
    assert is_biderivation(Params(1, 1), transport(W01, 1, forced))


def test_transport_window_too_small():
    f = family_map(W00, FamilySpec("Psi", omega={0: 1}), 1)
    with pytest.raises(WindowTooSmallError):
        transport(W00, 2, f)


@pytest.mark.parametrize(
    "params, k, want",
    [
        (Params(Fraction(1, 3), Fraction(5, 2)), 0, 1),
        (Params(Fraction(1, 3), Fraction(5, 2)), 3, 0),
        (Params(Fraction(1, 2), 0), 2, 1),
        (Params(Fraction(1, 2), 0), 0, 2),
        (W01, 1, 1),
        (W01, 0, 2),
        (Params(2, -1), -2, 1),
        (Params(2, -1), 0, 1),
        (Params(2, -1), 1, 0),
        (Params(0, 2), 0, 1),
    ],
    ids=str,
)
def test_solver_examples(params, k, want):
    rep = solve_biderivations(params, k, 6, 2)
    assert rep.certified_dimension == want
    assert rep.family_residual == 0
    assert rep.certified_dimension <= rep.raw_dimension == len(rep.basis)


def test_w02_only_inner():
    for k in (-3, -1, 1, 2):
        assert solve_biderivations(Params(0, 2), k, 6, 2).certified_dimension == 0


@pytest.mark.parametrize(
    "a, b, k",
    [(0, 0, 0), (0, 0, 2), (0, 1, 1), (0, -1, 0), (2, -1, -2), (0, 2, 0), ("1/2", 1, 0)],
)
def test_raw_dimension_matches_reference(a, b, k):
    rep = solve_biderivations(Params(Fraction(a), Fraction(b)), k, 3, 1)
    assert rep.raw_dimension == oracle.biderivation_raw_dimension(a, b, k, 3)


def test_report_contains_families():
    p = Params(Fraction(1, 2), 0)
    rep = solve_biderivations(p, 0, 6, 2)
    assert rep.contains(family_map(p, FamilySpec("Inner", lam=5), 6))
    assert rep.contains(family_map(p, FamilySpec("Psi", omega={0: 2}), 6))
    assert not rep.contains(family_map(p, FamilySpec("Upsilon", omega={0: 1}), 6, validate=False))


def test_solved_basis_members_are_biderivations():
    for p, k in [(W00, 0), (W0m1, 0), (W01, -1)]:
        rep = solve_biderivations(p, k, 5, 2)
        for f in rep.basis:
            assert is_biderivation(p, f) == []
            fm, fp = decompose(f)
            assert is_biderivation(p, fm) == [] and is_biderivation(p, fp) == []


def test_predicted_families():
    assert [s.kind for s in predicted_families(W00, 0)] == ["Inner", "Psi"]
    assert [s.kind for s in predicted_families(Params(2, -1), -2)] == ["Theta"]
    assert predicted_families(Params(Fraction(1, 2), -1), 0)[0].kind == "Inner"
    assert len(predicted_families(Params(Fraction(1, 2), -1), 0)) == 1
    assert predicted_families(Params(3, 2), 1) == []


def test_classify_examples():
    v = classify(W0m1, range(-4, 5), 6, 2)
    assert v.passed and v.table() == {k: (2 if k == 0 else 0) for k in range(-4, 5)}
    v = classify(Params(Fraction(1, 3), Fraction(5, 2)), range(-4, 5), 6, 2)
    assert v.passed and v.table() == {k: (1 if k == 0 else 0) for k in range(-4, 5)}


def test_upsilon_coefficient_at_nonintegral_a():
    # b = 1, a = 1/2: the shift-k generator has f(L_m, L_n) proportional to (m+n+k+a) I_{m+n+k}
    p = Params(Fraction(1, 2), 1)
    for k in (-2, 1, 3):
        rep = solve_biderivations(p, k, 6, 2)
        assert rep.certified_dimension == 1
        r = 6 - 2
        f = rep.basis[0].restrict(r)
        ratios = set()
        for (x, y), val in f.values.items():
            assert x.tag == "L" and y.tag == "L"
            w = BasisVector("I", x.degree + y.degree + k)
            assert set(val) == {w}
            ratios.add(val.coefficient(w) / (x.degree + y.degree + k + Fraction(1, 2)))
        assert len(ratios) == 1


def test_delta_system():
    ns = delta_system_solve(6, 2)
    assert ns.certified_dimension == 1
    gen = delta_generator(ns)
    keep = set(ns.interior)
    g = {j: c for j, c in gen.items() if j in keep}
    assert in_span(g, ns.restricted())
    assert in_span({j: c * Fraction(-7, 3) for j, c in g.items()}, ns.restricted())


def test_delta_system_has_no_offdiagonal_solution():
    ns = delta_system_solve(7, 2)
    j = ns.columns.index(("k", 3, 5))
    assert j in set(ns.interior)
    assert all(vec.get(j, 0) == 0 for vec in ns.restricted())


def test_delta_window_too_small():
    with pytest.raises(WindowTooSmallError):
        delta_system_solve(3, 2)
