import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import GRID
from wabid.scalar import Scalar, ScalarParseError
from wabid.wab import (
    BasisVector,
    Element,
    I,
    L,
    Params,
    basis_window,
    bracket,
    check_jacobi,
    check_shift_homomorphism,
    jacobi_violations,
    shift_iso,
)


def test_bracket_examples():
    for p in (Params(0, 0), Params(Fraction(1, 3), Fraction(5, 2)), Params(Scalar(1, 2), -1)):
        assert bracket(p, L(2), L(1)) == L(3)
        assert bracket(p, I(3), I(7)) == Element()
    assert bracket(Params(0, 0), L(1), I(2)) == I(3, -2)


def test_bracket_i_l_by_antisymmetry():
    p = Params(Fraction(1, 2), 3)
    # [I_m, L_n] = (m + a + b n) I_{m+n}
    assert bracket(p, I(2), L(-1)) == I(1, Fraction(2 + Fraction(1, 2) - 3))
    assert bracket(p, I(2), L(-1)) == -bracket(p, L(-1), I(2))


def test_params_normalization():
    p, k = Params(Fraction(7, 3), 1).normalized()
    assert (p, k) == (Params(Fraction(1, 3), 1), -2)
    p, k = Params(Fraction(-1, 2), 0).normalized()
    assert (p, k) == (Params(Fraction(1, 2), 0), 1)
    assert str(Params(Fraction(1, 3), Fraction(5, 2))) == "W(1/3,5/2)"


def test_element_canonical_form():
    e = Element({BasisVector("L", 1): 0, BasisVector("I", 2): 3})
    assert len(e) == 1
    assert L(1) - L(1) == Element()
    assert not (L(1) - L(1))
    assert L(1) + I(2) == I(2) + L(1)


def test_element_text_round_trip():
    e = L(-1, Fraction(3, 2)) + I(4, Scalar(0, 1))
    assert str(e) == "3/2*L[-1] + (0+1/1i)*I[4]"
    assert Element.parse(str(e)) == e
    assert Element.parse("0") == Element()
    with pytest.raises(ScalarParseError):
        Element.parse("3*X[1]")


def test_jacobi_examples():
    for p in GRID:
        assert check_jacobi(p, L(1), L(2), L(3)) == Element()
    assert check_jacobi(Params(Fraction(1, 2), 3), L(1), L(2), I(0)) == Element()
    x, y = L(1) + I(-2, 3), L(4, Fraction(1, 2))
    assert check_jacobi(Params(Fraction(1, 3), 2), x, x, y) == Element()


def test_jacobi_sweep_matches_direct_check():
    for p in (Params(Fraction(1, 2), -1), Params(3, 2)):
        assert jacobi_violations(p, 3) == []
        for x in basis_window(2):
            for y in basis_window(2):
                for z in basis_window(1):
                    ex, ey, ez = (Element({v: 1}) for v in (x, y, z))
                    assert check_jacobi(p, ex, ey, ez) == Element()


def test_jacobi_sweep_detects_broken_bracket(monkeypatch):
    import wabid.wab as wab

    orig = wab.IntegralBracket.coef

    def broken(self, tu, m, tv, n):
        c = orig(self, tu, m, tv, n)
        return c + 1 if (tu, tv) == ("L", "I") else c

    monkeypatch.setattr(wab.IntegralBracket, "coef", broken)
    assert jacobi_violations(Params(0, 0), 2)


def test_shift_examples():
    assert shift_iso(1, I(5)) == I(4)
    x = L(3) + I(-1, 7)
    assert shift_iso(0, x) == x
    assert shift_iso(2, L(3) + I(0, 2)) == L(3) + I(-2, 2)


def test_shift_homomorphism_examples():
    p = Params(0, 0)
    # both sides are -I_1
    assert shift_iso(1, bracket(p, L(1), I(1))) == I(1, -1)
    assert bracket(p.shifted(1), L(1), I(0)) == I(1, -1)
    assert check_shift_homomorphism(p, 1, L(1), I(1)) == Element()
    rng = random.Random(7)
    q = Params(Fraction(1, 2), -1)
    win = basis_window(6)
    for _ in range(200):
        x, y = (Element({rng.choice(win): 1}) for _ in range(2))
        assert check_shift_homomorphism(q, 3, x, y) == Element()
        assert check_shift_homomorphism(q, 0, x, y) == Element()


@pytest.mark.parametrize("p", [GRID[0], GRID[5], GRID[8], GRID[11]], ids=str)
def test_shift_homomorphism_radius8(p):
    win = [Element({v: 1}) for v in basis_window(8)]
    for k in range(-3, 4):
        for x in win:
            for y in win:
                assert not check_shift_homomorphism(p, k, x, y)


def test_bracket_against_reference():
    rng = random.Random(3)
    for p in GRID:
        a, b = oracle.num(p.a), oracle.num(p.b)
        for _ in range(30):
            x = {(rng.choice("LI"), rng.randint(-4, 4)): rng.randint(-3, 3) or 1 for _ in range(3)}
            y = {(rng.choice("LI"), rng.randint(-4, 4)): rng.randint(-3, 3) or 1 for _ in range(3)}
            want = oracle.bracket(a, b, x, y)
            got = bracket(p, Element({BasisVector(*k): v for k, v in x.items()}), Element({BasisVector(*k): v for k, v in y.items()}))
            assert {(v.tag, v.degree): Fraction(str(c)) for v, c in got.items()} == {
                k: Fraction(str(v)) for k, v in want.items()
            }


# -- properties -----------------------------------------------------------------------

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)
params = st.builds(Params, fractions, fractions)
basis = st.builds(BasisVector, st.sampled_from("LI"), st.integers(-6, 6))
elements = st.dictionaries(basis, fractions, max_size=4).map(Element)


@settings(max_examples=150)
@given(params, elements, elements, elements, fractions)
def test_bracket_bilinear(p, x, y, z, c):
    assert bracket(p, x + y * c, z) == bracket(p, x, z) + bracket(p, y, z) * c
    assert bracket(p, z, x + y * c) == bracket(p, z, x) + bracket(p, z, y) * c


@settings(max_examples=150)
@given(params, elements, elements)
def test_bracket_antisymmetric(p, x, y):
    assert bracket(p, x, x) == Element()
    assert bracket(p, x, y) == -bracket(p, y, x)


@settings(max_examples=150)
@given(params, basis, basis)
def test_bracket_grading(p, u, v):
    out = bracket(p, Element({u: 1}), Element({v: 1}))
    assert out.degrees() <= {u.degree + v.degree}


@settings(max_examples=100)
@given(params, elements, elements, elements)
def test_jacobi_random_elements(p, x, y, z):
    assert check_jacobi(p, x, y, z) == Element()


@settings(max_examples=100)
@given(params, st.integers(-3, 3), elements, elements)
def test_shift_iso_homomorphism(p, k, x, y):
    assert check_shift_homomorphism(p, k, x, y) == Element()
    assert shift_iso(-k, shift_iso(k, x)) == x
