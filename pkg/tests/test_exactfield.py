from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from flagorbits.errors import DivisionByZero, NotPositive, NotReal, ParseError, TowerMismatch
from flagorbits.exactfield import (
    I,
    ONE,
    ZERO,
    TowerField,
    adjoin_sqrt,
    parse,
    scalar,
    sign_of_real,
    sqrt,
    to_complex,
    to_text,
    tower_from_radicands,
)

Q = TowerField.base()
T2, R2 = adjoin_sqrt(Q, 2)
T23, R3 = adjoin_sqrt(T2, 3)
R6 = R2 * R3


def test_gaussian_norm():
    z = Fraction(1, 2) + I
    assert z * z.conjugate() == Fraction(5, 4)
    assert (Fraction(1, 2) + I) * (Fraction(1, 2) - I) == Fraction(5, 4)


def test_sqrt2_squared():
    assert R2 * R2 == 2
    assert T2.degree() == 4


def test_unit_over_sqrt2():
    u = (1 + I) / R2
    assert u * u.conjugate() == 1


def test_conjugate_examples():
    assert I.conjugate() == -I
    assert R2.conjugate() == R2
    x = Fraction(3, 4) * I * R2
    assert x.conjugate() == -x


def test_sign_examples():
    assert sign_of_real(ZERO) == 0
    assert sign_of_real(1 - R2) == -1
    assert sign_of_real(3 - 2 * R2) == 1


def test_sign_rejects_complex():
    with pytest.raises(NotReal):
        sign_of_real(1 + I)


def test_perfect_squares_do_not_extend():
    t, s = adjoin_sqrt(Q, 4)
    assert t is Q and s == 2
    t, s = adjoin_sqrt(T2, 3 + 2 * R2)
    assert t is T2 and s == 1 + R2
    # sqrt 6 = sqrt 2 * sqrt 3 once both are present
    t, s = adjoin_sqrt(T23, 6)
    assert t is T23 and s == R6


def test_squarefree_reduction():
    t, s = adjoin_sqrt(Q, 8)
    assert t is T2 and s == 2 * R2
    t, s = adjoin_sqrt(Q, Fraction(1, 2))
    assert s * s == Fraction(1, 2) and sign_of_real(s) == 1


def test_nested_radical():
    t, s = adjoin_sqrt(T2, 2 + R2)
    assert t.depth == 2
    assert s * s == 2 + R2
    assert sign_of_real(s) == 1
    assert abs(to_complex(s) - complex(mpmath.sqrt(2 + mpmath.sqrt(2)))) < 1e-12


def test_adjoin_rejects_nonpositive():
    with pytest.raises(NotPositive):
        adjoin_sqrt(Q, -2)
    with pytest.raises(NotPositive):
        adjoin_sqrt(T2, 1 - R2)
    with pytest.raises(NotReal):
        sqrt(I)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        R2 / (R2 - R2)


def test_tower_mismatch():
    a = sqrt(3)[1]
    b = sqrt(5)[1]
    with pytest.raises(TowerMismatch):
        a + b


def test_parse_render_examples():
    x = Fraction(1, 2) + Fraction(1, 2) * I * R2
    assert to_text(x) == "1/2 + 1/2*i*r1"
    assert parse("1/2 + 1/2*i*r1", T2) == x
    assert parse(" -3 *i ", Q) == -3 * I
    for bad in ["", "1 +", "2 3", "r1", "1/0", "x"]:
        with pytest.raises(ParseError):
            parse(bad, Q)


def test_tower_from_radicands_roundtrip():
    t, _ = adjoin_sqrt(T2, 2 + R2)
    assert tower_from_radicands(["2", "2 + r1"]) is t


coef = st.integers(-40, 40)


def _elem(a, b, c, d):
    return scalar(a) + b * R2 + c * R3 + d * R6


@settings(max_examples=300, deadline=None)
@given(coef, coef, coef, coef)
def test_sign_matches_high_precision(a, b, c, d):
    # independent route: 60-digit float evaluation
    mpmath.mp.dps = 60
    v = a + b * mpmath.sqrt(2) + c * mpmath.sqrt(3) + d * mpmath.sqrt(6)
    expect = 0 if v == 0 else (1 if v > 0 else -1)
    assert sign_of_real(_elem(a, b, c, d)) == expect


@settings(max_examples=150, deadline=None)
@given(coef, coef, coef, coef, coef, coef, coef, coef)
def test_field_axioms(a, b, c, d, e, f, g, h):
    x = _elem(a, b, c, d) + I * e
    y = _elem(f, g, h, 1)
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.conjugate().conjugate() == x
    if not y.is_zero():
        assert (x / y) * y == x
    assert x * (y + 1) == x * y + x


@settings(max_examples=150, deadline=None)
@given(coef, coef, coef, coef, coef, coef, coef, coef)
def test_sign_multiplicative(a, b, c, d, e, f, g, h):
    x, y = _elem(a, b, c, d), _elem(e, f, g, h)
    assert sign_of_real(x * y) == sign_of_real(x) * sign_of_real(y)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 60), st.integers(0, 20), st.integers(1, 20))
def test_sqrt_squares_back(a, b, den):
    x = Fraction(a, den) + b * R2  # positive by construction
    t, s = adjoin_sqrt(T2, x)
    assert s * s == x
    assert sign_of_real(s) == 1


@settings(max_examples=150, deadline=None)
@given(coef, coef, coef, coef, coef, st.integers(1, 9))
def test_text_roundtrip(a, b, c, d, e, den):
    x = (_elem(a, b, c, d) + I * e * R3) / den
    assert parse(to_text(x), T23) == x
