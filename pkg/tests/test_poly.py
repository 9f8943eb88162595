from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chatelet.errors import ParseError
from chatelet.poly import Poly, as_fraction, parse_poly, resultant

rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))
polys = st.lists(rationals, min_size=1, max_size=6).map(Poly)


# golden tests for the expression grammar
@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("3*(x^2-7)*(17*x^2-43)", (903, 0, -486, 0, 51)),
        ("3*(x^2-7)*(17*x^2-7*43)", (6321, 0, -1260, 0, 51)),
        ("x^3-x", (0, -1, 0, 1)),
        ("x**2 + 1", (1, 0, 1)),
        ("-x^4-1", (-1, 0, 0, 0, -1)),
        ("x/2 + 1/3", (Fraction(1, 3), Fraction(1, 2))),
        ("-(x-1)^2", (-1, 2, -1)),
        ("2^3*x", (0, 8)),
        ("((x))", (0, 1)),
        ("x^0", (1,)),
        ("-2^2", (-4,)),
        ("  7  ", (7,)),
    ],
)
def test_grammar_golden(text, coeffs):
    assert parse_poly(text) == Poly(coeffs)


@pytest.mark.parametrize(
    "text, position",
    [
        ("x^2+*3", 4),
        ("(x-1", 4),
        ("x^-1", 2),
        ("x/(x-1)", 1),
        ("x/0", 1),
        ("y+1", 0),
        ("x^x", 2),
        ("", 0),
        ("x 2", 2),
    ],
)
def test_grammar_errors_point_at_offender(text, position):
    with pytest.raises(ParseError) as exc:
        parse_poly(text)
    assert exc.value.position == position
    if text:
        assert "^" in str(exc.value)


def test_as_fraction():
    assert as_fraction("-43/17") == Fraction(-43, 17)
    assert as_fraction(5) == 5
    with pytest.raises(ParseError):
        as_fraction("1/0")
    with pytest.raises(ParseError):
        as_fraction("1.5")
    with pytest.raises(TypeError):
        as_fraction(True)


@given(polys)
def test_printing_round_trips(f):
    assert parse_poly(f.to_expr()) == f


@given(polys, polys)
def test_divmod_identity(f, g):
    if g.is_zero():
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


@given(polys, rationals)
def test_taylor_and_shift(f, r):
    shifted = f.shift(r)
    assert shifted == Poly(f.taylor(r))
    for x in (0, 1, -2, Fraction(1, 3)):
        assert shifted(x) == f(x + r)


@given(polys)
def test_chart_at_infinity_is_even_power_multiple(f):
    if f.is_zero():
        return
    g = f.at_infinity_chart()
    even = f.degree + f.degree % 2
    for w in (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 5), Fraction(-3, 7)):
        assert g(w) == f(1 / w) * w**even


def test_discriminants_and_resultants():
    assert parse_poly("x^2-7").discriminant() == 28
    assert parse_poly("x^3-2").discriminant() == -108
    assert parse_poly("x^4+x+1").discriminant() == 229
    assert resultant(parse_poly("x-2"), parse_poly("x^2-7")) == -3
    assert parse_poly("(x-1)*(x+1)*(x-3)").real_root_count() == 3
    assert parse_poly("x^4+1").real_root_count() == 0


def test_integer_primitive_and_content():
    k, ints = parse_poly("x/2 + 1/3").integer_primitive()
    assert ints == [2, 3] and k == Fraction(1, 6)
    assert parse_poly("3*x^2 + 9").content_primes() == {3}


def test_from_roots():
    assert Poly.from_roots([0, 1, 2], 5) == parse_poly("5*x*(x-1)*(x-2)")
