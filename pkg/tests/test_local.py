import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import Curve, count_squares_brute, hilbert_by_search

from chatelet.brauer import BrauerGenerator, BrauerKind, classify, ev_at_point
from chatelet.corpus import load_bundled, random_split_surface, two_quadratics_surface
from chatelet.errors import (
    EmptyRealLocusError,
    NotOnCurveError,
    NotRamifiedError,
    ReducibleError,
    TwoTorsionError,
)
from chatelet.local import (
    CurveLocal,
    ab_experiment,
    count_square_values,
    ev_image,
    ev_image_real,
    fiber_solvable,
    locally_solvable,
    norm_ratio_experiment,
    two_div_criterion,
)
from chatelet.padic import REAL
from chatelet.poly import parse_poly
from chatelet.surface import bad_places_split, candidate_bad_places, new_surface, surface_from_dict
from chatelet.symbols import Inv2

ZERO, HALF = Inv2.ZERO, Inv2.HALF
HOLDS_EXAMPLE = new_surface(17, "3*(x^2-7)*(17*x^2-43)")
FAILS_AT_7 = new_surface(17, "3*(x^2-7)*(17*x^2-301)")


def _gen(s):
    (gen,) = classify(s).generators
    return gen


def test_fiber_solvable_examples():
    assert fiber_solvable(HOLDS_EXAMPLE, 1, 3)  # the conic y^2 - 17 z^2 = 468 w^2, and 468 is a square in Q_3
    assert fiber_solvable(HOLDS_EXAMPLE, None, 7)
    for root in (0, 1, 2):
        assert fiber_solvable(new_surface(-1, "x*(x-1)*(x-2)"), root, REAL)


def test_fiber_solvable_sign_at_real_place():
    s = new_surface(-1, "x*(x-1)*(x-2)")
    assert fiber_solvable(s, Fraction(1, 2), REAL)  # P(1/2) = 3/8 > 0
    assert not fiber_solvable(s, Fraction(3, 2), REAL)  # P(3/2) = -3/8 < 0


def test_fiber_solvable_against_solution_search():
    rng = random.Random(200)
    checked = 0
    while checked < 200:
        s = random_split_surface(rng) if rng.random() < 0.5 else two_quadratics_surface(rng)[0]
        x0 = Fraction(rng.randint(-30, 30), rng.randint(1, 6))
        p = rng.choice([2, 3, 5, 7])
        value = s.P(x0)
        if value == 0:
            continue
        assert fiber_solvable(s, x0, p) == (hilbert_by_search(s.a, value, p) == 0)
        checked += 1


def test_locally_solvable_examples():
    assert locally_solvable(FAILS_AT_7, 3)
    assert locally_solvable(FAILS_AT_7, 17)
    assert not locally_solvable(new_surface(-1, "-x^4-1"), REAL)
    assert locally_solvable(new_surface(-1, "x^4+1"), REAL)
    assert locally_solvable(new_surface(-1, "x^3-2"), REAL)


def test_locally_solvable_detects_empty_p_adic_locus():
    # Q_3(i) is unramified, so (-1, b)_3 = v_3(b)/2; here v_3(P(x)) is odd on all of P^1(Q_3)
    s = new_surface(-1, "3*(x^2+1)*(x^2+4)")
    assert not locally_solvable(s, 3)
    assert not any(fiber_solvable(s, Fraction(k, 3**j), 3) for k in range(-100, 100) for j in range(3))
    assert not fiber_solvable(s, None, 3)
    assert locally_solvable(s, 5) and locally_solvable(s, REAL)


def test_ev_image_examples():
    im = ev_image(HOLDS_EXAMPLE, _gen(HOLDS_EXAMPLE), 17, 24)
    assert set(im.values) == {HALF} and im.determined
    im = ev_image(FAILS_AT_7, _gen(FAILS_AT_7), 7, 24)
    assert set(im.values) == {ZERO, HALF} and im.determined
    im = ev_image(HOLDS_EXAMPLE, _gen(HOLDS_EXAMPLE), 43, 24)
    assert set(im.values) == {ZERO} and im.determined


def test_ev_image_at_shallow_depth_finds_a_subset():
    for depth in range(3):
        im = ev_image(HOLDS_EXAMPLE, _gen(HOLDS_EXAMPLE), 17, depth)
        assert set(im.values) <= {HALF}


def _corpus_images(depth):
    for entry in load_bundled():
        s = surface_from_dict(entry)
        brauer = classify(s)
        if brauer.kind is BrauerKind.Trivial:
            continue
        places = set(candidate_bad_places(s))
        if s.is_split():
            places |= {b.prime for b in bad_places_split(s)}
        for gen in brauer.generators:
            for p in sorted(places):
                if locally_solvable(s, p):
                    yield (entry["name"], gen.name, p), s, gen, ev_image(s, gen, p, depth)


@pytest.mark.slow
def test_ev_image_is_stable_under_deeper_search_and_witnesses_check_out():
    shallow = {key: im for key, _, _, im in _corpus_images(20)}
    for key, s, gen, im in _corpus_images(24):
        p = key[2]
        for value, x0 in im.witnesses.items():
            assert fiber_solvable(s, x0, p)
            assert ev_at_point(gen, x0, p) == value, key
        if im.determined and shallow[key].determined:
            assert im.values == shallow[key].values, key


def test_ev_image_real_examples():
    s = new_surface(17, "x*(x-1)*(x-2)")
    for gen in classify(s).generators:
        assert set(ev_image_real(s, gen).values) == {ZERO}
    s = new_surface(-1, "x*(x-1)*(x-2)")
    gen_a = classify(s).generators[0]
    im = ev_image_real(s, gen_a)
    assert set(im.values) == {ZERO, HALF}
    for value, x0 in im.witnesses.items():
        assert ev_at_point(gen_a, x0, REAL) == value


def test_ev_image_real_empty_locus():
    s = new_surface(-1, "-(x^2+1)*(x^2+2)")
    assert classify(s).kind is BrauerKind.Trivial
    gen = BrauerGenerator("C", Fraction(-1), (parse_poly("x^2+1"), parse_poly("-(x^2+2)")))
    with pytest.raises(EmptyRealLocusError):
        ev_image_real(s, gen)


def test_two_div_examples():
    E = CurveLocal(1, -1, 5)
    assert not two_div_criterion(E, (2, None))  # 2 is a nonsquare mod 5
    assert two_div_criterion(E, (Fraction(1, 25), None))
    with pytest.raises(TwoTorsionError):
        two_div_criterion(E, (0, 0))
    with pytest.raises(NotOnCurveError):
        two_div_criterion(E, (2, 1))
    with pytest.raises(NotOnCurveError):
        two_div_criterion(CurveLocal(1, -1, 7), (3, None))  # 24 is a nonsquare mod 7
    with pytest.raises(ValueError):
        CurveLocal(1, 1, 5)


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([5, 7, 11, 13]),
    st.integers(2, 40),
    st.fractions(min_value=-20, max_value=20, max_denominator=6),
    st.fractions(min_value=1, max_value=20, max_denominator=6),
)
def test_doubled_points_pass_the_criterion(p, lam, x0, y0):
    cubic = x0 * (x0 - 1) * (x0 - lam)
    if cubic == 0 or lam % p in (0, 1):
        return
    curve = Curve(y0 * y0 / cubic, lam)
    if curve.c.numerator % p == 0 or curve.c.denominator % p == 0:
        return
    doubled = curve.double((x0, y0))
    if doubled is None or doubled[1] == 0:
        return
    assert two_div_criterion(CurveLocal(curve.c, curve.lam, p), doubled)


def test_norm_ratio_examples():
    res = norm_ratio_experiment(-1, 1, 10)
    assert res.density() == Fraction(1, 2) and res.undecided == 0
    assert res.total == 2**9
    lo, hi = norm_ratio_experiment(2, 0, 12).bracket()
    assert lo <= Fraction(1, 2) <= hi and hi - lo <= Fraction(1, 2**8)
    res = norm_ratio_experiment(-1, 1, 1)
    assert res.undecided == res.total
    with pytest.raises(NotRamifiedError):
        norm_ratio_experiment(5, 1, 6)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([-1, 2, -2, 3, 7, 6, 10, -5]), st.integers(6, 11))
def test_odd_classes_are_exactly_half_norms(a, n):
    res = norm_ratio_experiment(a, 1, n)
    assert res.undecided == 0 and res.density() == Fraction(1, 2)


def test_ab_experiment_examples():
    ab = ab_experiment(-1, 3, 12)
    for part in (ab.A, ab.B):
        lo, hi = part.bracket()
        assert 0.45 <= lo and hi <= 0.55
    ab = ab_experiment(2, 5, 12)
    assert ab.A_minus_B.decided_in > 0 and ab.B_minus_A.decided_in > 0
    with pytest.raises(NotRamifiedError):
        ab_experiment(5, 3, 8)


def test_count_square_values_examples():
    assert count_square_values(3, parse_poly("x^2+1")) == 1
    assert count_square_values(7, parse_poly("x^2+1")) == 3
    assert count_square_values(5, parse_poly("x^2+x+1")) == 2
    with pytest.raises(ReducibleError):
        count_square_values(5, parse_poly("x^2-1"))


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_count_square_values_matches_brute_force(q):
    squares = {x * x % q for x in range(1, q)}
    for b in range(q):
        for c in range(q):
            if (b * b - 4 * c) % q in squares or (b * b - 4 * c) % q == 0:
                continue
            assert count_square_values(q, (b, c)) == count_squares_brute(q, b, c) == (q - 1) // 2
