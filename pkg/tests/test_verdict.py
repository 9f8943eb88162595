import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chatelet.brauer import BrauerKind, classify
from chatelet.corpus import WORKED_EXAMPLES, random_split_surface, split_corpus
from chatelet.errors import NotSplitError, WrongShapeError
from chatelet.galois import GaloisType, quadratic_disc
from chatelet.local import ev_image
from chatelet.padic import REAL, Place, is_rational_square
from chatelet.surface import new_surface, surface_from_dict
from chatelet.symbols import Inv2
from chatelet.verdict import (
    REPORT_SCHEMA,
    PerpetualKind,
    VerdictKind,
    perpetual_classify,
    wa_decide,
    wa_split,
    wa_two_quadratics_quickcheck,
)

HOLDS_EXAMPLE = surface_from_dict(WORKED_EXAMPLES[0])
FAILS_AT_7 = surface_from_dict(WORKED_EXAMPLES[1])


def test_wa_split_examples():
    report = wa_split(new_surface(17, "x*(x-1)*(x-2)"))
    assert report.verdict.kind is VerdictKind.Fails
    assert list(report.verdict.witnesses) == [Place(17)]

    witnesses = set(wa_split(new_surface(-1, "x*(x-1)*(x-3)")).verdict.witnesses)
    assert {REAL, Place(2)} <= witnesses

    # 2 is bad (every cross-ratio of {0, 1, -1, oo} is divisible by 2) and 5 is a nonsquare in Q_2
    witnesses = wa_split(new_surface(5, "x*(x-1)*(x+1)")).verdict.witnesses
    assert list(witnesses) == [Place(2), Place(5)]

    with pytest.raises(NotSplitError):
        wa_split(HOLDS_EXAMPLE)


def test_wa_split_fails_at_2_is_confirmed_by_images():
    s = new_surface(5, "x*(x-1)*(x+1)")
    images = [ev_image(s, g, 2, 24) for g in classify(s).generators]
    assert any(im.is_full() for im in images)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_split_case_never_holds_over_Q(seed):
    s = random_split_surface(random.Random(seed))
    report = wa_split(s)
    assert report.verdict.kind is VerdictKind.Fails
    assert report.verdict.witnesses


def test_wa_decide_agrees_with_wa_split_on_corpus():
    for entry in split_corpus(seed=2024, count=50):
        s = surface_from_dict(entry)
        full, criterion = wa_decide(s), wa_split(s)
        assert full.verdict.kind is criterion.verdict.kind
        assert full.verdict.witnesses == criterion.verdict.witnesses


def test_quickcheck_examples():
    assert wa_two_quadratics_quickcheck(HOLDS_EXAMPLE) is None
    assert wa_two_quadratics_quickcheck(new_surface(5, "(x^2-2)*(x^2-3)")) == 5
    assert wa_two_quadratics_quickcheck(new_surface(3, "(x^2-2)*(x^2+1)")) == 3
    with pytest.raises(WrongShapeError):
        wa_two_quadratics_quickcheck(new_surface(5, "x*(x-1)*(x-2)"))


def test_quickcheck_primes_have_full_images():
    for a, P in [(5, "(x^2-2)*(x^2-3)"), (3, "(x^2-2)*(x^2+1)"), (-7, "(x^2+1)*(x^2-3)"), (15, "2*(x^2+x+1)*(x^2+1)")]:
        s = new_surface(a, P)
        if classify(s).kind is not BrauerKind.Z2:
            continue
        p = wa_two_quadratics_quickcheck(s)
        if p is not None:
            (gen,) = classify(s).generators
            assert ev_image(s, gen, p, 24).is_full()


def test_wa_decide_worked_examples():
    report = wa_decide(HOLDS_EXAMPLE)
    assert report.verdict.kind is VerdictKind.Holds
    images = {str(pi.place): pi.image.sorted_values() for pi in report.images}
    for p in ("2", "7", "43"):
        assert images[p] == [Inv2.ZERO]
    for p in ("3", "17"):
        assert images[p] == [Inv2.HALF]

    report = wa_decide(FAILS_AT_7)
    assert report.verdict.kind is VerdictKind.Fails
    assert list(report.verdict.witnesses) == [Place(7)]


def test_wa_decide_trivial_and_unsolvable():
    report = wa_decide(new_surface(2, "(x^2-2)*(x^2-3)"))
    assert report.verdict.kind is VerdictKind.Holds
    assert any("Colliot-Thelene" in str(step["outputs"]) for step in report.justification)

    report = wa_decide(new_surface(-1, "3*(x^2+1)*(x^2+4)"))
    assert report.verdict.kind is VerdictKind.NoAdelicPoints
    assert Place(3) in report.unsolvable


def test_wa_decide_undetermined_is_inconclusive():
    report = wa_decide(FAILS_AT_7, depth=0)
    assert report.verdict.kind in (VerdictKind.Inconclusive, VerdictKind.Fails)
    if report.verdict.kind is VerdictKind.Fails:
        assert all(pi.image.is_full() for pi in report.images if pi.place in report.verdict.witnesses)


def _check_report_invariants(report):
    kind = report.verdict.kind
    if kind is VerdictKind.Fails:
        assert report.verdict.witnesses
        for place in report.verdict.witnesses:
            assert any(pi.image.is_full() for pi in report.images if pi.place == place)
    if kind is VerdictKind.Holds and report.images:
        assert all(pi.image.is_singleton() for pi in report.images)
        if report.brauer.kind is BrauerKind.Z2:
            assert Inv2.total(pi.image.single() for pi in report.images) == Inv2.ZERO


def test_reports_validate_against_schema():
    for entry in WORKED_EXAMPLES + split_corpus(seed=5, count=10):
        report = wa_decide(surface_from_dict(entry))
        jsonschema.validate(report.to_dict(), REPORT_SCHEMA)
        _check_report_invariants(report)
        assert report.render()


def test_report_dict_shape():
    d = wa_decide(FAILS_AT_7).to_dict()
    assert d["verdict"] == "fails" and d["witnesses"] == ["7"]
    assert d["brauer"] == "Z2"
    by_place = {row["place"]: row for row in d["places"]}
    assert by_place["7"]["image"] == ["0", "1/2"]
    assert by_place["7"]["determined"] is True


@pytest.mark.parametrize(
    "a, P, kind, galois",
    [
        (2, "(x^2-2)*(x^2-3)", PerpetualKind.PerpetualWA, GaloisType.V4),
        (17, "3*(x^2-7)*(17*x^2-43)", PerpetualKind.ReducesToQuadraticCase, GaloisType.V4),
        (-3, "(x-1)*(x^3-2)", PerpetualKind.PerpetualWA, GaloisType.S3),
        (17, "x*(x-1)*(x-2)", PerpetualKind.FailsOverExtension, GaloisType.C1),
        (5, "x^3-3*x+1", PerpetualKind.FailsOverExtension, GaloisType.C3),
        (3, "x^4+x+1", PerpetualKind.FailsOverExtension, GaloisType.S4),
        (2, "x^4-2", PerpetualKind.PerpetualWA, GaloisType.D8),
        (-1, "x^4+5*x+5", PerpetualKind.FailsOverExtension, GaloisType.C4),
        (-55, "x^4+5*x+5", PerpetualKind.ReducesToQuadraticCase, GaloisType.C4),
    ],
)
def test_perpetual_examples(a, P, kind, galois):
    r = perpetual_classify(new_surface(a, P))
    assert r.galois is galois
    assert r.classification is kind, r.detail


def test_perpetual_positive_factor_has_sqrt_a_in_residue_field():
    # for V4/D8 positives, some quadratic factor over Q(sqrt a) has sqrt a in its root field;
    # over Q this shows up as a rational quadratic factor F with disc(F) * a a square, or a quartic
    # splitting over Q(sqrt a)
    for a, P in [(2, "(x^2-2)*(x^2-3)"), (3, "(x^2-3)*(x^2+1)"), (-1, "(x^2+1)*(x^2-2)")]:
        s = new_surface(a, P)
        r = perpetual_classify(s)
        assert r.classification is PerpetualKind.PerpetualWA
        assert any(is_rational_square(quadratic_disc(f) * s.a) for f in s.factorization.of_degree(2))
        assert classify(s).kind is BrauerKind.Trivial
