"""Weak-approximation verdicts for Chatelet surfaces over Q.

Three procedures live here: the split-case criterion (bad places where a is
not a local square, plus the real place when a < 0), the Brauer-Manin
pipeline that computes local evaluation images at every candidate place, and
the classification of surfaces that satisfy weak approximation over every
finite extension.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import primefactors

from chatelet.brauer import BrauerKind, BrauerType, classify
from chatelet.errors import DepthExceededError, NotSplitError, WrongShapeError
from chatelet.galois import (
    GaloisType,
    QuadField,
    galois_group,
    is_square_in_quad,
    quadratic_disc,
    quartic_splits_over_quad,
    sqrt_a_in_splitting_field,
)
from chatelet.local import EvImage, ev_image_at, locally_solvable
from chatelet.padic import DEFAULT_PREC, REAL, Place, legendre, quadratic_extension_type, valuation
from chatelet.poly import Poly
from chatelet.surface import ChateletSurface, bad_places_split, candidate_bad_places
from chatelet.symbols import Inv2

# --------------------------------------------------------------------------
# reports


class VerdictKind(enum.Enum):
    Holds = "holds"
    Fails = "fails"
    NoAdelicPoints = "no_adelic_points"
    Inconclusive = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witnesses: tuple[Place, ...] = ()
    reason: str = ""

    def is_definitive(self) -> bool:
        return self.kind is not VerdictKind.Inconclusive

    def __str__(self) -> str:
        if self.kind is VerdictKind.Fails:
            return f"fails{{{', '.join(str(w) for w in self.witnesses)}}}"
        if self.kind is VerdictKind.Inconclusive:
            return f"inconclusive ({self.reason})"
        return str(self.kind)


@dataclass(frozen=True)
class PlaceImage:
    place: Place
    generator: str
    image: EvImage


@dataclass
class WAReport:
    surface: ChateletSurface
    brauer: BrauerType
    verdict: Verdict
    images: list[PlaceImage] = field(default_factory=list)
    unsolvable: list[Place] = field(default_factory=list)
    justification: list[dict] = field(default_factory=list)

    def image(self, place, generator: Optional[str] = None) -> EvImage:
        place = place if isinstance(place, Place) else Place(int(place))
        for pi in self.images:
            if pi.place == place and (generator is None or pi.generator == generator):
                return pi.image
        raise KeyError(f"no image recorded at {place}")

    def to_dict(self) -> dict:
        return {
            "surface": self.surface.to_dict(),
            "brauer": str(self.brauer),
            "generators": [str(g) for g in self.brauer.generators],
            "places": [
                {
                    "place": str(pi.place),
                    "generator": pi.generator,
                    "image": [str(v) for v in pi.image.sorted_values()],
                    "determined": pi.image.determined,
                    "witness": pi.image.witness_text(),
                }
                for pi in self.images
            ],
            "verdict": str(self.verdict.kind),
            "witnesses": [str(w) for w in self.verdict.witnesses],
            "reason": self.verdict.reason,
            "justification": self.justification,
        }

    def render(self) -> str:
        lines = [f"surface: {self.surface}", f"Br X / Br Q: {self.brauer}"]
        for g in self.brauer.generators:
            lines.append(f"  generator {g}")
        for pi in self.images:
            vals = "{" + ", ".join(str(v) for v in pi.image.sorted_values()) + "}"
            note = "" if pi.image.determined else " (undetermined)"
            lines.append(f"  {str(pi.place):>5} {pi.generator}: {vals}{note}  [{pi.image.witness_text()}]")
        lines.append(f"verdict: {self.verdict}")
        lines.append("justification:")
        for step in self.justification:
            lines.append(f"  - {step['rule']}: {step['outputs']}")
        return "\n".join(lines)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["brauer", "places", "verdict", "witnesses", "justification"],
    "properties": {
        "surface": {
            "type": "object",
            "required": ["a", "P"],
            "properties": {"a": {"type": "string"}, "P": {"type": "string"}},
        },
        "brauer": {"enum": ["Z2xZ2", "Z2", "Trivial"]},
        "generators": {"type": "array", "items": {"type": "string"}},
        "places": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["place", "image", "determined", "witness"],
                "properties": {
                    "place": {"type": "string", "pattern": "^(Real|[0-9]+)$"},
                    "generator": {"enum": ["A", "B", "C"]},
                    "image": {
                        "type": "array",
                        "items": {"enum": ["0", "1/2"]},
                        "minItems": 1,
                        "maxItems": 2,
                        "uniqueItems": True,
                    },
                    "determined": {"type": "boolean"},
                    "witness": {"type": "string"},
                },
            },
        },
        "verdict": {"enum": ["holds", "fails", "no_adelic_points", "inconclusive"]},
        "witnesses": {"type": "array", "items": {"type": "string"}},
        "reason": {"type": "string"},
        "justification": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule", "inputs", "outputs"],
            },
        },
    },
}


def _step(rule: str, inputs, outputs) -> dict:
    return {"rule": rule, "inputs": inputs, "outputs": outputs}


# --------------------------------------------------------------------------
# split case


def _split_witnesses(s: ChateletSurface) -> tuple[list[Place], list]:
    bad = bad_places_split(s)
    witnesses = [REAL] if s.a < 0 else []
    witnesses += [Place(r.prime) for r in bad if r.a_nonsquare_locally]
    return witnesses, bad


def wa_split(s: ChateletSurface) -> WAReport:
    """Split-case criterion: weak approximation fails exactly at bad places where a
    is not a local square, and at the real place when a < 0.
    """
    brauer = classify(s)
    if brauer.kind is not BrauerKind.Z2xZ2:
        raise NotSplitError("P does not split into linear factors over Q")
    witnesses, bad = _split_witnesses(s)
    sf = brauer.form
    steps = [
        _step("split normal form", {"P": s.P.to_expr()}, {"c": str(sf.c), "lambda": str(sf.lam)}),
        _step(
            "bad places",
            {"a": str(s.a)},
            {
                str(r.prime): {
                    "reasons": sorted(str(x) for x in r.reasons),
                    "a_nonsquare_locally": r.a_nonsquare_locally,
                }
                for r in bad
            },
        ),
        _step(
            "split-case criterion",
            {"bad places with a nonsquare": [str(w) for w in witnesses if not w.is_real], "a < 0": s.a < 0},
            {"witnesses": [str(w) for w in witnesses]},
        ),
        _step(
            "corollary over Q",
            {"a": str(s.a)},
            "Q(sqrt a) ramifies at some prime, which is bad with a locally nonsquare, so the witness set is nonempty",
        ),
    ]
    if witnesses:
        verdict = Verdict(VerdictKind.Fails, tuple(witnesses))
    else:
        verdict = Verdict(VerdictKind.Holds)
    return WAReport(s, brauer, verdict, justification=steps)


# --------------------------------------------------------------------------
# two irreducible quadratics


def _two_quadratics(s: ChateletSurface) -> tuple[Poly, Poly]:
    quads = s.factorization.of_degree(2)
    if s.degree != 4 or len(quads) != 2:
        raise WrongShapeError("P is not a constant times two irreducible quadratics")
    if classify(s).kind is not BrauerKind.Z2:
        raise WrongShapeError("the Brauer group is not generated by a single quaternion algebra")
    return quads[0], quads[1]


def _irreducible_mod(f: Poly, p: int) -> bool:
    if any(valuation(c, p) < 0 for c in f.coeffs):
        return False
    d = quadratic_disc(f)
    if valuation(d, p) != 0:
        return False
    return legendre(d.numerator * pow(d.denominator, -1, p), p) == -1


def wa_two_quadratics_quickcheck(s: ChateletSurface, depth: int = DEFAULT_PREC) -> Optional[int]:
    """First odd prime p with v_p(a) odd, both quadratic factors irreducible mod p
    and local points at p. Weak approximation fails at such a p.
    """
    f1, f2 = _two_quadratics(s)
    for p in candidate_bad_places(s):
        if p == 2 or valuation(s.a, p) % 2 == 0:
            continue
        if _irreducible_mod(f1, p) and _irreducible_mod(f2, p) and locally_solvable(s, p, depth):
            return p
    return None


# --------------------------------------------------------------------------
# full pipeline


def _local_solvability(s: ChateletSurface, places: list[Place], depth: int):
    unsolvable, undecided = [], []
    for place in places:
        try:
            if not locally_solvable(s, place, depth):
                unsolvable.append(place)
        except DepthExceededError:
            undecided.append(place)
    return unsolvable, undecided


def _images(s: ChateletSurface, brauer: BrauerType, places: list[Place], depth: int) -> list[PlaceImage]:
    out = []
    for place in places:
        for gen in brauer.generators:
            out.append(PlaceImage(place, gen.name, ev_image_at(s, gen, place, depth)))
    return out


def wa_decide(s: ChateletSurface, depth: int = DEFAULT_PREC) -> WAReport:
    """Decide weak approximation through the Brauer-Manin obstruction."""
    brauer = classify(s)
    places = [REAL] + [Place(p) for p in candidate_bad_places(s)]
    steps = [_step("Brauer group", {"a": str(s.a), "P": s.P.to_expr()}, str(brauer))]

    if brauer.kind is BrauerKind.Z2xZ2:
        report = wa_split(s)
        report.images = _images(s, brauer, places, depth)
        report.justification = steps + report.justification
        return report

    unsolvable, undecided = _local_solvability(s, places, depth)
    steps.append(
        _step(
            "local solvability",
            {"places": [str(p) for p in places]},
            {"unsolvable": [str(p) for p in unsolvable], "undecided": [str(p) for p in undecided]},
        )
    )
    steps.append(_step("good places", {}, "outside the candidate list the surface has smooth reduction and local points"))
    if unsolvable:
        verdict = Verdict(VerdictKind.NoAdelicPoints, reason=f"no local points at {', '.join(map(str, unsolvable))}")
        return WAReport(s, brauer, verdict, [], unsolvable, steps)
    if undecided:
        verdict = Verdict(VerdictKind.Inconclusive, reason=f"local solvability undecided at depth {depth}")
        return WAReport(s, brauer, verdict, [], [], steps)

    if brauer.kind is BrauerKind.Trivial:
        steps.append(
            _step(
                "trivial Brauer group",
                {},
                "Chatelet surfaces with Br X = Br Q satisfy weak approximation (Colliot-Thelene, Sansuc, Swinnerton-Dyer)",
            )
        )
        return WAReport(s, brauer, Verdict(VerdictKind.Holds), [], [], steps)

    images = _images(s, brauer, places, depth)
    full = [pi.place for pi in images if pi.image.is_full()]
    open_places = [pi.place for pi in images if not pi.image.determined and not pi.image.is_full()]
    steps.append(
        _step(
            "evaluation images",
            {"depth": depth},
            {str(pi.place): [str(v) for v in pi.image.sorted_values()] for pi in images},
        )
    )
    if full:
        verdict = Verdict(VerdictKind.Fails, tuple(full))
        steps.append(
            _step(
                "surjective evaluation",
                {"places": [str(p) for p in full]},
                "adjusting the local point at a surjective place keeps the invariant sum 0, "
                "so the Brauer set is nonempty but not all adelic points are approximable",
            )
        )
    elif open_places:
        verdict = Verdict(VerdictKind.Inconclusive, reason=f"images undetermined at depth {depth} at {', '.join(map(str, open_places))}")
    else:
        total = Inv2.total(pi.image.single() for pi in images)
        if total == Inv2.ZERO:
            verdict = Verdict(VerdictKind.Holds)
        else:
            verdict = Verdict(VerdictKind.NoAdelicPoints, reason="the constant invariants sum to 1/2 (Brauer-Manin obstruction to the Hasse principle)")
        steps.append(_step("invariant sum", {}, str(total)))
    return WAReport(s, brauer, verdict, images, [], steps)


# --------------------------------------------------------------------------
# perpetual weak approximation


class PerpetualKind(enum.Enum):
    PerpetualWA = "perpetual_wa"
    FailsOverExtension = "fails_over_extension"
    ReducesToQuadraticCase = "reduces_to_quadratic_case"
    Inconclusive = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PerpetualReport:
    galois: GaloisType
    sqrt_a_in_L: bool
    factors_over_quad: bool
    classification: PerpetualKind
    detail: str

    def to_dict(self) -> dict:
        return {
            "galois": str(self.galois),
            "sqrt_a_in_L": self.sqrt_a_in_L,
            "factors_over_quad": self.factors_over_quad,
            "classification": str(self.classification),
            "detail": self.detail,
        }


def _factors_over_quad(s: ChateletSurface, K: QuadField) -> bool:
    for f, _ in s.factorization.factors:
        if f.degree == 2 and is_square_in_quad(quadratic_disc(f), K):
            return True
        if f.degree == 4 and quartic_splits_over_quad(f, K):
            return True
    return False


def _monic_integral_disc(P: Poly) -> Fraction:
    """Discriminant of a monic integral polynomial with the same splitting field as P."""
    _, cs = P.integer_primitive()
    lead, d = cs[-1], len(cs) - 1
    monic = Poly([c * lead ** (d - 1 - i) for i, c in enumerate(cs[:-1])] + [1])
    return monic.discriminant()


def _ramified_primes_of_quad(a) -> list[int]:
    a = Fraction(a)
    candidates = {2} | set(primefactors(abs(a.numerator))) | set(primefactors(a.denominator))
    return [p for p in sorted(candidates) if quadratic_extension_type(a, p) == "ramified"]


def _failure_certificate(s: ChateletSurface, galois: GaloisType) -> Optional[str]:
    """A Q-checkable reason why weak approximation fails over the splitting field L.

    Over L the Brauer group is Z2xZ2 when sqrt a is not in L, and the split-case
    criterion fails at a real place of L with a < 0, or at a place of L where
    L(sqrt a)/L ramifies; that happens above a prime ramified in Q(sqrt a) whose
    ramification index in L is odd.
    """
    if s.a < 0 and s.P.real_root_count() == s.degree:
        return "a < 0 and L is totally real: the real places of L are witnesses"
    ramified = _ramified_primes_of_quad(s.a)
    if galois is GaloisType.C3:
        return f"L is cyclic cubic, so every prime ramified in Q(sqrt a) (here {ramified}) stays ramified in L(sqrt a)/L"
    disc = _monic_integral_disc(s.P)
    for p in ramified:
        if valuation(disc, p) == 0:
            return f"{p} ramifies in Q(sqrt a) but not in L, so L(sqrt a)/L is ramified above {p}"
    return None


def perpetual_classify(s: ChateletSurface) -> PerpetualReport:
    """Does the surface satisfy weak approximation over every finite extension?"""
    G = galois_group(s.P)
    K = QuadField(s.a)
    in_L = sqrt_a_in_splitting_field(s.P, K)
    over_quad = _factors_over_quad(s, K)

    def report(kind: PerpetualKind, detail: str) -> PerpetualReport:
        return PerpetualReport(G, in_L, over_quad, kind, detail)

    if G in (GaloisType.D8, GaloisType.V4) and over_quad:
        return report(PerpetualKind.PerpetualWA, f"Galois group {G} and P factors further over {K}")
    if G in (GaloisType.S3, GaloisType.C4, GaloisType.C2) and in_L:
        return report(PerpetualKind.PerpetualWA, f"Galois group {G} and sqrt({K.a}) lies in L")
    if G is GaloisType.C1:
        return report(PerpetualKind.FailsOverExtension, "P splits over Q and the split-case criterion already fails over Q")
    if not in_L:
        cert = _failure_certificate(s, G)
        if cert is not None:
            return report(PerpetualKind.FailsOverExtension, f"over L the Brauer group is Z2xZ2; {cert}")
    two_quadratics = s.factorization.degrees() == [2, 2] or G in (GaloisType.V4, GaloisType.D8, GaloisType.C4)
    if two_quadratics:
        return report(
            PerpetualKind.ReducesToQuadraticCase,
            "P is a product of two quadratics over a field K of degree at most 2; "
            "perpetual weak approximation is equivalent to weak approximation of X over K",
        )
    if in_L:
        return report(PerpetualKind.Inconclusive, f"Galois group {G} with sqrt a in L is outside the checkable cases")
    return report(
        PerpetualKind.Inconclusive,
        "sqrt a is not in L, but no prime ramified in Q(sqrt a) is certifiably unramified in L and a > 0 or L is not real",
    )
