"""Chatelet surfaces y^2 - a z^2 = P(x) over Q: validation, the split normal form
c x (x - 1)(x - lambda), and bad-reduction detection at primes.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from sympy import primefactors

from chatelet.errors import (
    BadDegreeError,
    NotSeparableError,
    NotSplitError,
    SquareAError,
    ZeroInputError,
)
from chatelet.galois import Factorization, factor_over_Q, quadratic_disc
from chatelet.padic import (
    is_rational_square,
    is_square_local,
    quadratic_extension_type,
    valuation,
)
from chatelet.poly import Poly, as_fraction, parse_poly, resultant


def _primes_of(x) -> set[int]:
    x = as_fraction(x)
    if x == 0:
        return set()
    return set(primefactors(abs(x.numerator))) | set(primefactors(x.denominator))


@dataclass(frozen=True)
class ChateletSurface:
    a: Fraction
    P: Poly
    factorization: Factorization = field(compare=False, repr=False)

    @property
    def degree(self) -> int:
        return self.P.degree

    @property
    def c(self) -> Fraction:
        """Leading coefficient of P."""
        return self.P.lc

    def is_split(self) -> bool:
        return self.factorization.is_split()

    def roots(self) -> list[Fraction]:
        """Rational roots of P in the canonical order (numerator, denominator)."""
        return sorted(self.factorization.roots(), key=lambda r: (r.numerator, r.denominator))

    def to_dict(self) -> dict:
        return {"a": str(self.a), "P": self.P.to_expr()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self) -> str:
        return f"y^2 - ({self.a}) z^2 = {self.P.to_expr()}"


def new_surface(a, P) -> ChateletSurface:
    """Validate and build a surface; P may be a Poly or an expression string."""
    a = as_fraction(a)
    if isinstance(P, str):
        P = parse_poly(P)
    if a == 0:
        raise ZeroInputError("a must be nonzero")
    if is_rational_square(a):
        raise SquareAError(f"a = {a} is a rational square")
    if P.degree not in (3, 4):
        raise BadDegreeError(f"P must have degree 3 or 4, got {P.degree}")
    if P.discriminant() == 0:
        raise NotSeparableError(f"P = {P.to_expr()} has a repeated root")
    return ChateletSurface(a, P, factor_over_Q(P))


def surface_from_dict(d: dict) -> ChateletSurface:
    return new_surface(d["a"], d["P"])


def surface_from_json(text: str) -> ChateletSurface:
    return surface_from_dict(json.loads(text))


# --------------------------------------------------------------------------
# split normal form


@dataclass(frozen=True)
class SplitForm:
    """P = c x'(x'-1)(x'-lambda) up to a square factor, in a Mobius coordinate x'.

    ``roots`` lists the roots of P in the order used: the first two go to 0 and 1,
    the third to lambda, and for quartics the fourth to infinity.
    """

    c: Fraction
    lam: Fraction
    roots: tuple[Fraction, ...]
    scale: Fraction

    @property
    def degree(self) -> int:
        return len(self.roots)

    def to_normal(self, x) -> Fraction:
        """The new coordinate x' of the original x."""
        x = as_fraction(x)
        e = self.roots
        if self.degree == 3:
            return (x - e[0]) / (e[1] - e[0])
        return self.scale * (x - e[0]) / (x - e[3])

    def from_normal(self, xn) -> Optional[Fraction]:
        """Original x of a normal coordinate; None for the point at infinity."""
        xn = as_fraction(xn)
        e = self.roots
        if self.degree == 3:
            return e[0] + (e[1] - e[0]) * xn
        if xn == self.scale:
            return None
        # xn (x - e4) = A (x - e1)
        return (xn * e[3] - self.scale * e[0]) / (xn - self.scale)

    def square_factor(self, x) -> Fraction:
        """The square s(x)^2 with P(x) = c x'(x'-1)(x'-lambda) * s(x)^2."""
        x = as_fraction(x)
        if self.degree == 3:
            return Fraction(1)
        return (x - self.roots[3]) ** 4

    def normal_poly(self) -> Poly:
        return Poly.from_roots([0, 1, self.lam], self.c)


def _split_form_for(P_lc: Fraction, roots: Sequence[Fraction]) -> SplitForm:
    e = tuple(roots)
    if len(e) == 3:
        d = e[1] - e[0]
        lam = (e[2] - e[0]) / d
        return SplitForm(P_lc * d**3, lam, e, Fraction(1))
    A = (e[1] - e[3]) / (e[1] - e[0])
    lam = A * (e[2] - e[0]) / (e[2] - e[3])
    return SplitForm(P_lc / (A * (A - 1) * (A - lam)), lam, e, A)


def split_form(s: ChateletSurface, order: Optional[Sequence[Fraction]] = None) -> SplitForm:
    """Split normal form using the canonical root order, or the given one."""
    if not s.is_split():
        raise NotSplitError("P does not split into linear factors over Q")
    roots = s.roots() if order is None else [as_fraction(r) for r in order]
    if sorted(roots) != sorted(s.roots()):
        raise ValueError("order must be a permutation of the roots of P")
    return _split_form_for(s.c, roots)


# --------------------------------------------------------------------------
# bad places


class BadReason(enum.Enum):
    ValC = "ValC"
    ValLambda = "ValLambda"
    ValLambdaMinus1 = "ValLambdaMinus1"
    RamifiedQuadExt = "RamifiedQuadExt"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BadPlaceReport:
    prime: int
    reasons: frozenset
    a_nonsquare_locally: bool
    form: SplitForm

    def __post_init__(self):
        if not self.reasons:
            raise ValueError("a bad place needs at least one reason")


def local_split_form(s: ChateletSurface, p: int) -> SplitForm:
    """The split form best adapted to p.

    Among all root orderings whose lambda has v(lambda) >= 0 and v(lambda - 1) >= 0,
    take one minimizing (v(c) mod 2) + v(lambda) + v(lambda - 1); ties go to the
    earliest ordering, the canonical one first.
    """
    if not s.is_split():
        raise NotSplitError("P does not split into linear factors over Q")
    best, best_key = None, None
    for order in itertools.permutations(s.roots()):
        sf = _split_form_for(s.c, order)
        vl, vl1 = valuation(sf.lam, p), valuation(sf.lam - 1, p)
        if vl < 0 or vl1 < 0:
            continue
        key = valuation(sf.c, p) % 2 + vl + vl1
        if best_key is None or key < best_key:
            best, best_key = sf, key
    assert best is not None  # one of the six cross-ratios is always p-integral with p-integral lambda - 1
    return best


def _bad_reasons(a: Fraction, sf: SplitForm, p: int) -> frozenset:
    reasons = set()
    if valuation(sf.c, p) % 2:
        reasons.add(BadReason.ValC)
    if valuation(sf.lam, p) != 0:
        reasons.add(BadReason.ValLambda)
    if valuation(sf.lam - 1, p) != 0:
        reasons.add(BadReason.ValLambdaMinus1)
    if quadratic_extension_type(a, p) == "ramified":
        reasons.add(BadReason.RamifiedQuadExt)
    return frozenset(reasons)


def bad_places_split(s: ChateletSurface) -> list[BadPlaceReport]:
    """Primes of bad reduction for a split surface, ascending."""
    if not s.is_split():
        raise NotSplitError("P does not split into linear factors over Q")
    sf = split_form(s)
    primes = set(candidate_bad_places(s))
    for x in (sf.c, sf.lam, sf.lam - 1):
        primes |= _primes_of(x)
    out = []
    for p in sorted(primes):
        local = local_split_form(s, p)
        reasons = _bad_reasons(s.a, local, p)
        if reasons:
            out.append(BadPlaceReport(p, reasons, not is_square_local(s.a, p), local))
    return out


def candidate_bad_places(s: ChateletSurface) -> list[int]:
    """Primes outside of which the evaluation maps are identically zero.

    2, the primes of a and of the leading coefficient, the primes of disc(P), of
    the pairwise resultants of the irreducible factors, of the coefficients of
    the monic factors and of their discriminants.
    """
    primes = {2}
    primes |= _primes_of(s.a)
    primes |= _primes_of(s.c)
    primes |= _primes_of(s.P.discriminant())
    factors = [f for f, _ in s.factorization.factors]
    for f, g in itertools.combinations(factors, 2):
        primes |= _primes_of(resultant(f, g))
    for f in factors:
        primes |= f.content_primes()
        if f.degree == 2:
            primes |= _primes_of(quadratic_disc(f))
        elif f.degree >= 3:
            primes |= _primes_of(f.discriminant())
    return sorted(primes)

