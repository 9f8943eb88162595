"""Brauer group of a Chatelet surface modulo constants, and evaluation of its
quaternion-algebra generators at local points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from chatelet.errors import AllRepresentativesVanishError
from chatelet.galois import quadratic_disc
from chatelet.padic import PlaceLike, is_rational_square
from chatelet.poly import Poly, as_fraction
from chatelet.surface import ChateletSurface, SplitForm, split_form
from chatelet.symbols import Inv2, hilbert_symbol

# A point of P^1(Q): a rational x-coordinate, or None for the point at infinity.
Point = Optional[Fraction]


@dataclass(frozen=True)
class BrauerGenerator:
    """The quaternion algebra (a, h(x)) given by interchangeable representatives h.

    Each representative is a polynomial in the original x-coordinate. Any two of
    them differ by P(x) times a square, so they agree at every local point of the
    surface where both are defined and nonzero.
    """

    name: str
    a: Fraction
    reps: tuple[Poly, ...]

    def __str__(self) -> str:
        return f"{self.name} = ({self.a}, {self.reps[0].to_expr()})"


class BrauerKind(enum.Enum):
    Z2xZ2 = "Z2xZ2"
    Z2 = "Z2"
    Trivial = "Trivial"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BrauerType:
    kind: BrauerKind
    generators: tuple[BrauerGenerator, ...] = ()
    form: Optional[SplitForm] = None

    def __str__(self) -> str:
        return str(self.kind)


def _complement(h_roots, roots) -> list[Fraction]:
    return [e for e in roots if e not in h_roots]


def _split_generators(s: ChateletSurface, sf: SplitForm) -> tuple[BrauerGenerator, BrauerGenerator]:
    # In the normal coordinate the generators are (a, x'(x'-1)) and (a, x'(x'-lambda));
    # pulled back, x' - t becomes a scalar times (x - e) / (x - e4).
    e = sf.roots
    c0 = s.c
    if sf.degree == 4:
        A = sf.scale
        scale_a, scale_b = A * (A - 1), A * (A - sf.lam)
    else:
        scale_a = scale_b = Fraction(1)
    out = []
    for name, scale, pair in (("A", scale_a, (e[0], e[1])), ("B", scale_b, (e[0], e[2]))):
        h = Poly.from_roots(pair, scale)
        alt = Poly.from_roots(_complement(pair, e), c0 * scale)
        out.append(BrauerGenerator(name, s.a, (h, alt)))
    return out[0], out[1]


def _height(f: Poly) -> int:
    """Largest coefficient size of the primitive integral form of f."""
    _, cs = f.integer_primitive()
    return max(abs(c) for c in cs)


def classify(s: ChateletSurface) -> BrauerType:
    """Br(X)/Br(Q) as Z2xZ2, Z2 or Trivial, with generators."""
    fac = s.factorization
    if fac.is_split():
        sf = split_form(s)
        return BrauerType(BrauerKind.Z2xZ2, _split_generators(s, sf), sf)
    quads = fac.of_degree(2)
    if quads and not any(is_rational_square(quadratic_disc(F) * s.a) for F in quads):
        f = min(quads, key=_height)
        g = Poly.const(1)
        for other, m in fac.factors:
            if other != f:
                g = g * other**m
        gen = BrauerGenerator("C", s.a, (f, g * s.c))
        return BrauerType(BrauerKind.Z2, (gen,))
    return BrauerType(BrauerKind.Trivial)


def rep_value(h: Poly, x0: Point) -> Fraction:
    """Value of a representative at x0, in a chart where it is defined.

    At infinity an even-degree h is read in the chart w = 1/x, where its square
    class is that of the leading coefficient; odd degree vanishes there.
    """
    if x0 is None:
        return h.lc if h.degree % 2 == 0 else Fraction(0)
    return h(x0)


def ev_at_point(gen: BrauerGenerator, x0, place: PlaceLike) -> Inv2:
    """Local invariant of the generator at the fiber over x0 (None means infinity)."""
    if x0 is not None:
        x0 = as_fraction(x0)
    for h in gen.reps:
        v = rep_value(h, x0)
        if v != 0:
            return hilbert_symbol(gen.a, v, place)
    raise AllRepresentativesVanishError(f"every representative of {gen.name} vanishes at {x0}")
