"""Local analysis over Q_p and R.

Evaluation-map images are computed by exhaustive residue-disc enumeration:
P^1(Q_p) is covered by the disc Z_p in the coordinate x and the disc pZ_p in
w = 1/x, and a disc is split into p children until the square classes needed
to decide it are provably constant on it.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy

from chatelet.brauer import BrauerGenerator, Point, ev_at_point
from chatelet.errors import (
    DepthExceededError,
    EmptyRealLocusError,
    NotOnCurveError,
    NotRamifiedError,
    ReducibleError,
    TwoTorsionError,
)
from chatelet.padic import (
    DEFAULT_PREC,
    REAL,
    Place,
    PlaceLike,
    as_place,
    is_square_local,
    legendre,
    quadratic_extension_type,
    square_class_stable,
    valuation,
)
from chatelet.poly import Poly, as_fraction
from chatelet.surface import ChateletSurface
from chatelet.symbols import Inv2, hilbert_symbol, is_integral_norm

# --------------------------------------------------------------------------
# fibers and local solvability


def _chart_value(P: Poly, x0: Point) -> Fraction:
    """Square-class representative of P at x0, reading infinity in the w-chart."""
    if x0 is None:
        return P.at_infinity_chart()(0)
    return P(x0)


def fiber_solvable(s: ChateletSurface, x0, place: PlaceLike) -> bool:
    """Does the conic over x0 (None for infinity) have a point over the completion?"""
    if x0 is not None:
        x0 = as_fraction(x0)
    v = _chart_value(s.P, x0)
    if v == 0:
        # singular fiber: the double point y = z = 0 lies on the smooth surface
        return True
    return hilbert_symbol(s.a, v, place) == Inv2.ZERO


@dataclass(frozen=True)
class _Disc:
    """Residue disc ``center + p^depth Z_p`` in the x-chart or the w-chart."""

    chart: str  # "x" or "w"
    center: int
    depth: int

    def point(self) -> Point:
        if self.chart == "x":
            return Fraction(self.center)
        if self.center == 0:
            return None
        return Fraction(1, self.center)

    def children(self, p: int) -> list["_Disc"]:
        step = p**self.depth
        return [_Disc(self.chart, self.center + k * step, self.depth + 1) for k in range(p)]


def _root_discs() -> list[_Disc]:
    return [_Disc("x", 0, 0), _Disc("w", 0, 1)]


class _Charts:
    """Polynomials in both charts, cached per surface and generator."""

    def __init__(self, polys: list[Poly]):
        self.x = polys
        self.w = [f.at_infinity_chart() for f in polys]

    def get(self, chart: str) -> list[Poly]:
        return self.x if chart == "x" else self.w


def _has_root_in_disc(f: Poly, disc: _Disc, p: int) -> bool:
    """Hensel certificate that f has a p-adic root inside the disc."""
    r = disc.center
    fr = f(r)
    if fr == 0:
        return True
    dfr = f.derivative()(r)
    if dfr == 0:
        return False
    vf, vd = valuation(fr, p), valuation(dfr, p)
    return vf > 2 * vd and vf - vd >= disc.depth


def locally_solvable(s: ChateletSurface, place: PlaceLike, depth: int = DEFAULT_PREC) -> bool:
    """Does the surface have a point over the completion of Q at ``place``?"""
    place = as_place(place)
    if place.is_real:
        return s.a > 0 or s.P.real_root_count() > 0 or s.c > 0
    p = place.p
    if is_square_local(s.a, p) or s.degree == 3 or s.factorization.roots():
        return True
    charts = _Charts([s.P])
    queue = deque(_root_discs())
    while queue:
        disc = queue.popleft()
        P = charts.get(disc.chart)[0]
        if fiber_solvable(s, disc.point(), p):
            return True
        if _has_root_in_disc(P, disc, p):
            return True
        if square_class_stable(P, disc.center, disc.depth, p):
            continue  # every fiber in the disc looks like the center's
        if disc.depth >= depth:
            raise DepthExceededError(f"local solvability at {p} undecided at depth {depth}")
        queue.extend(disc.children(p))
    return False


# --------------------------------------------------------------------------
# evaluation-map images


@dataclass(frozen=True)
class EvImage:
    """Values of an evaluation map on the local points of the surface.

    ``witnesses`` maps each attained value to an x-coordinate (None for
    infinity) whose fiber has local points and which evaluates to it.
    """

    values: frozenset
    determined: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    def is_full(self) -> bool:
        return len(self.values) == 2

    def is_singleton(self) -> bool:
        return len(self.values) == 1

    def sorted_values(self) -> list[Inv2]:
        return sorted(self.values)

    def single(self) -> Inv2:
        (v,) = self.values
        return v

    def witness_text(self) -> str:
        parts = []
        for v in self.sorted_values():
            x0 = self.witnesses.get(v)
            parts.append("x=oo" if x0 is None else f"x={x0}")
        return ", ".join(parts)


def ev_image(s: ChateletSurface, gen: BrauerGenerator, p: int, depth: int = DEFAULT_PREC) -> EvImage:
    """Image of the evaluation map of ``gen`` on the Q_p-points, by disc enumeration.

    A disc is settled once some representative of the generator has constant
    square class on it and either P does too (so the center decides the whole
    disc) or the representative's value is already known to be attained.
    Discs still open at ``depth`` make the result undetermined.
    """
    p = as_place(p).p
    charts = _Charts([s.P] + list(gen.reps))
    attained: dict[Inv2, Point] = {}
    determined = True
    queue = deque(_root_discs())
    while queue and len(attained) < 2:
        disc = queue.popleft()
        x0 = disc.point()
        if fiber_solvable(s, x0, p):
            value = ev_at_point(gen, x0, p)
            attained.setdefault(value, x0)
        polys = charts.get(disc.chart)
        P, reps = polys[0], polys[1:]
        stable_rep = next(
            (h for h in reps if h(disc.center) != 0 and square_class_stable(h, disc.center, disc.depth, p)),
            None,
        )
        if stable_rep is not None:
            if square_class_stable(P, disc.center, disc.depth, p):
                continue
            if hilbert_symbol(s.a, stable_rep(disc.center), p) in attained:
                continue
        if disc.depth >= depth:
            determined = False
            continue
        queue.extend(disc.children(p))
    return EvImage(frozenset(attained), determined, dict(attained))


def _real_sample_points(polys: list[Poly]) -> list[Point]:
    """One point in every interval cut out by the real roots, plus the roots and infinity."""
    x = sympy.Symbol("x")
    prod = sympy.Integer(1)
    for f in polys:
        _, cs = f.integer_primitive()
        prod *= sympy.Poly(list(reversed(cs)), x).as_expr()
    sqf = sympy.Poly(sympy.sqf_part(sympy.Poly(prod, x)), x)
    eps = Fraction(1, 16)
    while True:
        raw = sqf.intervals(eps=sympy.Rational(eps.numerator, eps.denominator))
        intervals = sorted((Fraction(str(lo)), Fraction(str(hi))) for (lo, hi), _ in raw)
        if all(hi < nxt_lo for (_, hi), (nxt_lo, _) in zip(intervals, intervals[1:])):
            break
        eps /= 16
    points: list[Point] = [None]
    if not intervals:
        return points + [Fraction(0)]
    points.append(intervals[0][0] - 1)
    for (lo, hi), nxt in zip(intervals, intervals[1:] + [None]):
        if lo == hi:
            points.append(lo)
        if nxt is not None:
            points.append((hi + nxt[0]) / 2)
    points.append(intervals[-1][1] + 1)
    return points


def ev_image_real(s: ChateletSurface, gen: BrauerGenerator) -> EvImage:
    """Image of the evaluation map on the real points, by sign analysis."""
    if s.a > 0:
        # every fiber has real points and every symbol (a, .) vanishes
        return EvImage(frozenset({Inv2.ZERO}), True, {Inv2.ZERO: _first_defined_point(gen)})
    attained: dict[Inv2, Point] = {}
    for x0 in _real_sample_points([s.P] + list(gen.reps)):
        if fiber_solvable(s, x0, REAL):
            attained.setdefault(ev_at_point(gen, x0, REAL), x0)
    if not attained:
        raise EmptyRealLocusError("the surface has no real points")
    return EvImage(frozenset(attained), True, attained)


def _first_defined_point(gen: BrauerGenerator) -> Fraction:
    x0 = 0
    while all(h(x0) == 0 for h in gen.reps):
        x0 += 1
    return Fraction(x0)


def ev_image_at(s: ChateletSurface, gen: BrauerGenerator, place: PlaceLike, depth: int = DEFAULT_PREC) -> EvImage:
    place = as_place(place)
    if place.is_real:
        return ev_image_real(s, gen)
    return ev_image(s, gen, place.p, depth)


# --------------------------------------------------------------------------
# elliptic 2-divisibility


@dataclass(frozen=True)
class CurveLocal:
    """The elliptic curve y^2 = c x (x - 1)(x - lambda) over Q_p, p odd."""

    c: Fraction
    lam: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.c == 0 or self.lam in (0, 1):
            raise ValueError("singular curve: need c != 0 and lambda not in {0, 1}")
        Place(self.p)
        if self.p == 2:
            raise ValueError("two_div_criterion needs an odd prime")

    def rhs(self, x) -> Fraction:
        x = as_fraction(x)
        return self.c * x * (x - 1) * (x - self.lam)


def two_div_criterion(E: CurveLocal, Q) -> bool:
    """Is the point Q = (x, y) in 2E(Q_p)?

    Moving the roots to 0, c, c*lambda, this is the classical test that
    cx, cx - c and cx - c*lambda are all squares. ``y`` may be None, in which
    case only the x-coordinate is used after checking it lifts to E(Q_p).
    """
    x, y = Q
    x = as_fraction(x)
    rhs = E.rhs(x)
    if rhs == 0:
        raise TwoTorsionError("Q is a 2-torsion point")
    if y is None:
        if not is_square_local(rhs, E.p):
            raise NotOnCurveError(f"x = {x} does not lift to a Q_{E.p}-point")
    else:
        y = as_fraction(y)
        if y * y != rhs:
            raise NotOnCurveError(f"({x}, {y}) is not on the curve")
    c, lam = E.c, E.lam
    return all(is_square_local(t, E.p) for t in (c * x, c * x - c, c * x - c * lam))


# --------------------------------------------------------------------------
# norm counting experiments at a ramified prime


@dataclass(frozen=True)
class NormExperimentResult:
    decided_in: int
    decided_out: int
    undecided: int
    depth: int

    @property
    def total(self) -> int:
        return self.decided_in + self.decided_out + self.undecided

    def bracket(self) -> tuple[Fraction, Fraction]:
        """Lower and upper bounds for the density of the set."""
        return (
            Fraction(self.decided_in, self.total),
            Fraction(self.decided_in + self.undecided, self.total),
        )

    def density(self) -> Fraction:
        return Fraction(self.decided_in, self.total)


def _require_ramified(a, p: int) -> None:
    if quadratic_extension_type(a, p) != "ramified":
        raise NotRamifiedError(f"Q_{p}(sqrt {a})/Q_{p} is not ramified")


def _threshold(p: int) -> int:
    return 3 if p == 2 else 1


def norm_ratio_experiment(a, r: int, n: int, p: int = 2) -> NormExperimentResult:
    """Count classes mod p^n congruent to r mod p that are norms of integers.

    There are p^(n-1) such classes. A class is decided when the square class of
    its members is constant, i.e. its representative is nonzero with valuation
    at most n - t.
    """
    a = as_fraction(a)
    _require_ramified(a, p)
    if n < 1:
        raise ValueError("depth must be at least 1")
    t = _threshold(p)
    mod = p**n
    yes = no = unknown = 0
    for xbar in range(r % p, mod, p):
        if xbar == 0 or valuation(xbar, p) + t > n:
            unknown += 1
        elif is_integral_norm(a, xbar, p):
            yes += 1
        else:
            no += 1
    return NormExperimentResult(yes, no, unknown, n)


@dataclass(frozen=True)
class ABExperimentResult:
    """Counts for A = {x(x-1) an integral norm} and B = {x - lambda an integral norm}."""

    A: NormExperimentResult
    B: NormExperimentResult
    A_minus_B: NormExperimentResult
    B_minus_A: NormExperimentResult
    outside_both: NormExperimentResult


def _membership(f: Poly, a: Fraction, xbar: int, n: int) -> Optional[bool]:
    if f(xbar) == 0 or not square_class_stable(f, xbar, n, 2):
        return None
    return is_integral_norm(a, f(xbar), 2)


def ab_experiment(a, lam, n: int) -> ABExperimentResult:
    """Classify every class mod 2^n by membership in A and B (undecided when unstable)."""
    a, lam = as_fraction(a), as_fraction(lam)
    _require_ramified(a, 2)
    if valuation(lam, 2) < 0:
        raise ValueError("lambda must be 2-integral")
    fa = Poly.from_roots([0, 1])
    fb = Poly.from_roots([lam])
    counts = {name: [0, 0, 0] for name in ("A", "B", "AmB", "BmA", "out")}

    def tally(name: str, value: Optional[bool]) -> None:
        counts[name][0 if value else 1 if value is False else 2] += 1

    def both(x: Optional[bool], y: Optional[bool]) -> Optional[bool]:
        if x is False or y is False:
            return False
        if x is None or y is None:
            return None
        return True

    for xbar in range(2**n):
        ina, inb = _membership(fa, a, xbar, n), _membership(fb, a, xbar, n)
        nota = None if ina is None else not ina
        notb = None if inb is None else not inb
        tally("A", ina)
        tally("B", inb)
        tally("AmB", both(ina, notb))
        tally("BmA", both(inb, nota))
        tally("out", both(nota, notb))
    res = {k: NormExperimentResult(*v, n) for k, v in counts.items()}
    return ABExperimentResult(res["A"], res["B"], res["AmB"], res["BmA"], res["out"])


# --------------------------------------------------------------------------
# square values of an irreducible quadratic over F_q


@functools.lru_cache(maxsize=256)
def _square_table(q: int) -> np.ndarray:
    table = np.zeros(q, dtype=bool)
    xs = np.arange(q, dtype=np.int64)
    table[(xs * xs) % q] = True
    table[0] = False
    table.setflags(write=False)
    return table


def _monic_coeffs_mod(R, q: int) -> tuple[int, int]:
    if isinstance(R, Poly):
        if R.degree != 2:
            raise ValueError("R must be a quadratic")
        R = R.monic()
        b, c = R.coeff(1), R.coeff(0)
        return b.numerator * pow(b.denominator, -1, q) % q, c.numerator * pow(c.denominator, -1, q) % q
    b, c = R
    return int(b) % q, int(c) % q


def count_square_values(q: int, R) -> int:
    """Number of x in F_q with R(x) a nonzero square, for R = x^2 + bx + c irreducible.

    ``R`` is a monic quadratic Poly or a pair (b, c).
    """
    Place(q)
    if q == 2:
        raise ValueError("q must be an odd prime")
    b, c = _monic_coeffs_mod(R, q)
    if legendre(b * b - 4 * c, q) != -1:
        raise ReducibleError(f"x^2 + {b}x + {c} is reducible mod {q}")
    xs = np.arange(q, dtype=np.int64)
    vals = (xs * xs + b * xs + c) % q
    return int(_square_table(q)[vals].sum())
