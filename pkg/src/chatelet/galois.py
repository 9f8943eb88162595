"""Factorization of small-degree polynomials over Q and Galois groups of cubics
and quartics, over Q or relative to a quadratic field Q(sqrt a).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import sympy
from sympy import factorint

from chatelet.errors import (
    NotIrreducibleError,
    NotSeparableError,
    ZeroInputError,
)
from chatelet.padic import is_rational_square, rational_sqrt
from chatelet.poly import Poly, as_fraction

_X = sympy.Symbol("x")


class GaloisType(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    V4 = "V4"
    S3 = "S3"
    D8 = "D8"
    A4 = "A4"
    S4 = "S4"

    def order(self) -> int:
        return _ORDERS[self]

    def __str__(self) -> str:
        return self.value


_ORDERS = {
    GaloisType.C1: 1,
    GaloisType.C2: 2,
    GaloisType.C3: 3,
    GaloisType.C4: 4,
    GaloisType.V4: 4,
    GaloisType.S3: 6,
    GaloisType.D8: 8,
    GaloisType.A4: 12,
    GaloisType.S4: 24,
}


def squarefree_kernel(x) -> int:
    """The squarefree integer in the same square class as the rational x."""
    x = as_fraction(x)
    if x == 0:
        raise ZeroInputError("zero has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt a), with a normalized to its squarefree kernel."""

    a: int

    def __init__(self, a):
        k = squarefree_kernel(a)
        if k == 1:
            raise ValueError(f"{a} is a rational square; Q(sqrt {a}) = Q")
        object.__setattr__(self, "a", k)

    def __str__(self) -> str:
        return f"Q(sqrt({self.a}))"

    def elem(self, s, t=0) -> "QuadElem":
        return QuadElem(as_fraction(s), as_fraction(t), self.a)


Base = Optional[QuadField]  # None means Q


@dataclass(frozen=True)
class QuadElem:
    """s + t*sqrt(a) in Q(sqrt a)."""

    s: Fraction
    t: Fraction
    a: int

    def __add__(self, o):
        o = self._lift(o)
        return QuadElem(self.s + o.s, self.t + o.t, self.a)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.s, -self.t, self.a)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return QuadElem(self.s * o.s + self.a * self.t * o.t, self.s * o.t + self.t * o.s, self.a)

    __rmul__ = __mul__

    def conj(self):
        return QuadElem(self.s, -self.t, self.a)

    def norm(self) -> Fraction:
        return self.s * self.s - self.a * self.t * self.t

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElem(self.s / n, -self.t / n, self.a)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def is_zero(self) -> bool:
        return self.s == 0 and self.t == 0

    def _lift(self, o):
        if isinstance(o, QuadElem):
            return o
        return QuadElem(as_fraction(o), Fraction(0), self.a)

    def sqrt(self) -> Optional["QuadElem"]:
        """A square root in Q(sqrt a), or None.

        For t != 0, (u + v sqrt a)^2 = s + t sqrt a forces u^2 to be a root of
        X^2 - s X + a t^2 / 4 with u = sqrt(X) rational and v = t / (2u).
        """
        if self.t == 0:
            r = rational_sqrt(self.s) if self.s >= 0 else None
            if r is not None:
                return QuadElem(r, Fraction(0), self.a)
            r = rational_sqrt(self.s / self.a)
            if r is not None:
                return QuadElem(Fraction(0), r, self.a)
            return None
        s, t, a = self.s, self.t, self.a
        disc = s * s - a * t * t
        d = rational_sqrt(disc)
        if d is None:
            return None
        for X in ((s + d) / 2, (s - d) / 2):
            if X > 0:
                u = rational_sqrt(X)
                if u is not None:
                    return QuadElem(u, t / (2 * u), a)
        return None


# --------------------------------------------------------------------------
# factorization over Q


@dataclass(frozen=True)
class Factorization:
    constant: Fraction
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly.const(self.constant)
        for f, m in self.factors:
            out = out * f**m
        return out

    def degrees(self) -> list[int]:
        return sorted(f.degree for f, m in self.factors for _ in range(m))

    def is_split(self) -> bool:
        return all(f.degree == 1 for f, _ in self.factors)

    def of_degree(self, d: int) -> list[Poly]:
        return [f for f, m in self.factors for _ in range(m) if f.degree == d]

    def roots(self) -> list[Fraction]:
        return [-f.coeff(0) for f in self.of_degree(1)]


def rational_roots(f: Poly) -> list[Fraction]:
    """Distinct rational roots, read off from sympy's factorization over Z."""
    if f.degree < 1:
        return []
    _, cs = f.integer_primitive()
    roots = sympy.Poly(list(reversed(cs)), _X).ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def depressed_quartic(f: Poly) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """For monic-ized f = x^4 + b x^3 + ..., substitute x = y - b/4.

    Returns (shift, p, q, r) with f(y + shift)/lc = y^4 + p y^2 + q y + r.
    """
    if f.degree != 4:
        raise ValueError("expected a quartic")
    g = f.monic()
    shift = -g.coeff(3) / 4
    h = g.shift(shift)
    return shift, h.coeff(2), h.coeff(1), h.coeff(0)


def resolvent_cubic(f: Poly) -> Poly:
    """z^3 + 2p z^2 + (p^2 - 4r) z - q^2 for the depressed form of f.

    Its roots are the squares u^2 of the pairings f = (y^2 + u y + v)(y^2 - u y + w).
    """
    _, p, q, r = depressed_quartic(f)
    return Poly((-q * q, p * p - 4 * r, 2 * p, 1))


def _quartic_two_quadratics(f: Poly) -> Optional[tuple[Poly, Poly]]:
    """Split a rootless quartic over Q into two monic quadratics if possible."""
    shift, p, q, r = depressed_quartic(f)
    y = Poly.x() - shift  # y = x - shift
    if q != 0:
        for z in rational_roots(resolvent_cubic(f)):
            u = rational_sqrt(z) if z > 0 else None
            if u is None:
                continue
            v = (p + z - q / u) / 2
            w = (p + z + q / u) / 2
            return (y * y + y * u + v, y * y - y * u + w)
        return None
    # biquadratic y^4 + p y^2 + r
    d = rational_sqrt(p * p - 4 * r)
    if d is not None:
        s1, s2 = (-p + d) / 2, (-p - d) / 2
        return (y * y - s1, y * y - s2)
    for v in (rational_sqrt(r), -rational_sqrt(r) if rational_sqrt(r) is not None else None):
        if v is None:
            continue
        u2 = 2 * v - p
        u = rational_sqrt(u2) if u2 > 0 else None
        if u is not None:
            return (y * y + y * u + v, y * y - y * u + v)
    return None


def factor_over_Q(P: Poly) -> Factorization:
    """Complete factorization into monic irreducibles over Q, for degree <= 4."""
    if not 1 <= P.degree <= 4:
        raise ValueError("factor_over_Q handles degrees 1 to 4")
    const = P.lc
    rest = P.monic()
    found: dict[Poly, int] = {}
    for r in rational_roots(rest):
        lin = Poly((-r, 1))
        while rest.degree >= 1:
            q, rem = divmod(rest, lin)
            if not rem.is_zero():
                break
            found[lin] = found.get(lin, 0) + 1
            rest = q
    if rest.degree == 4:
        pair = _quartic_two_quadratics(rest)
        if pair is None:
            found[rest] = 1
        else:
            for g in pair:
                found[g] = found.get(g, 0) + 1
    elif rest.degree >= 2:
        # degree 2 or 3 without rational roots is irreducible
        found[rest] = found.get(rest, 0) + 1
    ordered = sorted(found.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return Factorization(const, tuple(ordered))


# --------------------------------------------------------------------------
# membership tests in Q(sqrt a)


def is_square_in_quad(x, K: QuadField) -> bool:
    """Rational x is a square in Q(sqrt a) iff x or x*a is a rational square."""
    x = as_fraction(x)
    if x == 0:
        raise ZeroInputError("zero is not in the multiplicative group")
    return is_rational_square(x) or is_rational_square(x * K.a)


def _is_square_in(x, base: Base) -> bool:
    if base is None:
        return is_rational_square(x)
    return is_square_in_quad(x, base)


def quadratic_disc(f: Poly) -> Fraction:
    return f.coeff(1) ** 2 - 4 * f.coeff(2) * f.coeff(0)


def cubic_root_in_quad(f: Poly, K: QuadField) -> bool:
    """Does the cubic f have a root in Q(sqrt a)?"""
    if f.degree != 3:
        raise ValueError("expected a cubic")
    if rational_roots(f):
        return True
    # an irreducible cubic stays irreducible over a quadratic field
    return False


def _cubic_roots_in(f: Poly, base: Base) -> int:
    """Number of distinct roots of a separable cubic lying in the base field."""
    fac = factor_over_Q(f)
    n = len(fac.of_degree(1))
    for g in fac.of_degree(2):
        if base is not None and is_square_in_quad(quadratic_disc(g), base):
            n += 2
    return n


def _quad_roots(coeffs: tuple, K: QuadField) -> list[QuadElem]:
    """Roots in K of the monic rational quadratic z^2 + b z + c."""
    b, c = coeffs
    d = b * b - 4 * c
    sd = K.elem(d).sqrt()
    if sd is None:
        return []
    return [(sd - b) / 2, (-sd - b) / 2]


def quartic_splits_over_quad(f: Poly, K: QuadField) -> bool:
    """Does the Q-irreducible quartic f factor over Q(sqrt a)?"""
    if f.degree != 4:
        raise ValueError("expected a quartic")
    fac = factor_over_Q(f)
    if len(fac.factors) != 1 or fac.factors[0][1] != 1:
        raise NotIrreducibleError(f"{f} is reducible over Q")
    return _quartic_factor_over_quad(f, K) is not None


def _quartic_factor_over_quad(f: Poly, K: QuadField):
    """Return (u, v, w) in K with depressed f = (y^2+uy+v)(y^2-uy+w), or None."""
    _, p, q, r = depressed_quartic(f)
    if q != 0:
        R = resolvent_cubic(f)
        candidates: list[QuadElem] = [K.elem(z) for z in rational_roots(R)]
        for g in factor_over_Q(R).of_degree(2):
            candidates += _quad_roots((g.coeff(1), g.coeff(0)), K)
        for z in candidates:
            if z.is_zero():
                continue
            u = z.sqrt()
            if u is None:
                continue
            qu = K.elem(q) / u
            v = (K.elem(p) + z - qu) / 2
            w = (K.elem(p) + z + qu) / 2
            return u, v, w
        return None
    # biquadratic
    roots = _quad_roots((p, r), K)
    if roots:
        s1, s2 = roots
        return K.elem(0), -s1, -s2
    sr = K.elem(r).sqrt()
    if sr is None:
        return None
    for v in (sr, -sr):
        u = (2 * v - p).sqrt()
        if u is not None and not u.is_zero():
            return u, v, v
    return None


# --------------------------------------------------------------------------
# Galois groups


def _check_separable(f: Poly) -> None:
    if f.degree < 1 or f.discriminant() == 0:
        raise NotSeparableError(f"{f} is not separable")


def _cubic_group(f: Poly, base: Base) -> GaloisType:
    """Galois group of a separable cubic over the base."""
    n = _cubic_roots_in(f, base)
    if n == 3:
        return GaloisType.C1
    if n == 1:
        return GaloisType.C2
    return GaloisType.C3 if _is_square_in(f.discriminant(), base) else GaloisType.S3


def _irreducible_quartic_group(f: Poly, base: Base) -> GaloisType:
    """Galois group of a quartic that is irreducible over the base."""
    disc = f.discriminant()
    disc_sq = _is_square_in(disc, base)
    R = resolvent_cubic(f)
    n = _cubic_roots_in(R, base)
    if n == 0:
        return GaloisType.A4 if disc_sq else GaloisType.S4
    if n == 3:
        return GaloisType.V4
    # exactly one resolvent root in the base: C4 or D8
    if base is None:
        # C4 iff f factors over Q(sqrt disc)
        return GaloisType.C4 if quartic_splits_over_quad(f, QuadField(disc)) else GaloisType.D8
    _, p, q, r = depressed_quartic(f)
    if q == 0:
        return GaloisType.C4 if _is_square_in(r * (p * p - 4 * r), base) else GaloisType.D8
    (z1,) = [z for z in rational_roots(R)]
    # over the quadratic subextension base(sqrt z1) f splits; C4 has a unique one
    return GaloisType.C4 if _is_square_in(z1 * disc, base) else GaloisType.D8


def _quadratics_group(discs: list[Fraction], base: Base) -> GaloisType:
    """Group of the compositum of base(sqrt d) over the listed discriminants."""
    gens: list[Fraction] = []
    for d in discs:
        if _is_square_in(d, base) or any(_is_square_in(d * g, base) for g in gens):
            continue
        gens.append(d)
    return (GaloisType.C1, GaloisType.C2, GaloisType.V4)[len(gens)]


def galois_group(f: Poly, base: Union[QuadField, None] = None) -> GaloisType:
    """Galois group of the splitting field of f over Q or over Q(sqrt a)."""
    if f.degree not in (3, 4):
        raise ValueError("galois_group handles degrees 3 and 4")
    _check_separable(f)
    fac = factor_over_Q(f)
    degs = fac.degrees()
    if f.degree == 3:
        return _cubic_group(f, base)
    if degs == [4]:
        if base is not None:
            fq = _quartic_factor_over_quad(f, base)
            if fq is not None:
                # two conjugate quadratics over K; the compositum is cut out by sqrt(disc)
                return GaloisType.C2 if _is_square_in(f.discriminant(), base) else GaloisType.V4
        return _irreducible_quartic_group(f, base)
    if degs == [1, 3]:
        return _cubic_group(fac.of_degree(3)[0], base)
    discs = [quadratic_disc(g) for g in fac.of_degree(2)]
    return _quadratics_group(discs, base)


def sqrt_a_in_splitting_field(f: Poly, K: QuadField) -> bool:
    """Is sqrt(a) in the splitting field of f over Q?

    Passing to Q(sqrt a) halves the Galois group exactly when it does.
    """
    return galois_group(f, K).order() * 2 == galois_group(f, None).order()


def quadratic_subfields(f: Poly) -> list[int]:
    """Squarefree d with Q(sqrt d) inside the splitting field of f over Q."""
    _check_separable(f)
    fac = factor_over_Q(f)
    degs = fac.degrees()
    gens: list[Fraction] = []
    if degs == [4]:
        G = galois_group(f)
        disc = f.discriminant()
        if G in (GaloisType.S4, GaloisType.C4):
            gens = [disc]
        elif G == GaloisType.D8:
            _, p, q, r = depressed_quartic(f)
            if q == 0:
                gens = [r, p * p - 4 * r, r * (p * p - 4 * r)]
            else:
                z1 = rational_roots(resolvent_cubic(f))[0]
                gens = [disc, z1, z1 * disc]
        elif G == GaloisType.V4:
            # the fields Q(sqrt z) for the rational resolvent roots z, the zero root
            # (biquadratic case) standing in for the product of the other two
            zs = rational_roots(resolvent_cubic(f))
            nonzero = [z for z in zs if z != 0]
            gens = nonzero + ([nonzero[0] * nonzero[1]] if len(nonzero) == 2 else [])
    elif 3 in degs:
        cubic = fac.of_degree(3)[0]
        gens = [cubic.discriminant()]
    else:
        discs = [quadratic_disc(g) for g in fac.of_degree(2)]
        gens = list(discs)
        if len(discs) == 2:
            gens.append(discs[0] * discs[1])
    out = sorted({squarefree_kernel(g) for g in gens if g != 0} - {1})
    return out
