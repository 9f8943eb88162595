"""Arithmetic in Q and its completions Q_p and R.

Everything downstream works with exact rationals; the only truncated p-adic
numbers in the package are the roots returned by :func:`hensel_lift`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from sympy import isprime

from chatelet.errors import CriterionFailsError, PrecisionLossError, ZeroInputError
from chatelet.poly import Poly, as_fraction

DEFAULT_PREC = 24
INF = math.inf


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``p == 0`` is the real place, otherwise p is a prime.

    Ordering puts the real place first and then primes ascending.
    """

    p: int

    def __post_init__(self):
        if self.p != 0 and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def real(cls) -> "Place":
        return cls(0)

    @property
    def is_real(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "Real" if self.is_real else str(self.p)

    @classmethod
    def parse(cls, text: str) -> "Place":
        t = str(text).strip().lower()
        if t in ("real", "r", "inf", "oo", "infinity"):
            return cls.real()
        return cls(int(t))


REAL = Place(0)

PlaceLike = Union[Place, int]


def as_place(place: PlaceLike) -> Place:
    if isinstance(place, Place):
        return place
    return Place(int(place))


@dataclass(frozen=True)
class PrimeCtx:
    p: int
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.prec < 1:
            raise ValueError("precision must be positive")


def _prime(p) -> int:
    if isinstance(p, PrimeCtx):
        return p.p
    if isinstance(p, Place):
        if p.is_real:
            raise ValueError("the real place has no valuation")
        return p.p
    return int(p)


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p) -> Union[int, float]:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = as_fraction(x)
    p = _prime(p)
    if x == 0:
        return INF
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


def unit_part(x, p) -> Fraction:
    x = as_fraction(x)
    if x == 0:
        raise ZeroInputError("zero has no unit part")
    v = valuation(x, p)
    return x / Fraction(_prime(p)) ** v


def unit_residue(u: Fraction, modulus: int) -> int:
    """Reduce a p-adic unit (as a rational) modulo ``modulus``."""
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


def legendre(n: int, p: int) -> int:
    n %= p
    if n == 0:
        return 0
    return 1 if pow(n, (p - 1) // 2, p) == 1 else -1


def square_threshold(p: int) -> int:
    """Precision t such that a unit congruent to 1 mod p^t is a square."""
    return 3 if p == 2 else 1


def is_square_local(x, place: PlaceLike) -> bool:
    """Is x a nonzero square in the completion of Q at ``place``?"""
    x = as_fraction(x)
    if x == 0:
        raise ZeroInputError("is_square_local needs a nonzero argument")
    place = as_place(place)
    if place.is_real:
        return x > 0
    p = place.p
    v = valuation(x, p)
    if v % 2:
        return False
    u = unit_part(x, p)
    if p == 2:
        return unit_residue(u, 8) == 1
    return legendre(unit_residue(u, p), p) == 1


def is_rational_square(x) -> bool:
    x = as_fraction(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def rational_sqrt(x) -> Optional[Fraction]:
    x = as_fraction(x)
    if not is_rational_square(x):
        return None
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def quadratic_extension_type(a, p: int) -> str:
    """Classify Q_p(sqrt a)/Q_p as ``"split"``, ``"unramified"`` or ``"ramified"``."""
    a = as_fraction(a)
    if a == 0:
        raise ZeroInputError("a must be nonzero")
    v = valuation(a, p)
    if v % 2:
        return "ramified"
    u = unit_part(a, p)
    if p == 2:
        r = unit_residue(u, 8)
        if r == 1:
            return "split"
        return "unramified" if r == 5 else "ramified"
    return "split" if legendre(unit_residue(u, p), p) == 1 else "unramified"


@dataclass(frozen=True)
class PadicElem:
    """Either an exact rational or a truncated p-adic number ``p^valuation * unit``.

    For truncated elements ``unit`` is a p-adic unit known modulo ``p^prec``.
    """

    p: int
    exact: Optional[Fraction] = None
    unit: Optional[int] = None
    valuation: Optional[int] = None
    prec: Optional[int] = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def residue(self) -> int:
        if self.is_exact:
            raise ValueError("exact element has no truncated residue")
        return self.unit

    def to_int(self) -> int:
        """An integer approximant, correct modulo p^(valuation + prec)."""
        if self.is_exact:
            if self.exact.denominator != 1:
                raise ValueError("exact element is not an integer")
            return int(self.exact)
        return self.p**self.valuation * self.unit

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.exact)
        head = f"{self.unit}" if self.valuation == 0 else f"{self.p}^{self.valuation}*{self.unit}"
        return f"{head} + O({self.p}^{self.valuation + self.prec})"


def _integral_primitive(f: Poly, p: int) -> Poly:
    # scale by a power of p times a p-unit so the coefficients are p-integral with a unit among them
    m = min(valuation(c, p) for c in f.coeffs if c)
    return f * Fraction(p) ** (-m)


def _int_mod(c: Fraction, mod: int) -> int:
    return c.numerator * pow(c.denominator, -1, mod) % mod


def hensel_lift(f: Poly, x0: int, ctx: PrimeCtx) -> PadicElem:
    """Newton-lift the approximate root x0 of f to a p-adic root.

    Hensel's criterion is tested on the p-primitive rescaling of f. The result
    agrees with the true root to ``ctx.prec`` p-adic digits beyond its valuation,
    and lies in the class ``x0 mod p^(v(f'(x0)) + 1)``.
    """
    p, prec = ctx.p, ctx.prec
    if f.degree < 1:
        raise CriterionFailsError("constant polynomial has no roots")
    F = _integral_primitive(f, p)
    dF = F.derivative()
    fx, dfx = F(x0), dF(x0)
    vf, e = valuation(fx, p), valuation(dfx, p)
    if fx == 0 and dfx == 0:
        raise CriterionFailsError("x0 is a multiple root")
    if fx == 0:
        if x0 == 0:
            return PadicElem(p, exact=Fraction(0))
        k = valuation(x0, p)
        return PadicElem(p, unit=(x0 // p**k) % p**prec, valuation=k, prec=prec)
    if not vf > 2 * e:
        raise CriterionFailsError(f"v(f(x0)) = {vf} is not > 2 v(f'(x0)) = {2 * e}")
    if prec <= e:
        raise PrecisionLossError(f"precision {prec} cannot separate roots (v(f'(x0)) = {e})")

    def lift_to(abs_prec: int) -> int:
        # root modulo p^abs_prec; error after an iterate is v(F(x)) - e
        mod = p ** (abs_prec + 2 * e + 2)
        coeffs = [_int_mod(c, mod) for c in F.coeffs]
        dcoeffs = [_int_mod(c, mod) for c in dF.coeffs]

        def ev(cs, x):
            acc = 0
            for c in reversed(cs):
                acc = (acc * x + c) % mod
            return acc

        x = x0 % mod
        pe = p**e
        while True:
            fx = ev(coeffs, x)
            if fx == 0 or _vp_int(fx, p) - e >= abs_prec:
                return x % p**abs_prec
            dfx = ev(dcoeffs, x)
            x = (x - (fx // pe) * pow(dfx // pe, -1, mod)) % mod

    r = lift_to(prec)
    k = _vp_int(r, p) if r else None
    bound = prec
    while k is None:
        # the root is divisible by a high power of p; look further
        if F(0) == 0:
            return PadicElem(p, exact=Fraction(0))
        bound *= 2
        r = lift_to(bound)
        k = _vp_int(r, p) if r else None
    r = lift_to(k + prec)
    return PadicElem(p, unit=(r // p**k) % p**prec, valuation=k, prec=prec)


def square_class_stable(f: Poly, disc_center, disc_depth: int, ctx) -> bool:
    """Is the square class of f constant on the disc ``disc_center + p^disc_depth Z_p``?

    Sufficient test: every Taylor term of f at the center is divisible by
    ``p^t * f(center)`` on the disc, with t = 1 (odd p) or 3 (p = 2), which makes
    ``f(x)/f(center)`` a square unit.
    """
    p = _prime(ctx)
    c = as_fraction(disc_center)
    taylor = f.taylor(c)
    f0 = taylor[0]
    if f0 == 0:
        return False
    need = valuation(f0, p) + square_threshold(p)
    for k, coeff in enumerate(taylor[1:], start=1):
        if coeff and valuation(coeff, p) + disc_depth * k < need:
            return False
    return True
