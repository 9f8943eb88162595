"""Quadratic Hilbert symbols over the completions of Q.

Symbols are returned additively, as local invariants in {0, 1/2} of Q/Z.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from sympy import primefactors

from chatelet.errors import NotRamifiedError, RamifiedOrSplitError, ZeroInputError
from chatelet.padic import (
    REAL,
    Place,
    PlaceLike,
    as_place,
    legendre,
    quadratic_extension_type,
    valuation,
)
from chatelet.poly import as_fraction

__all__ = [
    "Inv2",
    "Place",
    "REAL",
    "hilbert_symbol",
    "invariant_sum",
    "invariant_unramified",
    "find_nontrivial_unit",
    "is_integral_norm",
    "relevant_places",
]


class Inv2(enum.IntEnum):
    """Element of the 2-torsion of Q/Z; ``HALF`` stands for 1/2."""

    ZERO = 0
    HALF = 1

    def __add__(self, other):
        if isinstance(other, Inv2):
            return Inv2((int(self) + int(other)) % 2)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self

    def as_fraction(self) -> Fraction:
        return Fraction(int(self), 2)

    def __str__(self) -> str:
        return "1/2" if self else "0"

    @classmethod
    def parse(cls, text) -> "Inv2":
        t = str(text).strip()
        if t in ("0", "0/1"):
            return cls.ZERO
        if t in ("1/2", "0.5"):
            return cls.HALF
        raise ValueError(f"not an element of (1/2)Z/Z: {text!r}")

    @classmethod
    def total(cls, values) -> "Inv2":
        out = cls.ZERO
        for v in values:
            out = out + v
        return out


def _integral_class(x: Fraction) -> int:
    # n/d and n*d differ by the square d^2
    return x.numerator * x.denominator


def hilbert_symbol(a, b, place: PlaceLike) -> Inv2:
    """Local invariant of the quaternion algebra (a, b) at ``place``.

    Zero exactly when b is a norm from the completion of Q(sqrt a).
    """
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ZeroInputError("Hilbert symbol of zero")
    place = as_place(place)
    if place.is_real:
        return Inv2.HALF if (a < 0 and b < 0) else Inv2.ZERO
    p = place.p
    A, B = _integral_class(a), _integral_class(b)
    alpha, beta = valuation(A, p), valuation(B, p)
    u, v = A // p**alpha, B // p**beta
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return Inv2(e % 2)
    sign = 1
    if (alpha * beta) % 2 and (p - 1) // 2 % 2:
        sign = -sign
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return Inv2.ZERO if sign == 1 else Inv2.HALF


def relevant_places(*xs) -> list[Place]:
    """Real place, 2, and every prime dividing a numerator or denominator."""
    primes = {2}
    for x in xs:
        x = as_fraction(x)
        primes.update(primefactors(abs(x.numerator)))
        primes.update(primefactors(x.denominator))
    return [REAL] + [Place(p) for p in sorted(primes)]


def invariant_sum(a, b) -> Inv2:
    """Sum of the local invariants of (a, b) over all places; always zero."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ZeroInputError("Hilbert symbol of zero")
    return Inv2.total(hilbert_symbol(a, b, v) for v in relevant_places(a, b))


def invariant_unramified(a, b, p: int) -> Inv2:
    """Invariant of (a, b) read off from v_p(b) when Q_p(sqrt a)/Q_p is unramified."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ZeroInputError("Hilbert symbol of zero")
    if quadratic_extension_type(a, p) != "unramified":
        raise RamifiedOrSplitError(f"Q_{p}(sqrt {a}) is not an unramified quadratic extension")
    return Inv2(valuation(b, p) % 2)


def find_nontrivial_unit(a, p: int = 2, limit: int = 1 << 16) -> int:
    """Smallest u >= 0 with (a, 1 - p*u) nontrivial at p.

    Only the residue characteristic 2 case over Q_2 is supported.
    """
    if p != 2:
        raise ValueError("find_nontrivial_unit is only defined for p = 2")
    a = as_fraction(a)
    if a == 0:
        raise ZeroInputError("a must be nonzero")
    if quadratic_extension_type(a, 2) != "ramified":
        raise NotRamifiedError(f"Q_2(sqrt {a})/Q_2 is not ramified")
    for u in range(limit):
        b = 1 - 2 * u
        if b and hilbert_symbol(a, b, 2):
            return u
    raise AssertionError("no nontrivial unit found; local class field theory says this cannot happen")


def is_integral_norm(a, x, p: int) -> bool:
    """Is x the norm of a nonzero integer of Q_p(sqrt a), for a ramified extension?

    With e = 2 the valuation of a norm is the valuation of the integer it comes
    from, so integrality of x plus the symbol test decides it.
    """
    a, x = as_fraction(a), as_fraction(x)
    if x == 0 or a == 0:
        raise ZeroInputError("is_integral_norm needs nonzero arguments")
    if quadratic_extension_type(a, p) != "ramified":
        raise NotRamifiedError(f"Q_{p}(sqrt {a})/Q_{p} is not ramified")
    return valuation(x, p) >= 0 and hilbert_symbol(a, x, p) == Inv2.ZERO

