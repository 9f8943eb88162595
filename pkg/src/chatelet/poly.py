"""Dense univariate polynomials over the rationals, plus the expression parser.

Coefficients are stored lowest degree first as ``Fraction`` objects. Polynomials
are immutable and hashable. The degrees seen in this package are at most 4,
so everything here is the plain schoolbook version.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from chatelet.errors import ParseError

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-43/17"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ParseError(f"not a rational literal: {x!r}", 0, x)
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {x!r}", s.index("/") + 1, x) from None
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class Poly:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> "Poly":
        out = cls.const(lead)
        for r in roots:
            out = out * cls((-as_fraction(r), 1))
        return out

    # basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(as_fraction(other))

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        d = self._coerce(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(d.coeffs) + 1, 0)
        inv = 1 / d.lc
        for k in range(len(rem) - len(d.coeffs), -1, -1):
            t = rem[k + d.degree] * inv
            q[k] = t
            if t:
                for j, b in enumerate(d.coeffs):
                    rem[k + j] -= t * b
        return Poly(q), Poly(rem[: d.degree] if d.degree > 0 else ())

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __truediv__(self, other) -> "Poly":
        c = as_fraction(other) if not isinstance(other, Poly) else None
        if c is None:
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            c = other.lc
        if c == 0:
            raise ZeroDivisionError("division by zero")
        return Poly(a / c for a in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # calculus and transforms --------------------------------------------
    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        return self / self.lc

    def taylor(self, r: Number) -> list[Fraction]:
        """Coefficients of ``self(r + t)`` as a polynomial in t."""
        cs = list(self.coeffs)
        n = len(cs)
        # repeated synthetic division by (t - r)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += r * cs[j + 1]
        return cs

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def shift(self, r: Number) -> "Poly":
        return Poly(self.taylor(as_fraction(r)))

    def scale_var(self, s: Number) -> "Poly":
        """``self(s*x)``."""
        s = as_fraction(s)
        return Poly(c * s**i for i, c in enumerate(self.coeffs))

    def reversed_to(self, n: int) -> "Poly":
        """``x^n * self(1/x)`` for n >= degree."""
        if n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs))

    def at_infinity_chart(self) -> "Poly":
        """Representative of the square class of ``self(1/w)`` as a polynomial in w.

        Multiplies by ``w^(2k)`` with 2k the least even integer >= degree, which
        leaves the square class unchanged wherever both sides are defined.
        """
        d = self.degree
        return self.reversed_to(d + (d % 2))

    # number theory ------------------------------------------------------
    def integer_primitive(self) -> tuple[Fraction, list[int]]:
        """Return (k, cs) with self = k * sum(cs[i] x^i), cs integral, content 1, lc > 0."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [c // g for c in ints]

    def content_primes(self) -> set[int]:
        """Primes dividing a numerator or denominator of some coefficient."""
        from sympy import primefactors

        out: set[int] = set()
        for c in self.coeffs:
            if c:
                out.update(primefactors(c.numerator))
                out.update(primefactors(c.denominator))
        return out

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def discriminant(self) -> Fraction:
        n = self.degree
        if n < 1:
            raise ValueError("discriminant of a constant")
        if n == 1:
            return Fraction(1)
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * resultant(self, self.derivative()) / self.lc

    def real_root_count(self) -> int:
        """Number of distinct real roots, by a Sturm sequence."""
        if self.degree < 1:
            return 0
        f = self.monic()
        seq = [f, f.derivative()]
        while not seq[-1].is_zero():
            r = seq[-2] % seq[-1]
            if r.is_zero():
                break
            seq.append(-r)

        def changes(signs: Sequence[int]) -> int:
            s = [x for x in signs if x]
            return sum(1 for u, v in zip(s, s[1:]) if u != v)

        at_minus = [(-1) ** p.degree * (1 if p.lc > 0 else -1) for p in seq]
        at_plus = [1 if p.lc > 0 else -1 for p in seq]
        return changes(at_minus) - changes(at_plus)

    # printing -----------------------------------------------------------
    def to_expr(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            m = -c if c < 0 else c
            if i == 0:
                body = str(m)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if m == 1 else f"{m}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_expr()

    def __repr__(self) -> str:
        return f"Poly({self.to_expr()!r})"


def resultant(f: Poly, g: Poly) -> Fraction:
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    df, dg = f.degree, g.degree
    if dg == 0:
        return g.lc**df
    if df == 0:
        return f.lc**dg
    if df < dg:
        sign = -1 if (df * dg) % 2 else 1
        return sign * resultant(g, f)
    r = f % g
    if r.is_zero():
        return Fraction(0)
    # res(f, g) = (-1)^(df dg) lc(g)^(df - dr) res(g, r)
    sign = -1 if (df * dg) % 2 else 1
    return sign * g.lc ** (df - r.degree) * resultant(g, r)


# --------------------------------------------------------------------------
# expression parser
#
#   expr   := term (('+' | '-') term)*
#   term   := unary (('*' | '/') unary)*
#   unary  := ('+' | '-') unary | power
#   power  := atom ('^' unary)?          exponent must be a constant integer >= 0
#   atom   := INTEGER | VAR | '(' expr ')'
#
# '/' divides by a nonzero constant, so rational literals are written a/b.
# '**' is accepted as a synonym for '^'.

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]\w*))")


class _Parser:
    def __init__(self, text: str, var: str):
        self.text = text
        self.var = var
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), start))
            elif m.group(2) is not None:
                op = "^" if m.group(2) == "**" else m.group(2)
                self.tokens.append(("op", op, start))
            else:
                if m.group(3) != var:
                    raise ParseError(f"unknown symbol {m.group(3)!r} (expected {var!r})", start, text)
                self.tokens.append(("var", var, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise ParseError(msg, self.peek()[2], self.text)

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty expression", 0, self.text)
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return out

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by a nonzero constant", pos, self.text)
                acc = acc / rhs.lc
        return acc

    def unary(self) -> Poly:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            pos = self.take()[2]
            e = self.unary()
            if not e.is_constant() or e.lc.denominator != 1 or e.lc < 0:
                raise ParseError("exponent must be a nonnegative integer", pos + 1, self.text)
            return base ** int(e.lc)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Poly.const(int(val))
        if kind == "var":
            self.take()
            return Poly.x()
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected token {val!r}")


def parse_poly(text: str, var: str = "x") -> Poly:
    """Parse an arithmetic expression in one variable into a Poly.

    >>> parse_poly("3*(x^2-7)*(17*x^2-43)").coeffs[0]
    Fraction(903, 1)
    """
    return _Parser(text, var).parse()
