"""Seeded surface corpora: the two worked examples, random split surfaces, and
surfaces built from two quadratics that are irreducible modulo a prime dividing a
to odd order.
"""

from __future__ import annotations

import json
import random
from importlib import resources
from typing import Optional

from chatelet.brauer import BrauerKind, classify
from chatelet.errors import ChateletError
from chatelet.padic import legendre
from chatelet.poly import Poly
from chatelet.surface import ChateletSurface, new_surface

WORKED_EXAMPLES = [
    {"name": "two-quadratics-holds", "a": "17", "P": "3*(x^2-7)*(17*x^2-43)"},
    {"name": "two-quadratics-fails", "a": "17", "P": "3*(x^2-7)*(17*x^2-301)"},
]

SPLIT_A_VALUES = (2, -2, 5, -5, 17, -1, 13)


def random_split_surface(rng: random.Random, max_root: int = 10, max_c: int = 10) -> ChateletSurface:
    """A surface with P = c * prod (x - e_i) for distinct integer roots and integer c."""
    a = rng.choice(SPLIT_A_VALUES)
    degree = rng.choice((3, 4))
    roots = rng.sample(range(-max_root, max_root + 1), degree)
    c = 0
    while c == 0:
        c = rng.randint(-max_c, max_c)
    return new_surface(a, Poly.from_roots(roots, c))


def split_corpus(seed: int = 2024, count: int = 50) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        s = random_split_surface(rng)
        out.append({"name": f"split-{i:02d}", **s.to_dict()})
    return out


def _nonresidue_quadratic(rng: random.Random, p: int, bound: int = 12) -> Poly:
    # x^2 + b x + c with integer coefficients and discriminant a nonresidue mod p
    while True:
        b, c = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if legendre(b * b - 4 * c, p) == -1:
            return Poly((c, b, 1))


def two_quadratics_surface(rng: random.Random, primes=(3, 5, 7, 11, 13)) -> tuple[ChateletSurface, int]:
    """A surface c*P1*P2 with v_p(a) = 1 and P1, P2 irreducible mod p, having Q_p-points."""
    from chatelet.local import locally_solvable

    while True:
        p = rng.choice(primes)
        u = rng.choice((1, -1, 2, -2, 3, -3, 5, 7))
        if u % p == 0:
            continue
        a = p * u
        f1, f2 = _nonresidue_quadratic(rng, p), _nonresidue_quadratic(rng, p)
        if f1 == f2:
            continue
        c = rng.choice((1, -1, 2, -2, 3, -3, 5, 6))
        try:
            s = new_surface(a, f1 * f2 * c)
        except ChateletError:
            continue
        if s.factorization.degrees() != [2, 2] or classify(s).kind is not BrauerKind.Z2:
            continue
        if locally_solvable(s, p):
            return s, p


def two_quadratics_corpus(seed: int = 52, count: int = 20) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        s, p = two_quadratics_surface(rng)
        out.append({"name": f"irreducible-mod-{p}-{i:02d}", "prime": p, **s.to_dict()})
    return out


def build_corpus() -> list[dict]:
    return WORKED_EXAMPLES + split_corpus() + two_quadratics_corpus()


def load_bundled() -> list[dict]:
    text = resources.files("chatelet").joinpath("data/corpus.json").read_text()
    return json.loads(text)


def load(path: Optional[str] = None) -> list[dict]:
    if path is None:
        return load_bundled()
    with open(path) as fh:
        return json.load(fh)

