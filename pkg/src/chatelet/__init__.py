"""Brauer-Manin analysis of Chatelet surfaces y^2 - a z^2 = P(x) over Q."""

from chatelet.padic import REAL, Place, PrimeCtx, is_square_local, valuation
from chatelet.poly import Poly, parse_poly
from chatelet.surface import ChateletSurface, new_surface
from chatelet.symbols import Inv2, hilbert_symbol
from chatelet.verdict import perpetual_classify, wa_decide

__version__ = "0.1.0"

__all__ = [
    "REAL",
    "ChateletSurface",
    "Inv2",
    "Place",
    "Poly",
    "PrimeCtx",
    "hilbert_symbol",
    "is_square_local",
    "new_surface",
    "parse_poly",
    "perpetual_classify",
    "valuation",
    "wa_decide",
]
