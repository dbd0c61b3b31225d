"""Generalized Gegenbauer functions of fractional degree."""

from .errors import ConvergenceError, DivergenceError, DomainError, GgfError
from .params import AnglePoint, GgfParams, Side

__all__ = [
    "AnglePoint",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "GgfError",
    "GgfParams",
    "Side",
]
