"""Parameter and evaluation-point types."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["Side", "GgfParams", "AnglePoint"]


class Side(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class GgfParams:
    """One generalized Gegenbauer function: parameter, degree and side."""

    lam: float
    nu: float
    side: Side = Side.RIGHT

    def __post_init__(self):
        if not self.lam > -0.5:
            raise DomainError(f"lambda must exceed -1/2, got {self.lam}")
        if not self.nu >= 0:
            raise DomainError(f"nu must be non-negative, got {self.nu}")
        object.__setattr__(self, "side", Side(self.side))

    @property
    def is_integer_degree(self) -> bool:
        return self.nu == math.floor(self.nu)

    def with_side(self, side: Side) -> "GgfParams":
        return GgfParams(self.lam, self.nu, side)


@dataclass(frozen=True)
class AnglePoint:
    """Evaluation location stored as the angle theta in [0, pi], x = cos(theta).

    Keeping the angle (rather than x) lets 1 - x and 1 + x be formed without
    cancellation near the endpoints.
    """

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")

    @classmethod
    def from_x(cls, x: float, one_minus_x: float | None = None) -> "AnglePoint":
        """Angle for ``x``; pass ``one_minus_x`` when it is known more accurately."""
        if not -1.0 <= x <= 1.0:
            raise DomainError(f"x must lie in [-1, 1], got {x}")
        if one_minus_x is None:
            one_minus_x = 1.0 - x
        if x >= 0.0:
            theta = 2.0 * math.asin(math.sqrt(0.5 * one_minus_x))
        else:
            theta = 2.0 * math.acos(math.sqrt(0.5 * (2.0 - one_minus_x)))
        return cls(min(max(theta, 0.0), math.pi))

    @property
    def x(self) -> float:
        return math.cos(self.theta)

    @property
    def sin_theta(self) -> float:
        return math.sin(self.theta)

    @property
    def z(self) -> float:
        """(1 - x)/2 computed as sin^2(theta/2)."""
        return math.sin(0.5 * self.theta) ** 2

    @property
    def w(self) -> float:
        """(1 + x)/2 computed as cos^2(theta/2)."""
        return math.cos(0.5 * self.theta) ** 2

    def reflected(self) -> "AnglePoint":
        return AnglePoint(math.pi - self.theta)


def as_angle(theta) -> AnglePoint:
    return theta if isinstance(theta, AnglePoint) else AnglePoint(float(theta))
