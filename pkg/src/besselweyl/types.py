"""Result and parameter types shared by the spectral modules."""
from dataclasses import dataclass
from enum import Enum
import math

from .errors import DomainError


class Method(Enum):
    SECULAR = "secular"
    SHOOTING = "shooting"
    FD = "fd"


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple
    residuals: tuple
    method: Method
    negative_count: int

    def __post_init__(self):
        ev = list(self.eigenvalues)
        if ev != sorted(ev):
            raise ValueError("eigenvalues must be ascending")


@dataclass(frozen=True)
class IntervalSpec:
    """(0, b) for kind "finite", (0, inf) for kind "halfline"."""
    kind: str
    b: float = math.inf

    def __post_init__(self):
        if self.kind not in ("finite", "halfline"):
            raise DomainError(f"unknown interval kind {self.kind!r}")
        if self.kind == "finite" and not (0 < self.b < math.inf):
            raise DomainError(f"finite interval needs 0 < b < inf, got {self.b}")

    @classmethod
    def finite(cls, b):
        return cls("finite", float(b))

    @classmethod
    def halfline(cls):
        return cls("halfline")

    @property
    def is_finite(self):
        return self.kind == "finite"

    def __str__(self):
        return f"(0, {self.b:g})" if self.is_finite else "(0, inf)"


def as_interval(interval):
    """Accept an IntervalSpec, a number b, or None / inf for the half-line."""
    if isinstance(interval, IntervalSpec):
        return interval
    if interval is None or interval == math.inf:
        return IntervalSpec.halfline()
    return IntervalSpec.finite(interval)


@dataclass(frozen=True)
class ExtensionParam:
    """Boundary parameter h of A_h = ker(Gamma_1 - h Gamma_0); h = inf is ker Gamma_0."""
    h: float

    def __post_init__(self):
        if math.isnan(self.h) or self.h == -math.inf:
            raise DomainError(f"invalid extension parameter {self.h}")

    @classmethod
    def friedrichs(cls):
        return cls(math.inf)

    @property
    def is_infinite(self):
        return self.h == math.inf


def as_param(h):
    return h if isinstance(h, ExtensionParam) else ExtensionParam(float(h))
