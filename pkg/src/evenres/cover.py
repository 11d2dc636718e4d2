"""Points of the logarithmic cover of C minus the origin.

A point is stored as ``z = x + i y`` with ``x = log|lambda|`` and ``y`` the
unbounded argument, so every function on the cover becomes an ordinary
function of ``z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class CoverPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("cover point coordinates must be finite", x=self.x, y=self.y)

    @classmethod
    def from_polar(cls, modulus, arg):
        if not modulus > 0:
            raise DomainError("modulus must be positive (0 is not on the cover)", modulus=modulus)
        return cls(math.log(modulus), float(arg))

    @classmethod
    def from_z(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def modulus(self) -> float:
        return math.exp(self.x)

    @property
    def sheet_index(self) -> int:
        """``k`` with ``y`` in ``[k pi, (k+1) pi)``."""
        return math.floor(self.y / math.pi)

    def to_dict(self):
        return {
            "x": self.x,
            "y": self.y,
            "modulus": self.modulus,
            "arg_degrees": math.degrees(self.y),
            "arg_over_pi": self.y / math.pi,
        }


def project(p: CoverPoint) -> complex:
    return math.exp(p.x) * complex(math.cos(p.y), math.sin(p.y))


def conjugate(p: CoverPoint) -> CoverPoint:
    return CoverPoint(p.x, -p.y)


def rotate_half_turns(p: CoverPoint, m: int) -> CoverPoint:
    """Multiply by ``e^{i pi m}`` on the cover."""
    return CoverPoint(p.x, p.y + m * math.pi)


def as_z(points) -> np.ndarray:
    """Coerce a CoverPoint, complex z, or an array of either to complex z values."""
    if isinstance(points, CoverPoint):
        return np.asarray(points.z)
    arr = np.asarray(points)
    if arr.dtype == object:
        return np.vectorize(lambda p: p.z if isinstance(p, CoverPoint) else complex(p),
                            otypes=[complex])(arr)
    return arr.astype(complex)


def half_turn_reduction(y):
    """Split arguments as ``y = y0 + m pi`` with ``y0`` in ``(-pi/2, pi/2]``.

    Works elementwise; returns ``(y0, m)`` with integer ``m``.
    """
    y = np.asarray(y, dtype=float)
    m = np.ceil((y - math.pi / 2) / math.pi).astype(np.int64)
    return y - m * math.pi, m
