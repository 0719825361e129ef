"""Cavity geometry, kinematics, and the transformation-scheme selector.

Natural units throughout: hbar = c = 1, so lengths are inverse energies and
the velocity is the dimensionless fraction of the speed of light.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Scheme",
    "Cavity1D",
    "Cavity2D",
    "NONREL_VELOCITY_LIMIT",
    "nonrelativistic_flag",
]

# Galilean treatments are leading-order-in-v approximations; beyond this
# speed their outputs carry an explicit validity flag.
NONREL_VELOCITY_LIMIT = 0.3


class Scheme(enum.Enum):
    """Which transformation treatment governs mode functions and walls.

    GALILEO_LAB_PRIOR      start from the wave equation in the lab frame,
                           Galileo-shift to the cavity frame and back.
    GALILEO_COMOVING_PRIOR start from the wave equation in the cavity frame,
                           Galileo-shift into the lab frame.
    LORENTZ_EXACT          exact special-relativistic treatment; the moving
                           cavity is contracted to L/gamma in the lab frame.

    The two Galilean variants are non-relativistic approximations and are
    flagged as such in all outputs.
    """

    GALILEO_LAB_PRIOR = "galileo-lab"
    GALILEO_COMOVING_PRIOR = "galileo-comoving"
    LORENTZ_EXACT = "lorentz"

    @property
    def label(self) -> str:
        return self.value

    @property
    def is_galilean(self) -> bool:
        return self is not Scheme.LORENTZ_EXACT

    @classmethod
    def from_label(cls, label: str) -> "Scheme":
        for member in cls:
            if member.value == label:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown scheme {label!r} (expected one of: {valid})")


def _check_velocity(v: float) -> None:
    if not math.isfinite(v) or abs(v) >= 1.0:
        raise ValueError(f"velocity must satisfy |v| < 1, got {v!r}")


def _check_length(value: float, name: str) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class Cavity1D:
    """A 1D Dirichlet cavity of proper length L moving at constant velocity v."""

    proper_length: float
    velocity: float = 0.0

    def __post_init__(self) -> None:
        _check_length(self.proper_length, "proper_length")
        _check_velocity(self.velocity)

    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.velocity**2)

    def lab_length(self, scheme: Scheme) -> float:
        """Instantaneous cavity extent on a lab-time slice."""
        if scheme is Scheme.LORENTZ_EXACT:
            return self.proper_length / self.gamma()
        return self.proper_length

    def walls(self, scheme: Scheme, t: float) -> tuple[float, float]:
        """Positions of the left and right walls at lab time t."""
        left = self.velocity * t
        return left, left + self.lab_length(scheme)


@dataclass(frozen=True)
class Cavity2D:
    """A rectangular Dirichlet cavity (proper sides a, b) moving along x."""

    proper_length_x: float
    proper_length_y: float
    velocity: float = 0.0

    def __post_init__(self) -> None:
        _check_length(self.proper_length_x, "proper_length_x")
        _check_length(self.proper_length_y, "proper_length_y")
        _check_velocity(self.velocity)

    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.velocity**2)

    def lab_length_x(self) -> float:
        # Only the boost axis is contracted.
        return self.proper_length_x / self.gamma()

    def walls_x(self, t: float) -> tuple[float, float]:
        left = self.velocity * t
        return left, left + self.lab_length_x()


def nonrelativistic_flag(scheme: Scheme, velocity: float) -> str | None:
    """Validity note attached to Galilean-scheme outputs at large velocity."""
    if scheme.is_galilean and abs(velocity) > NONREL_VELOCITY_LIMIT:
        return (
            f"{scheme.label}: non-relativistic approximation, "
            f"valid to O(v^2) only (|v| = {abs(velocity):g} > {NONREL_VELOCITY_LIMIT})"
        )
    return None
