"""Closed-form linear-acoustics transmission through layered interfaces.

A pressure jump p0 incident on an interface between media A and B splits
into transmitted and reflected jumps T*p0 and R*p0 set by the acoustic
impedances Z = rho*c.  For a thin intermediate layer the infinite train
of internal reflections sums to a geometric series whose total equals
the direct A->C transmission, which is what justifies dropping a thin
plastic wall from the shock-tube model.  Used as an analytic oracle for
the nonlinear solver in the small-amplitude limit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eos import TammannEos, sound_speed_rp


@dataclass(frozen=True)
class AcousticMedium:
    """Linear medium (rho, c) with derived impedance Z = rho*c."""

    rho: float
    c: float

    def __post_init__(self):
        if self.rho <= 0.0 or self.c <= 0.0:
            raise ValueError(f"need positive rho and c, got {self.rho}, {self.c}")

    @property
    def Z(self) -> float:
        return self.rho * self.c

    @classmethod
    def from_eos(cls, rho: float, p: float, eos: TammannEos) -> "AcousticMedium":
        return cls(rho=rho, c=sound_speed_rp(rho, p, eos))


def interface_coefficients(Z_A: float, Z_B: float) -> tuple[float, float]:
    """Pressure transmission and reflection coefficients (T, R).

    T = 2 Z_B / (Z_A + Z_B), R = (Z_B - Z_A) / (Z_A + Z_B); pressure
    continuity gives 1 + R = T.
    """
    if Z_A <= 0.0 or Z_B <= 0.0:
        raise ValueError("impedances must be positive")
    return 2.0 * Z_B / (Z_A + Z_B), (Z_B - Z_A) / (Z_A + Z_B)


def nth_transmission(Z_a: float, Z_p: float, Z_w: float, N: int) -> float:
    """Pressure ratio of the N-th wave transmitted through the layer.

    The first transmitted wave is the product of the two single-interface
    transmissions; each later one carries one more round trip inside the
    layer, reflecting off both faces.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    direct = (2.0 * Z_w / (Z_w + Z_p)) * (2.0 * Z_p / (Z_p + Z_a))
    ratio = ((Z_a - Z_p) * (Z_w - Z_p)) / ((Z_a + Z_p) * (Z_w + Z_p))
    return direct * ratio ** (N - 1)


def total_transmission(Z_a: float, Z_w: float) -> float:
    """Asymptotic transmitted ratio: the layer drops out of the sum."""
    return 2.0 * Z_w / (Z_w + Z_a)


def reverberation_time(width: float, c_plastic: float) -> float:
    """Delay between consecutive transmitted waves: one round trip."""
    if width < 0.0 or c_plastic <= 0.0:
        raise ValueError(f"need width >= 0 and c > 0, got {width}, {c_plastic}")
    return 2.0 * width / c_plastic
