"""Wave limiting for the high-resolution correction terms.

Smoothness ratios theta compare each wave with its upwind neighbour of
the same family; at edges with a large material-parameter jump the
upwind wave is first decomposed into transmitted and reflected parts of
the acoustic (density, normal-momentum) subsystem and only the
transmitted component enters the comparison.  The flux-limiter phi then
scales the wave; the modified minmod variant phi = minmod(1, theta/3)
adds extra dissipation used inside the stiff (water) material.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LimiterKind:
    """Flux-limiter selection: none|minmod|modified_minmod|mc|vanleer.

    scale only applies to modified_minmod: phi = max(0, min(1, scale*theta)).
    """

    name: str
    scale: float = 1.0 / 3.0

    _VALID = ("none", "minmod", "modified_minmod", "mc", "vanleer")

    def __post_init__(self):
        if self.name not in self._VALID:
            raise ValueError(f"unknown limiter {self.name!r}, expected one of {self._VALID}")
        if not 0.0 < self.scale <= 1.0:
            raise ValueError(f"modified_minmod scale must be in (0, 1], got {self.scale}")


NONE = LimiterKind("none")
MINMOD = LimiterKind("minmod")
MODIFIED_MINMOD = LimiterKind("modified_minmod")
MC = LimiterKind("mc")
VANLEER = LimiterKind("vanleer")

# theta policies at material-interface edges
STANDARD_PROJECTION = "standard_projection"
TRANSMISSION_BASED = "transmission_based"


def theta_standard(wave_here, wave_upwind):
    """Projection ratio (W_up . W_here) / (W_here . W_here); 0 if W_here = 0.

    Accepts single waves of shape (ncomp,) or batches (..., ncomp).
    """
    wave_here = np.asarray(wave_here, dtype=float)
    wave_upwind = np.asarray(wave_upwind, dtype=float)
    dot_here = np.einsum("...c,...c->...", wave_here, wave_here)
    dot_up = np.einsum("...c,...c->...", wave_upwind, wave_here)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(dot_here > 0.0, dot_up / np.where(dot_here > 0.0, dot_here, 1.0), 0.0)
    return float(theta) if theta.ndim == 0 else theta


def acoustic_alphas(wave_rho, wave_mom, c_left, c_right):
    """Expand (rho, normal momentum) onto the acoustic eigenvectors.

    Eigenvectors [1, -c_left] (left-going) and [1, c_right] (right-going)
    of the density/momentum acoustic system at an edge; returns
    (alpha_1, alpha_3).
    """
    den = c_left + c_right
    a1 = (c_right * wave_rho - wave_mom) / den
    a3 = (c_left * wave_rho + wave_mom) / den
    return a1, a3


def theta_transmission(alpha_upwind, alpha_here, c_minus, c_plus, family):
    """Smoothness ratio using the transmitted part of the upwind wave.

    c_minus/c_plus are the sound speeds of the cells left/right of the
    interface edge.  Family 1 (left-going acoustic) limits against the
    wave transmitted from the right; family 3 against the wave
    transmitted from the left.
    """
    if family not in (1, 3):
        raise ValueError(f"transmission theta only defined for families 1 and 3, got {family}")
    alpha_here = np.asarray(alpha_here, dtype=float)
    alpha_upwind = np.asarray(alpha_upwind, dtype=float)
    if family == 1:
        coeff = 2.0 * c_plus / (c_minus + c_plus)
    else:
        coeff = 2.0 * c_minus / (c_minus + c_plus)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(
            alpha_here != 0.0, alpha_upwind / np.where(alpha_here != 0.0, alpha_here, 1.0), 0.0
        )
    theta = ratio * coeff
    return float(theta) if np.ndim(theta) == 0 else theta


def flux_limiter(theta, kind: LimiterKind):
    """Flux-limiter function phi(theta) for the given kind."""
    theta = np.asarray(theta, dtype=float)
    if kind.name == "none":
        phi = np.ones_like(theta)
    elif kind.name == "minmod":
        phi = np.maximum(0.0, np.minimum(1.0, theta))
    elif kind.name == "modified_minmod":
        phi = np.maximum(0.0, np.minimum(1.0, kind.scale * theta))
    elif kind.name == "mc":
        phi = np.maximum(0.0, np.minimum(np.minimum(0.5 * (1.0 + theta), 2.0), 2.0 * theta))
    else:  # vanleer
        phi = (theta + np.abs(theta)) / (1.0 + np.abs(theta))
    return float(phi) if phi.ndim == 0 else phi


def limit_waves(waves, speeds, thetas, kind: LimiterKind):
    """Scaled waves phi(theta^p) * W^p; speeds are passed through untouched."""
    waves = np.asarray(waves, dtype=float)
    phi = np.asarray(flux_limiter(thetas, kind))
    return phi[..., None] * waves
