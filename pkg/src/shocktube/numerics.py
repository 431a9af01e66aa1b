"""Run-time numerics configuration shared by the 1D and 2D solvers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .limiters import (
    MINMOD,
    MODIFIED_MINMOD,
    STANDARD_PROJECTION,
    TRANSMISSION_BASED,
    LimiterKind,
)


@dataclass
class NumericsConfig:
    """Solver knobs with the defaults used by the shock-tube scenarios.

    interior_solver : 'hllc' | 'exact' for same-material edges
    interface_solver: 'exact_lagrangian' | 'hllc_lagrangian' at material
                      interfaces (both keep the contact pinned to the edge)
    speed_estimate  : 'davis' | 'roe' HLLC wave-speed bounds
    limiter_bulk    : flux limiter away from the stiff material
    limiter_stiff   : flux limiter where both cells are the stiff material
                      (None disables the distinction)
    stiff_material  : material label the stiff limiter applies to
    theta_policy    : smoothness ratio at interface edges
    """

    cfl: float = 0.9
    order: int = 2
    interior_solver: str = "hllc"
    interface_solver: str = "exact_lagrangian"
    speed_estimate: str = "davis"
    limiter_bulk: LimiterKind = MINMOD
    limiter_stiff: LimiterKind | None = MODIFIED_MINMOD
    stiff_material: str | None = "water"
    theta_policy: str = TRANSMISSION_BASED
    transverse: bool = True
    splitting: str = "unsplit"  # 2D: 'unsplit' | 'dimensional'
    source_splitting: str = "strang"  # 2D source: 'strang' | 'godunov'
    axisymmetric: bool = True  # 2D geometric source on/off
    fixed_dt: float | None = None
    dt_max: float = np.inf

    _CHOICES = {
        "interior_solver": ("hllc", "exact"),
        "interface_solver": ("exact_lagrangian", "hllc_lagrangian"),
        "speed_estimate": ("davis", "roe"),
        "theta_policy": (STANDARD_PROJECTION, TRANSMISSION_BASED),
        "splitting": ("unsplit", "dimensional"),
        "source_splitting": ("strang", "godunov"),
    }

    def __post_init__(self):
        for key, choices in self._CHOICES.items():
            if getattr(self, key) not in choices:
                raise ValueError(f"{key} must be one of {choices}, got {getattr(self, key)!r}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")

    def with_overrides(self, **kwargs) -> "NumericsConfig":
        return replace(self, **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "NumericsConfig":
        """Build from flat config keys like 'riemann.interior'."""
        kw = {}
        key_map = {
            "cfl": "cfl",
            "order": "order",
            "riemann.interior": "interior_solver",
            "riemann.interface": "interface_solver",
            "riemann.speeds": "speed_estimate",
            "limiter.theta_policy": "theta_policy",
            "limiter.stiff_material": "stiff_material",
            "transverse": "transverse",
            "splitting": "splitting",
            "source_splitting": "source_splitting",
            "axisymmetric": "axisymmetric",
            "fixed_dt": "fixed_dt",
        }
        for src, dst in key_map.items():
            if src in d:
                kw[dst] = d[src]
        scale = float(d.get("limiter.modified_minmod_scale", 1.0 / 3.0))
        if "limiter.bulk" in d:
            kw["limiter_bulk"] = _limiter_from_name(d["limiter.bulk"], scale)
        if "limiter.stiff" in d:
            kw["limiter_stiff"] = _limiter_from_name(d["limiter.stiff"], scale)
        elif "limiter.modified_minmod_scale" in d:
            kw["limiter_stiff"] = LimiterKind("modified_minmod", scale=scale)
        if kw.get("stiff_material") in ("none", ""):
            kw["stiff_material"] = None
        return cls(**kw)


def _limiter_from_name(name, scale):
    if name in ("none", "off"):
        return LimiterKind("none")
    if name == "modified_minmod":
        return LimiterKind("modified_minmod", scale=scale)
    return LimiterKind(name)
