"""Tammann (stiffened gas) equation of state.

The pressure law p = (gamma - 1) rho e - gamma p_inf closes the Euler
equations for both compressible gas (p_inf = 0 reduces to an ideal gas)
and nearly incompressible liquids/solids, where p_inf is several orders
of magnitude above atmospheric pressure.  All quantities are SI
(kg/m^3, m/s, Pa, J/kg).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

P_ATM = 101325.0  # 1 atm in Pa


class InvalidStateError(ValueError):
    """Raised for thermodynamic states outside the EOS validity region."""


@dataclass(frozen=True)
class TammannEos:
    """Material parameters of the stiffened-gas pressure law.

    gamma : ratio of heat capacities, > 1
    p_inf : pressure offset in Pa, >= 0 (0 for an ideal gas)
    label : material name, used for reporting and material tables
    """

    gamma: float
    p_inf: float
    label: str = ""

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 1.0:
            raise InvalidStateError(f"gamma must be finite and > 1, got {self.gamma}")
        if not np.isfinite(self.p_inf) or self.p_inf < 0.0:
            raise InvalidStateError(f"p_inf must be finite and >= 0, got {self.p_inf}")


@dataclass(frozen=True)
class PrimState:
    """Primitive cell state (rho, u, p).

    u is a float in 1D or an (u_x, u_y) tuple in 2D.
    """

    rho: float
    u: float | tuple[float, float]
    p: float

    def velocity(self) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.u, dtype=float))

    def kinetic_energy(self) -> float:
        v = self.velocity()
        return 0.5 * self.rho * float(v @ v)


@dataclass(frozen=True)
class ConsState:
    """Conserved cell state (rho, momentum, E).

    momentum is a float in 1D or an (m_x, m_y) tuple in 2D; E is the
    total energy density rho*e + rho*|u|^2/2.
    """

    rho: float
    momentum: float | tuple[float, float]
    E: float

    def velocity(self) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.momentum, dtype=float)) / self.rho


# Table of Tammann parameters for the materials used in the shock-tube
# scenarios.  The polystyrene p_inf is tuned so the model reproduces the
# sound speed of the solid; air and water values are standard.
MATERIALS: dict[str, TammannEos] = {
    "air": TammannEos(gamma=1.4, p_inf=0.0, label="air"),
    "plastic": TammannEos(gamma=1.1, p_inf=4.79e9, label="plastic"),
    "water": TammannEos(gamma=7.15, p_inf=0.3e9, label="water"),
}

# Reference densities at 1 atm used as scenario defaults.  The model only
# needs (gamma, p_inf); these ambient densities are conventional values
# (air at ~20 C, liquid water, typical polystyrene) and can be overridden
# in any run configuration.
DEFAULT_DENSITY: dict[str, float] = {
    "air": 1.204,
    "plastic": 1050.0,
    "water": 1000.0,
}


def load_material_table(overrides: dict | None = None):
    """Build (materials, densities) tables, merging config overrides.

    overrides maps a material name to a dict with any of the keys
    ``gamma``, ``p_inf``, ``rho0``.  Unknown names define new materials
    (gamma and p_inf then required).
    """
    materials = dict(MATERIALS)
    densities = dict(DEFAULT_DENSITY)
    for name, spec in (overrides or {}).items():
        base = materials.get(name)
        gamma = spec.get("gamma", base.gamma if base else None)
        p_inf = spec.get("p_inf", base.p_inf if base else None)
        if gamma is None or p_inf is None:
            raise InvalidStateError(f"material {name!r} needs gamma and p_inf")
        materials[name] = TammannEos(gamma=float(gamma), p_inf=float(p_inf), label=name)
        if "rho0" in spec:
            densities[name] = float(spec["rho0"])
    return materials, densities


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise InvalidStateError("non-finite input")


def pressure(rho, e, eos: TammannEos):
    """Pressure from density and specific internal energy."""
    _check_finite(rho, e)
    if np.any(np.asarray(rho) <= 0.0):
        raise InvalidStateError(f"rho must be positive, got {rho}")
    return (eos.gamma - 1.0) * rho * e - eos.gamma * eos.p_inf


def internal_energy(rho, p, eos: TammannEos):
    """Specific internal energy from density and pressure (inverse of pressure)."""
    _check_finite(rho, p)
    if np.any(np.asarray(rho) <= 0.0):
        raise InvalidStateError(f"rho must be positive, got {rho}")
    if np.any(np.asarray(p) + eos.p_inf <= 0.0):
        raise InvalidStateError(f"p + p_inf must be positive, got p={p}")
    return (p + eos.gamma * eos.p_inf) / ((eos.gamma - 1.0) * rho)


def sound_speed(prim: PrimState, eos: TammannEos) -> float:
    """Sound speed c = sqrt(gamma (p + p_inf) / rho) of a primitive state."""
    return sound_speed_rp(prim.rho, prim.p, eos)


def sound_speed_rp(rho, p, eos: TammannEos):
    """Sound speed from (rho, p) directly; accepts arrays."""
    _check_finite(rho, p)
    pt = np.asarray(p) + eos.p_inf
    if np.any(pt <= 0.0) or np.any(np.asarray(rho) <= 0.0):
        raise InvalidStateError(f"vacuum state: rho={rho}, p+p_inf={pt}")
    c = np.sqrt(eos.gamma * pt / rho)
    return float(c) if np.isscalar(rho) or np.ndim(c) == 0 else c


def prim_to_cons(prim: PrimState, eos: TammannEos) -> ConsState:
    """Convert primitive (rho, u, p) to conserved (rho, momentum, E)."""
    e = internal_energy(prim.rho, prim.p, eos)
    E = prim.rho * e + prim.kinetic_energy()
    v = prim.velocity()
    mom = float(prim.rho * v[0]) if v.size == 1 else tuple(prim.rho * v)
    return ConsState(rho=prim.rho, momentum=mom, E=float(E))


def cons_to_prim(cons: ConsState, eos: TammannEos) -> PrimState:
    """Convert conserved (rho, momentum, E) back to primitive (rho, u, p)."""
    if not np.isfinite(cons.rho) or cons.rho <= 0.0:
        raise InvalidStateError(f"rho must be positive, got {cons.rho}")
    v = cons.velocity()
    e = (cons.E - 0.5 * cons.rho * float(v @ v)) / cons.rho
    p = pressure(cons.rho, e, eos)
    if p + eos.p_inf <= 0.0:
        raise InvalidStateError(f"invalid energy: implied p={p}, p_inf={eos.p_inf}")
    u = float(v[0]) if v.size == 1 else tuple(v)
    return PrimState(rho=cons.rho, u=u, p=float(p))


def isentropic_density(state_k: PrimState, p_star: float, eos: TammannEos) -> float:
    """Density after an isentropic change from state_k to pressure p_star.

    rho* = rho_k ((p* + p_inf) / (p_k + p_inf))^(1/gamma)
    """
    _check_finite(p_star)
    pt_k = state_k.p + eos.p_inf
    pt_s = p_star + eos.p_inf
    if pt_k <= 0.0 or pt_s <= 0.0:
        raise InvalidStateError(f"invalid pressures: p_k={state_k.p}, p*={p_star}")
    return state_k.rho * (pt_s / pt_k) ** (1.0 / eos.gamma)
