"""Exact Riemann solver for the 1D Euler equations with Tammann EOS.

Each side of the initial discontinuity may carry its own (gamma, p_inf),
which jump only across the contact discontinuity.  The similarity
solution has a 1-wave and a 3-wave (shock or rarefaction) enclosing the
contact; the star pressure is the root of a monotone velocity-matching
function Phi(p*) assembled from Rankine-Hugoniot (shock) or Riemann
invariant (rarefaction) branches.

The solver also assembles wave-propagation fluctuations, optionally in a
frame shifted by the contact speed so that a material interface aligned
with the cell edge stays exactly stationary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eos import (
    InvalidStateError,
    PrimState,
    TammannEos,
    internal_energy,
    isentropic_density,
    prim_to_cons,
    sound_speed,
)

P_ATM = 101325.0

SHOCK = "shock"
RAREFACTION = "rarefaction"

_MAX_ITER = 100
# |p* - p_k| below this times the stiffened pressure is a zero-strength
# wave; the shock branch (continuous limit) is used to avoid 0/0 in the
# fan formulas.
_DEGENERATE = 1e-12


class VacuumError(RuntimeError):
    """The two states separate fast enough to open a vacuum region."""


class ConvergenceError(RuntimeError):
    """The star-pressure iteration failed; carries diagnostics."""


class InvalidStarPressureError(ValueError):
    """Star pressure outside the validity region of the shock relations."""


@dataclass(frozen=True)
class RiemannFan:
    """Full similarity solution of one interface Riemann problem."""

    p_star: float
    u_star: float
    rho_star_l: float
    rho_star_r: float
    wave_kind_l: str  # shock | rarefaction
    wave_kind_r: str
    S_l: float  # 1-wave speed (shock speed, or head/tail average for a fan)
    S_star: float
    S_r: float
    head_l: float | None  # rarefaction head/tail speeds when applicable
    tail_l: float | None
    head_r: float | None
    tail_r: float | None
    left: PrimState = field(repr=False, default=None)
    right: PrimState = field(repr=False, default=None)
    eos_l: TammannEos = field(repr=False, default=None)
    eos_r: TammannEos = field(repr=False, default=None)


@dataclass(frozen=True)
class Fluctuations:
    """Waves, speeds and left/right-going fluctuations at one edge."""

    waves: np.ndarray  # (3, ncomp) jumps in conserved variables
    speeds: np.ndarray  # (3,)
    a_minus: np.ndarray  # (ncomp,)
    a_plus: np.ndarray  # (ncomp,)


def _mass_flux(p_star: float, state: PrimState, eos: TammannEos) -> float:
    """Shock-branch mass flux Q_k(p*) through the k-wave."""
    pt_star = p_star + eos.p_inf
    pt_k = state.p + eos.p_inf
    radicand = state.rho * (
        0.5 * (eos.gamma + 1.0) * pt_star + 0.5 * (eos.gamma - 1.0) * pt_k
    )
    if radicand <= 0.0:
        raise InvalidStarPressureError(
            f"shock mass-flux radicand <= 0 at p*={p_star} for p={state.p}"
        )
    return np.sqrt(radicand)


def phi_shock(p_star: float, state_k: PrimState, eos_k: TammannEos, side: str) -> float:
    """Contact velocity implied by a k-shock of strength p* (side 'left'|'right')."""
    q = _mass_flux(p_star, state_k, eos_k)
    jump = (p_star - state_k.p) / q
    return state_k.u - jump if side == "left" else state_k.u + jump


def phi_rarefaction(p_star: float, state_k: PrimState, eos_k: TammannEos, side: str) -> float:
    """Contact velocity implied by a k-rarefaction down to pressure p*."""
    pt_star = p_star + eos_k.p_inf
    pt_k = state_k.p + eos_k.p_inf
    if pt_star < 0.0 or pt_k <= 0.0:
        raise InvalidStateError(f"invalid pressures: p*={p_star}, p_k={state_k.p}")
    c_k = sound_speed(state_k, eos_k)
    z = (eos_k.gamma - 1.0) / (2.0 * eos_k.gamma)
    jump = 2.0 * c_k / (eos_k.gamma - 1.0) * (1.0 - (pt_star / pt_k) ** z)
    return state_k.u + jump if side == "left" else state_k.u - jump


def _phi_side(p_star, state, eos, side):
    """(u* candidate, d/dp*) for one side, picking shock or fan branch."""
    pt_star = p_star + eos.p_inf
    pt_k = state.p + eos.p_inf
    sgn = -1.0 if side == "left" else 1.0
    if p_star > state.p:
        q = _mass_flux(p_star, state, eos)
        dq = state.rho * 0.5 * (eos.gamma + 1.0) / (2.0 * q)
        djump = (q - (p_star - state.p) * dq) / (q * q)
        return state.u + sgn * (p_star - state.p) / q, sgn * djump
    c = sound_speed(state, eos)
    z = (eos.gamma - 1.0) / (2.0 * eos.gamma)
    w = pt_star / pt_k
    jump = 2.0 * c / (eos.gamma - 1.0) * (1.0 - w**z)
    djump = -(c / (eos.gamma * pt_k)) * w ** (z - 1.0)
    return state.u - sgn * jump, -sgn * djump


def _phi(p_star, left, right, eos_l, eos_r):
    """Phi(p*) = phi_r - phi_l and its derivative (monotone increasing)."""
    ul, dul = _phi_side(p_star, left, eos_l, "left")
    ur, dur = _phi_side(p_star, right, eos_r, "right")
    return ur - ul, dur - dul


def _two_rarefaction_guess(left, right, eos_l, eos_r):
    """Closed-form two-rarefaction star pressure (exact for matched EOS)."""
    cl = sound_speed(left, eos_l)
    cr = sound_speed(right, eos_r)
    gbar = 0.5 * (eos_l.gamma + eos_r.gamma)
    z = (gbar - 1.0) / (2.0 * gbar)
    ptl = left.p + eos_l.p_inf
    ptr = right.p + eos_r.p_inf
    num = cl + cr - 0.5 * (gbar - 1.0) * (right.u - left.u)
    if num <= 0.0:
        return -min(eos_l.p_inf, eos_r.p_inf)
    den = cl / ptl**z + cr / ptr**z
    pt = (num / den) ** (1.0 / z)
    return pt - 0.5 * (eos_l.p_inf + eos_r.p_inf)


def solve_star(
    left: PrimState, right: PrimState, eos_l: TammannEos, eos_r: TammannEos
) -> RiemannFan:
    """Solve for the star region and wave structure of one Riemann problem.

    Safeguarded Newton on the monotone Phi(p*) with a bisection fallback
    inside a bracket; the branch (shock/rarefaction) is re-selected on
    every iterate by comparing p* with the side pressures.
    """
    p_scale = max(abs(left.p), abs(right.p), P_ATM)
    phi_tol = 1e-10 * p_scale
    p_floor = -min(eos_l.p_inf, eos_r.p_inf)
    lo = p_floor + 1e-12 * (p_scale + abs(p_floor))

    phi_lo, _ = _phi(lo, left, right, eos_l, eos_r)
    if phi_lo >= 0.0:
        raise VacuumError(
            f"no admissible star pressure: Phi({lo:.6g}) = {phi_lo:.6g} >= 0 "
            f"(states separate into vacuum)"
        )

    hi = max(lo + p_scale, left.p, right.p, 2.0 * p_scale)
    phi_hi, _ = _phi(hi, left, right, eos_l, eos_r)
    n_expand = 0
    while phi_hi < 0.0:
        hi = p_floor + 2.0 * (hi - p_floor)
        phi_hi, _ = _phi(hi, left, right, eos_l, eos_r)
        n_expand += 1
        if n_expand > 200:
            raise ConvergenceError(f"bracket expansion failed, hi={hi:.6g}")

    p = min(max(_two_rarefaction_guess(left, right, eos_l, eos_r), lo), hi)
    converged = False
    for _ in range(_MAX_ITER):
        f, df = _phi(p, left, right, eos_l, eos_r)
        if f < 0.0:
            lo = max(lo, p)
        else:
            hi = min(hi, p)
        if df > 0.0:
            p_new = p - f / df
        else:
            p_new = 0.5 * (lo + hi)
        if not lo < p_new < hi:
            p_new = 0.5 * (lo + hi)
        dp = abs(p_new - p)
        p = p_new
        if dp <= 1e-12 * max(abs(p), 1e-8 * p_scale) and abs(f) <= phi_tol:
            converged = True
            break
    if not converged:
        f, _ = _phi(p, left, right, eos_l, eos_r)
        if abs(f) > phi_tol:
            raise ConvergenceError(
                f"star pressure iteration did not converge: p*={p:.8g}, "
                f"|Phi|={abs(f):.3g} > {phi_tol:.3g}, bracket=({lo:.6g},{hi:.6g})"
            )

    p_star = p
    u_star = 0.5 * (
        _phi_side(p_star, left, eos_l, "left")[0]
        + _phi_side(p_star, right, eos_r, "right")[0]
    )

    def resolve_side(state, eos, side):
        pt_k = state.p + eos.p_inf
        sgn = -1.0 if side == "left" else 1.0
        if p_star - state.p > _DEGENERATE * pt_k:
            kind = SHOCK
        elif state.p - p_star > _DEGENERATE * pt_k:
            kind = RAREFACTION
        else:
            kind = SHOCK  # zero-strength limit
        if kind == SHOCK:
            q = _mass_flux(p_star, state, eos)
            s = state.u + sgn * q / state.rho
            pt_star = p_star + eos.p_inf
            ratio = pt_star / pt_k
            beta = (eos.gamma - 1.0) / (eos.gamma + 1.0)
            rho_star = state.rho * (ratio + beta) / (ratio * beta + 1.0)
            return kind, rho_star, s, None, None
        rho_star = isentropic_density(state, p_star, eos)
        c_k = sound_speed(state, eos)
        c_star = np.sqrt(eos.gamma * (p_star + eos.p_inf) / rho_star)
        head = state.u + sgn * c_k
        tail = u_star + sgn * c_star
        return kind, rho_star, 0.5 * (head + tail), head, tail

    kind_l, rho_sl, S_l, head_l, tail_l = resolve_side(left, eos_l, "left")
    kind_r, rho_sr, S_r, head_r, tail_r = resolve_side(right, eos_r, "right")

    return RiemannFan(
        p_star=p_star,
        u_star=u_star,
        rho_star_l=rho_sl,
        rho_star_r=rho_sr,
        wave_kind_l=kind_l,
        wave_kind_r=kind_r,
        S_l=S_l,
        S_star=u_star,
        S_r=S_r,
        head_l=head_l,
        tail_l=tail_l,
        head_r=head_r,
        tail_r=tail_r,
        left=left,
        right=right,
        eos_l=eos_l,
        eos_r=eos_r,
    )


def _fan_state(state, eos, xi, side):
    """State inside a k-rarefaction fan along the ray x/t = xi."""
    c_k = sound_speed(state, eos)
    pt_k = state.p + eos.p_inf
    g = eos.gamma
    if side == "left":
        u = (state.u * (g - 1.0) + 2.0 * (xi + c_k)) / (g + 1.0)
        cfan = u - xi
    else:
        u = (state.u * (g - 1.0) + 2.0 * (xi - c_k)) / (g + 1.0)
        cfan = xi - u
    rho = state.rho * (cfan / c_k) ** (2.0 / (g - 1.0))
    p = pt_k * (cfan / c_k) ** (2.0 * g / (g - 1.0)) - eos.p_inf
    return PrimState(rho=float(rho), u=float(u), p=float(p))


def sample(fan: RiemannFan, xi: float) -> PrimState:
    """Sample the similarity solution at x/t = xi (total in xi)."""
    if xi >= fan.S_star:
        state, eos = fan.right, fan.eos_r
        rho_star = fan.rho_star_r
        if fan.wave_kind_r == SHOCK:
            if xi >= fan.S_r:
                return state
            return PrimState(rho=rho_star, u=fan.u_star, p=fan.p_star)
        if xi >= fan.head_r:
            return state
        if xi <= fan.tail_r:
            return PrimState(rho=rho_star, u=fan.u_star, p=fan.p_star)
        return _fan_state(state, eos, xi, "right")
    state, eos = fan.left, fan.eos_l
    rho_star = fan.rho_star_l
    if fan.wave_kind_l == SHOCK:
        if xi <= fan.S_l:
            return state
        return PrimState(rho=rho_star, u=fan.u_star, p=fan.p_star)
    if xi <= fan.head_l:
        return state
    if xi >= fan.tail_l:
        return PrimState(rho=rho_star, u=fan.u_star, p=fan.p_star)
    return _fan_state(state, eos, xi, "left")


def euler_flux(q: np.ndarray, p: float) -> np.ndarray:
    """Flux of the 1D Euler equations for conserved q with pressure p.

    q has 3 components, or 4 with a passively advected transverse
    momentum in slot 2.
    """
    u = q[1] / q[0]
    f = np.empty_like(q)
    f[0] = q[1]
    f[1] = q[1] * u + p
    f[-1] = u * (q[-1] + p)
    if len(q) == 4:
        f[2] = q[2] * u
    return f


def _cons(rho, u, p, eos, v=None):
    e = internal_energy(rho, p, eos)
    if v is None:
        return np.array([rho, rho * u, rho * e + 0.5 * rho * u * u])
    return np.array(
        [rho, rho * u, rho * v, rho * e + 0.5 * rho * (u * u + v * v)]
    )


def exact_fluctuations(
    left: PrimState,
    right: PrimState,
    eos_l: TammannEos,
    eos_r: TammannEos,
    lagrangian_shift: bool = False,
    v_l: float | None = None,
    v_r: float | None = None,
) -> Fluctuations:
    """Waves, speeds and fluctuations from the exact Riemann solution.

    Waves are the conserved-variable jumps across the 1-, 2- and 3-wave;
    a rarefaction is carried as a single wave at the head/tail average
    speed.  With ``lagrangian_shift`` all speeds are shifted by -S* so
    the contact is exactly stationary and the fluctuations are the
    upwind wave sums in the shifted frame.  Without the shift the
    fluctuations split the exact flux difference through the Godunov
    state at xi=0, which keeps interior updates conservative.

    v_l/v_r add a passively advected transverse momentum component.
    """
    fan = solve_star(left, right, eos_l, eos_r)
    with_v = v_l is not None
    ql = _cons(left.rho, left.u, left.p, eos_l, v_l if with_v else None)
    qr = _cons(right.rho, right.u, right.p, eos_r, v_r if with_v else None)
    qsl = _cons(fan.rho_star_l, fan.u_star, fan.p_star, eos_l, v_l if with_v else None)
    qsr = _cons(fan.rho_star_r, fan.u_star, fan.p_star, eos_r, v_r if with_v else None)

    waves = np.stack([qsl - ql, qsr - qsl, qr - qsr])
    speeds = np.array([fan.S_l, fan.S_star, fan.S_r])

    if lagrangian_shift:
        speeds = speeds - fan.S_star
        speeds[1] = 0.0
        a_minus = np.minimum(speeds, 0.0) @ waves
        a_plus = np.maximum(speeds, 0.0) @ waves
    else:
        mid = sample(fan, 0.0)
        vmid = None
        if with_v:
            vmid = v_l if fan.S_star > 0.0 else v_r
        qmid = _cons(
            mid.rho,
            mid.u,
            mid.p,
            eos_l if fan.S_star > 0.0 else eos_r,
            vmid,
        )
        fmid = euler_flux(qmid, mid.p)
        a_minus = fmid - euler_flux(ql, left.p)
        a_plus = euler_flux(qr, right.p) - fmid
    return Fluctuations(waves=waves, speeds=speeds, a_minus=a_minus, a_plus=a_plus)
