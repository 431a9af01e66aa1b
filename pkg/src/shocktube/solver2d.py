"""2D axisymmetric wave-propagation solver on Cartesian or mapped grids.

Sweeps solve rotated 1D Riemann problems at every edge (normal/transverse
momentum split by the edge normal), scale the wave speeds by the edge
length ratios and weight the update by the cell area capacities.  The
unsplit method adds corner-transport terms by splitting every normal
fluctuation into up/down-going acoustic pieces evaluated with each
neighbour cell's own sound speed, which keeps the splitting usable
across material interfaces.  The axisymmetric geometric source
(symmetry axis along x, radial coordinate y) is integrated with an
explicit midpoint rule inside a fractional-step splitting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eos import PrimState
from .grid import MappedGrid2D
from .limiters import (
    TRANSMISSION_BASED,
    acoustic_alphas,
    flux_limiter,
    theta_standard,
    theta_transmission,
)
from .numerics import NumericsConfig
from .riemann_exact import exact_fluctuations
from .riemann_hllc import hllc_fluctuations_arrays
from .solver1d import StepFailureError


@dataclass
class Gauge2D:
    gid: int
    x: float
    y: float
    cell: tuple
    times: list = field(default_factory=list)
    pressures_kpa: list = field(default_factory=list)

    def record(self, t, p_pa):
        self.times.append(float(t))
        self.pressures_kpa.append(float(p_pa) / 1000.0)


@dataclass
class State2D:
    """Conserved fields (rho, m_x, m_y, E) on a MappedGrid2D."""

    grid: MappedGrid2D
    q: np.ndarray  # (nx_tot, ny_tot, 4)
    t: float = 0.0
    bc: tuple = ("outflow", "outflow", "axis", "outflow")  # left,right,bottom,top

    def copy(self) -> "State2D":
        return State2D(grid=self.grid, q=self.q.copy(), t=self.t, bc=self.bc)


def eos_arrays(grid: MappedGrid2D):
    gam = np.array([m.gamma for m in grid.materials])
    pinf = np.array([m.p_inf for m in grid.materials])
    return gam[grid.material], pinf[grid.material]


def primitives(state: State2D):
    gam, pinf = eos_arrays(state.grid)
    rho = state.q[..., 0]
    u = state.q[..., 1] / rho
    v = state.q[..., 2] / rho
    e = state.q[..., 3] / rho - 0.5 * (u * u + v * v)
    p = (gam - 1.0) * rho * e - gam * pinf
    return rho, u, v, p


def from_primitives(grid: MappedGrid2D, rho, u, v, p) -> State2D:
    gam, pinf = eos_arrays(grid)
    e = (p + gam * pinf) / ((gam - 1.0) * rho)
    q = np.stack([rho, rho * u, rho * v, rho * e + 0.5 * rho * (u * u + v * v)], axis=-1)
    return State2D(grid=grid, q=q)


def rotate_to_normal(q, n):
    """Rotate the two momentum rows into (normal, transverse) components."""
    q = np.asarray(q, dtype=float)
    out = q.copy()
    nx, ny = n[..., 0], n[..., 1]
    out[..., 1] = nx * q[..., 1] + ny * q[..., 2]
    out[..., 2] = -ny * q[..., 1] + nx * q[..., 2]
    return out


def rotate_from_normal(w, n):
    """Inverse rotation, applied to waves or fluctuation vectors."""
    w = np.asarray(w, dtype=float)
    out = w.copy()
    nx, ny = n[..., 0], n[..., 1]
    out[..., 1] = nx * w[..., 1] - ny * w[..., 2]
    out[..., 2] = ny * w[..., 1] + nx * w[..., 2]
    return out


def apply_boundary(state: State2D, side: str, kind: str) -> State2D:
    """Ghost fill: 'outflow' extrapolation, 'wall'/'axis' mirror reflection."""
    g = state.grid.ghost
    q = state.q
    if kind not in ("outflow", "wall", "axis"):
        raise ValueError(f"unknown boundary kind {kind!r}")
    mom = 1 if side in ("left", "right") else 2
    if side == "left":
        if kind == "outflow":
            q[:g] = q[g : g + 1]
        else:
            q[:g] = q[2 * g - 1 : g - 1 : -1]
            q[:g, :, mom] *= -1.0
    elif side == "right":
        if kind == "outflow":
            q[-g:] = q[-g - 1 : -g]
        else:
            q[-g:] = q[-g - 1 : -2 * g - 1 : -1]
            q[-g:, :, mom] *= -1.0
    elif side == "bottom":
        if kind == "outflow":
            q[:, :g] = q[:, g : g + 1]
        else:
            q[:, :g] = q[:, 2 * g - 1 : g - 1 : -1]
            q[:, :g, mom] *= -1.0
    elif side == "top":
        if kind == "outflow":
            q[:, -g:] = q[:, -g - 1 : -g]
        else:
            q[:, -g:] = q[:, -g - 1 : -2 * g - 1 : -1]
            q[:, -g:, mom] *= -1.0
    else:
        raise ValueError(f"unknown side {side!r}")
    return state


def fill_ghosts(state: State2D):
    for side, kind in zip(("left", "right", "bottom", "top"), state.bc):
        apply_boundary(state, side, kind)


def cfl_dt(state: State2D, cfl_target: float = 0.9, dt_max: float = np.inf) -> float:
    """Step bound from |vel| + c per cell with the mapped metric factors."""
    grid = state.grid
    rho, u, v, p = primitives(state)
    gam, pinf = eos_arrays(grid)
    c = np.sqrt(gam * (p + pinf) / rho)
    s = np.hypot(u, v) + c
    lam = 0.0
    for axis, gamma_e, dcomp in ((0, grid.gamma_x, grid.dxc), (1, grid.gamma_y, grid.dyc)):
        if axis == 0:
            s_edge = np.maximum(s[:-1, :], s[1:, :])
            kap = np.minimum(grid.kappa[:-1, :], grid.kappa[1:, :])
            ge = gamma_e[1:-1, :]
        else:
            s_edge = np.maximum(s[:, :-1], s[:, 1:])
            kap = np.minimum(grid.kappa[:, :-1], grid.kappa[:, 1:])
            ge = gamma_e[:, 1:-1]
        lam = max(lam, float(np.max(ge * s_edge / (kap * dcomp))))
    if lam <= 0.0:
        return dt_max
    return min(cfl_target / lam, dt_max)


def _edge_solve(state: State2D, axis: int, numerics: NumericsConfig, prim):
    """Solve all edges normal to `axis`; returns rotated-back waves,
    gamma-scaled speeds and fluctuations, plus the interface mask."""
    grid = state.grid
    rho, u, v, p = prim
    gam, pinf = eos_arrays(grid)
    mat = grid.material
    if axis == 0:
        sl = (slice(None, -1), slice(None))
        sr = (slice(1, None), slice(None))
        normals = grid.normals_x[1:-1, :]
        gamma_e = grid.gamma_x[1:-1, :]
    else:
        sl = (slice(None), slice(None, -1))
        sr = (slice(None), slice(1, None))
        normals = grid.normals_y[:, 1:-1]
        gamma_e = grid.gamma_y[:, 1:-1]
    nx, ny = normals[..., 0], normals[..., 1]
    un_l = nx * u[sl] + ny * v[sl]
    ut_l = -ny * u[sl] + nx * v[sl]
    un_r = nx * u[sr] + ny * v[sr]
    ut_r = -ny * u[sr] + nx * v[sr]
    iface = mat[sl] != mat[sr]

    use_hllc_interior = numerics.interior_solver == "hllc"
    if use_hllc_interior:
        shift = iface if numerics.interface_solver == "hllc_lagrangian" else None
        waves, speeds, _amdq, _apdq = hllc_fluctuations_arrays(
            rho[sl], un_l, p[sl], rho[sr], un_r, p[sr],
            gam[sl], pinf[sl], gam[sr], pinf[sr],
            v_l=ut_l, v_r=ut_r, shift=shift,
            speed_estimate=numerics.speed_estimate,
        )
        a_fix = None
        exact_edges = (
            np.argwhere(iface) if numerics.interface_solver == "exact_lagrangian" else []
        )
    else:
        waves = np.zeros(iface.shape + (3, 4))
        speeds = np.zeros(iface.shape + (3,))
        a_fix = np.zeros(iface.shape + (2, 4))
        exact_edges = np.argwhere(np.ones_like(iface))

    for e in exact_edges:
        e = tuple(e)
        left = PrimState(float(rho[sl][e]), float(un_l[e]), float(p[sl][e]))
        right = PrimState(float(rho[sr][e]), float(un_r[e]), float(p[sr][e]))
        fl = exact_fluctuations(
            left, right,
            grid.materials[mat[sl][e]], grid.materials[mat[sr][e]],
            lagrangian_shift=bool(iface[e]),
            v_l=float(ut_l[e]), v_r=float(ut_r[e]),
        )
        waves[e] = fl.waves
        speeds[e] = fl.speeds
        if a_fix is not None:
            a_fix[e][0] = fl.a_minus
            a_fix[e][1] = fl.a_plus

    waves = rotate_from_normal(waves, normals[..., None, :])
    speeds = speeds * gamma_e[..., None]
    a_minus = np.einsum("...p,...pc->...c", np.minimum(speeds, 0.0), waves)
    a_plus = np.einsum("...p,...pc->...c", np.maximum(speeds, 0.0), waves)
    if a_fix is not None:
        # interior exact edges carry flux-difference fluctuations (exactly
        # conservative); interface edges keep the shifted wave form
        flux_form = ~iface
        am_fd = rotate_from_normal(a_fix[..., 0, :], normals) * gamma_e[..., None]
        ap_fd = rotate_from_normal(a_fix[..., 1, :], normals) * gamma_e[..., None]
        a_minus = np.where(flux_form[..., None], am_fd, a_minus)
        a_plus = np.where(flux_form[..., None], ap_fd, a_plus)
    return waves, speeds, a_minus, a_plus, iface


def _thetas_2d(state, axis, waves, speeds, iface, numerics, prim):
    """Smoothness ratios along the sweep direction with interface overrides."""
    n_edge = waves.shape[axis]
    thetas = np.zeros(waves.shape[:2] + (3,))
    if axis == 0:
        inner = (slice(1, n_edge - 1), slice(None))
        def shifted(offset):
            return (slice(1 + offset, n_edge - 1 + offset), slice(None))
    else:
        inner = (slice(None), slice(1, n_edge - 1))
        def shifted(offset):
            return (slice(None), slice(1 + offset, n_edge - 1 + offset))
    for fam in range(3):
        s = speeds[inner + (fam,)]
        w_here = waves[inner + (fam,)]
        w_minus = waves[shifted(-1) + (fam,)]
        w_plus = waves[shifted(1) + (fam,)]
        w_up = np.where((s > 0.0)[..., None], w_minus, w_plus)
        th = theta_standard(w_here, w_up)
        thetas[inner + (fam,)] = np.where(s == 0.0, 0.0, th)

    idx = np.argwhere(iface)
    if idx.size:
        lo = idx[:, axis] >= 1
        hi = idx[:, axis] < n_edge - 1
        idx = idx[lo & hi]
    if idx.size:
        ii, jj = idx[:, 0], idx[:, 1]
        thetas[ii, jj, 1] = 0.0
        if numerics.theta_policy == TRANSMISSION_BASED:
            rho, u, v, p = prim
            gam, pinf = eos_arrays(state.grid)
            c = np.sqrt(gam * (p + pinf) / rho)
            if axis == 0:
                c_m = c[ii, jj]
                c_p = c[ii + 1, jj]
                c_mm = c[ii - 1, jj]
                c_pp = c[ii + 2, jj]
                w_here = waves[ii, jj]
                w_up1 = waves[ii + 1, jj]
                w_up3 = waves[ii - 1, jj]
            else:
                c_m = c[ii, jj]
                c_p = c[ii, jj + 1]
                c_mm = c[ii, jj - 1]
                c_pp = c[ii, jj + 2]
                w_here = waves[ii, jj]
                w_up1 = waves[ii, jj + 1]
                w_up3 = waves[ii, jj - 1]
            mom = 1 + axis  # sweep-normal momentum component
            a1_here, _ = acoustic_alphas(w_here[:, 0, 0], w_here[:, 0, mom], c_m, c_p)
            a1_up, _ = acoustic_alphas(w_up1[:, 0, 0], w_up1[:, 0, mom], c_p, c_pp)
            thetas[ii, jj, 0] = theta_transmission(a1_up, a1_here, c_m, c_p, 1)
            _, a3_here = acoustic_alphas(w_here[:, 2, 0], w_here[:, 2, mom], c_m, c_p)
            _, a3_up = acoustic_alphas(w_up3[:, 2, 0], w_up3[:, 2, mom], c_mm, c_m)
            thetas[ii, jj, 2] = theta_transmission(a3_up, a3_here, c_m, c_p, 3)
    return thetas


def _stiff_edge_mask(grid: MappedGrid2D, axis: int, numerics: NumericsConfig):
    if numerics.limiter_stiff is None or numerics.stiff_material is None:
        shape = (grid.nx_tot - 1, grid.ny_tot) if axis == 0 else (grid.nx_tot, grid.ny_tot - 1)
        return np.zeros(shape, dtype=bool)
    labels = [m.label for m in grid.materials]
    if numerics.stiff_material not in labels:
        shape = (grid.nx_tot - 1, grid.ny_tot) if axis == 0 else (grid.nx_tot, grid.ny_tot - 1)
        return np.zeros(shape, dtype=bool)
    stiff = grid.material == labels.index(numerics.stiff_material)
    if axis == 0:
        return stiff[:-1, :] & stiff[1:, :]
    return stiff[:, :-1] & stiff[:, 1:]


def _correction_flux(state, axis, dt, waves, speeds, thetas, numerics):
    grid = state.grid
    dcomp = grid.dxc if axis == 0 else grid.dyc
    if axis == 0:
        dtdx_ave = 0.5 * dt / dcomp * (1.0 / grid.kappa[:-1, :] + 1.0 / grid.kappa[1:, :])
    else:
        dtdx_ave = 0.5 * dt / dcomp * (1.0 / grid.kappa[:, :-1] + 1.0 / grid.kappa[:, 1:])
    phi = flux_limiter(thetas, numerics.limiter_bulk)
    stiff = _stiff_edge_mask(grid, axis, numerics)
    if numerics.limiter_stiff is not None and stiff.any():
        phi_stiff = flux_limiter(thetas, numerics.limiter_stiff)
        phi = np.where(stiff[..., None], phi_stiff, phi)
    wtilde = phi[..., None] * waves
    abss = np.abs(speeds)
    coef = 0.5 * abss * (1.0 - dtdx_ave[..., None] * abss)
    return np.einsum("...p,...pc->...c", coef, wtilde)


def transverse_fluctuations(a_fluct, c1, c2, c3, n_lower, n_upper):
    """Split a normal fluctuation into down/up-going acoustic pieces.

    c1/c2/c3 are the sound speeds of the cells below/at/above the
    receiving cell (along the transverse direction); n_lower/n_upper the
    unit normals of its transverse edges.  The (density, two momentum)
    components feed the acoustic expansion; the energy row stays zero.
    Returns (B_minus, B_plus) shaped like a_fluct.
    """
    a_fluct = np.asarray(a_fluct, dtype=float)
    n_lower = np.asarray(n_lower, dtype=float)
    n_upper = np.asarray(n_upper, dtype=float)
    a1 = a_fluct[..., 0]
    a2 = a_fluct[..., 1]
    a3 = a_fluct[..., 2]
    n3x, n3y = n_upper[..., 0], n_upper[..., 1]
    n2x, n2y = n_lower[..., 0], n_lower[..., 1]
    coef_up = c3 * (c2 * a1 + n3x * a2 + n3y * a3) / (c3 + c2)
    coef_dn = -c1 * (c2 * a1 - n2x * a2 - n2y * a3) / (c1 + c2)
    one = np.ones_like(coef_up)
    zero = np.zeros_like(coef_up)
    b_plus = coef_up[..., None] * np.stack([one, n3x * c3, n3y * c3, zero], axis=-1)
    b_minus = coef_dn[..., None] * np.stack([one, -n2x * c1, -n2y * c1, zero], axis=-1)
    return b_minus, b_plus


def _transverse_terms(state, axis, dt, a_minus, a_plus, c, corr_other):
    """Add corner-transport increments from one sweep's fluctuations onto
    the correction fluxes of the transverse edges (in place).

    For an x-sweep (axis 0) corr_other holds the y-edge correction fluxes
    shaped (nx, ny-1), edges indexed by their lower cell; the up-going
    piece of a fluctuation entering cell (i, j) lands on edge (i, j) and
    the down-going piece on edge (i, j-1), each scaled by that edge's
    length ratio and the receiving cell's capacity.
    """
    grid = state.grid
    nx, ny = grid.nx_tot, grid.ny_tot

    if axis == 0:
        def accumulate(a_fluct, cs):
            # cs slices the receiving cell column of every x-edge
            c1 = c[cs, 0 : ny - 2]
            c2 = c[cs, 1 : ny - 1]
            c3 = c[cs, 2:ny]
            n_up = grid.normals_y[cs, 2:ny]
            g_up = grid.gamma_y[cs, 2:ny]
            n_dn = grid.normals_y[cs, 1 : ny - 1]
            g_dn = grid.gamma_y[cs, 1 : ny - 1]
            b_minus, b_plus = transverse_fluctuations(
                a_fluct[:, 1 : ny - 1], c1, c2, c3, n_dn, n_up
            )
            w = dt / (2.0 * grid.kappa[cs, 1 : ny - 1] * grid.dxc)
            corr_other[cs, 1 : ny - 1] -= (w * g_up)[..., None] * b_plus
            corr_other[cs, 0 : ny - 2] -= (w * g_dn)[..., None] * b_minus

        accumulate(a_plus, slice(1, nx))
        accumulate(a_minus, slice(0, nx - 1))
    else:
        def accumulate(a_fluct, cs):
            c1 = c[0 : nx - 2, cs]
            c2 = c[1 : nx - 1, cs]
            c3 = c[2:nx, cs]
            n_up = grid.normals_x[2:nx, cs]
            g_up = grid.gamma_x[2:nx, cs]
            n_dn = grid.normals_x[1 : nx - 1, cs]
            g_dn = grid.gamma_x[1 : nx - 1, cs]
            b_minus, b_plus = transverse_fluctuations(
                a_fluct[1 : nx - 1, :], c1, c2, c3, n_dn, n_up
            )
            w = dt / (2.0 * grid.kappa[1 : nx - 1, cs] * grid.dyc)
            corr_other[1 : nx - 1, cs] -= (w * g_up)[..., None] * b_plus
            corr_other[0 : nx - 2, cs] -= (w * g_dn)[..., None] * b_minus

        accumulate(a_plus, slice(1, ny))
        accumulate(a_minus, slice(0, ny - 1))


def _apply_sweep(state, axis, dt, a_minus, a_plus, corr, dq):
    """Accumulate fluctuation and correction-flux differences into dq."""
    grid = state.grid
    dcomp = grid.dxc if axis == 0 else grid.dyc
    dtdx = dt / (grid.kappa * dcomp)
    if axis == 0:
        dq[:-1] -= dtdx[:-1, :, None] * a_minus
        dq[1:] -= dtdx[1:, :, None] * a_plus
        dq[1:-1] -= dtdx[1:-1, :, None] * (corr[1:] - corr[:-1])
    else:
        dq[:, :-1] -= dtdx[:, :-1, None] * a_minus
        dq[:, 1:] -= dtdx[:, 1:, None] * a_plus
        dq[:, 1:-1] -= dtdx[:, 1:-1, None] * (corr[:, 1:] - corr[:, :-1])


def _sweep(state, axis, dt, numerics, prim):
    waves, speeds, a_minus, a_plus, iface = _edge_solve(state, axis, numerics, prim)
    if numerics.order == 2:
        thetas = _thetas_2d(state, axis, waves, speeds, iface, numerics, prim)
        corr = _correction_flux(state, axis, dt, waves, speeds, thetas, numerics)
    else:
        corr = np.zeros(waves.shape[:2] + (4,))
    return a_minus, a_plus, corr


def hyperbolic_step(state: State2D, dt: float, numerics: NumericsConfig):
    """One homogeneous update: unsplit with transverse terms, or sweeps."""
    fill_ghosts(state)
    prim = primitives(state)
    if numerics.splitting == "unsplit":
        amx, apx, fx = _sweep(state, 0, dt, numerics, prim)
        amy, apy, gy = _sweep(state, 1, dt, numerics, prim)
        if numerics.transverse:
            gam, pinf = eos_arrays(state.grid)
            rho = prim[0]
            c = np.sqrt(gam * (prim[3] + pinf) / rho)
            _transverse_terms(state, 0, dt, amx, apx, c, gy)
            _transverse_terms(state, 1, dt, amy, apy, c, fx)
        dq = np.zeros_like(state.q)
        _apply_sweep(state, 0, dt, amx, apx, fx, dq)
        _apply_sweep(state, 1, dt, amy, apy, gy, dq)
        state.q += dq
    else:
        amx, apx, fx = _sweep(state, 0, dt, numerics, prim)
        dq = np.zeros_like(state.q)
        _apply_sweep(state, 0, dt, amx, apx, fx, dq)
        state.q += dq
        fill_ghosts(state)
        prim = primitives(state)
        amy, apy, gy = _sweep(state, 1, dt, numerics, prim)
        dq = np.zeros_like(state.q)
        _apply_sweep(state, 1, dt, amy, apy, gy, dq)
        state.q += dq
    return state


def _source_rhs(state: State2D, q):
    """Axisymmetric geometric source -(u_r / r) [rho, m_x, m_y, E + p]."""
    grid = state.grid
    gam, pinf = eos_arrays(grid)
    r = grid.centroid[..., 1]
    rho = q[..., 0]
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    e = q[..., 3] / rho - 0.5 * (u * u + v * v)
    p = (gam - 1.0) * rho * e - gam * pinf
    rhs = np.empty_like(q)
    factor = -v / r
    rhs[..., 0] = factor * q[..., 0]
    rhs[..., 1] = factor * q[..., 1]
    rhs[..., 2] = factor * q[..., 2]
    rhs[..., 3] = factor * (q[..., 3] + p)
    return rhs


def axisymmetric_source_step(state: State2D, dt: float) -> State2D:
    """Explicit midpoint update of the geometric source on interior cells."""
    ii, jj = state.grid.interior()
    q = state.q
    k1 = _source_rhs(state, q)
    q_mid = q + 0.5 * dt * k1
    k2 = _source_rhs(state, q_mid)
    q[ii, jj] += dt * k2[ii, jj]
    return state


def step(state: State2D, dt: float, numerics: NumericsConfig | None = None) -> State2D:
    """Advance one time step: fractional-step source around the sweeps."""
    numerics = numerics or NumericsConfig()
    if numerics.axisymmetric and numerics.source_splitting == "strang":
        axisymmetric_source_step(state, 0.5 * dt)
        hyperbolic_step(state, dt, numerics)
        axisymmetric_source_step(state, 0.5 * dt)
    elif numerics.axisymmetric:
        hyperbolic_step(state, dt, numerics)
        axisymmetric_source_step(state, dt)
    else:
        hyperbolic_step(state, dt, numerics)
    state.t += dt
    _validate(state)
    return state


def _validate(state: State2D):
    gam, pinf = eos_arrays(state.grid)
    rho, u, v, p = primitives(state)
    ii, jj = state.grid.interior()
    bad = (rho[ii, jj] <= 0.0) | ((p[ii, jj] + pinf[ii, jj]) <= 0.0)
    if np.any(bad):
        where = np.argwhere(bad)[:5]
        raise StepFailureError(
            f"invalid 2D state at t={state.t:.6e}: cells {where.tolist()} "
            f"rho={rho[ii, jj][bad][:5].tolist()} p={p[ii, jj][bad][:5].tolist()}"
        )


def advance(state: State2D, t_end: float, numerics: NumericsConfig | None = None,
            gauges=(), max_steps: int = 10_000_000) -> State2D:
    numerics = numerics or NumericsConfig()
    record_gauges(state, gauges)
    steps = 0
    while state.t < t_end * (1.0 - 1e-14):
        if numerics.fixed_dt is not None:
            dt = numerics.fixed_dt
        else:
            dt = cfl_dt(state, numerics.cfl, numerics.dt_max)
        dt = min(dt, t_end - state.t)
        step(state, dt, numerics)
        record_gauges(state, gauges)
        steps += 1
        if steps >= max_steps:
            raise StepFailureError(f"exceeded {max_steps} steps before t={t_end}")
    return state


def initial_planar_shock(grid: MappedGrid2D, eos_air, rho_of_material: dict,
                         ambient_p: float, peak_p: float, front_x: float,
                         profile: str = "step", tail_length: float = 0.0) -> State2D:
    """Quiescent ambient everywhere, a planar right-moving shock in the air."""
    from .scenarios import shock_profile  # local import to avoid a cycle

    rho = np.empty(grid.kappa.shape)
    for mid, rho0 in rho_of_material.items():
        rho[grid.material == mid] = rho0
    u = np.zeros_like(rho)
    v = np.zeros_like(rho)
    p = np.full_like(rho, ambient_p)
    air_id = [m.label for m in grid.materials].index(eos_air.label)
    in_air = grid.material == air_id
    xs = grid.centroid[..., 0]
    rho_s, u_s, p_s = shock_profile(
        xs, eos_air, rho_of_material[air_id], ambient_p, peak_p, front_x,
        profile, tail_length,
    )
    rho = np.where(in_air, rho_s, rho)
    u = np.where(in_air, u_s, u)
    p = np.where(in_air, p_s, p)
    return from_primitives(grid, rho, u, v, p)


def place_gauges(grid: MappedGrid2D, positions) -> list[Gauge2D]:
    gauges = []
    for k, (x, y) in enumerate(positions):
        gauges.append(Gauge2D(gid=k + 1, x=float(x), y=float(y),
                              cell=grid.locate((float(x), float(y)))))
    return gauges


def record_gauges(state: State2D, gauges) -> None:
    if not gauges:
        return
    _, _, _, p = primitives(state)
    for gauge in gauges:
        gauge.record(state.t, p[gauge.cell])


def write_snapshot(state: State2D, path):
    """CSV snapshot: centroid coords, rho, u_r, u_z, p in kPa, material."""
    grid = state.grid
    rho, u, v, p = primitives(state)
    ii, jj = grid.interior()
    with open(path, "w") as fh:
        fh.write(f"# t = {state.t!r} nx = {grid.mx} ny = {grid.my} "
                 f"mapping = {grid.mapping_name}\n")
        fh.write("x_m,y_m,rho,u_r,u_z,p_kPa,material\n")
        cx = grid.centroid[ii, jj]
        for i in range(grid.mx):
            for j in range(grid.my):
                fh.write(
                    f"{float(cx[i, j, 0])!r},{float(cx[i, j, 1])!r},"
                    f"{float(rho[ii, jj][i, j])!r},{float(v[ii, jj][i, j])!r},"
                    f"{float(u[ii, jj][i, j])!r},{float(p[ii, jj][i, j]) / 1000.0!r},"
                    f"{int(grid.material[ii, jj][i, j])}\n"
                )


def write_schlieren(state: State2D, path):
    """Cell-centred |grad p| magnitude export for external plotting."""
    grid = state.grid
    _, _, _, p = primitives(state)
    ii, jj = grid.interior()
    pc = p[ii, jj]
    x = grid.centroid[ii, jj, 0]
    y = grid.centroid[ii, jj, 1]
    gx = np.zeros_like(pc)
    gy = np.zeros_like(pc)
    gx[1:-1, :] = (pc[2:, :] - pc[:-2, :]) / np.maximum(x[2:, :] - x[:-2, :], 1e-300)
    gy[:, 1:-1] = (pc[:, 2:] - pc[:, :-2]) / np.maximum(y[:, 2:] - y[:, :-2], 1e-300)
    mag = np.hypot(gx, gy)
    with open(path, "w") as fh:
        fh.write(f"# t = {state.t!r}\n")
        fh.write("x_m,y_m,grad_p_mag\n")
        for i in range(grid.mx):
            for j in range(grid.my):
                fh.write(f"{float(x[i, j])!r},{float(y[i, j])!r},{float(mag[i, j])!r}\n")
