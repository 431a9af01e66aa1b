"""Canonical shock-tube experiment definitions and the run driver.

1D: a right-moving shock in air crossing air-plastic-water (or air-water)
interfaces, with pressure gauges before, inside and after the plastic.
2D-axisymmetric: a planar shock hitting a water cylinder on a Cartesian
grid, or a spherical water interface on the circular-inclusion mapped
grid.

The initial shock is built from the exact single-shock Rankine-Hugoniot
relations for the requested peak pressure, reproducibly, instead of the
trial-and-error amplitude tuning a lab waveform would need; the optional
linear decaying tail approximates the idealized sensor trace.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, eos as eos_mod, solver1d, solver2d
from .eos import P_ATM, TammannEos
from .grid import (
    GridError,
    assign_materials_rectangle,
    assign_materials_ring,
    build_cartesian_grid,
    build_grid_1d,
    build_mapped_grid,
)
from .numerics import NumericsConfig


class ScenarioError(ValueError):
    """Inconsistent scenario description."""


@dataclass
class ScenarioSpec:
    """Complete description of one experiment."""

    name: str
    kind: str  # '1d' | '2d_cartesian' | '2d_mapped'
    peak_pressure: float = 184060.0  # absolute Pa
    front_x: float = -2.0
    profile: str = "step"  # 'step' | 'step_with_linear_tail'
    tail_length: float = 6.0
    ambient_pressure: float = P_ATM
    t_end: float = 10.0e-3
    output_interval: float | None = None
    material_overrides: dict = field(default_factory=dict)
    # 1d geometry
    x_lo: float = -10.0
    x_hi: float = 10.0
    n_cells: int = 2000
    regions: list = field(default_factory=list)  # [(material, x_end), ...]
    gauges: list = field(default_factory=list)  # positions (x) or (x, y)
    bc: tuple = ("outflow", "outflow")
    # 2d geometry
    mx: int = 160
    my: int = 80
    extents: tuple = (-0.04, 0.04, 0.0, 0.04)  # Cartesian (x0, x1, y0, y1)
    water_box: tuple = (-0.015, 0.015, 0.0, 0.015)
    radii: tuple = (0.01, 0.015, 0.04)  # (r_i, r_o, r_m) mapped
    interfaces: tuple = ("outer",)  # mapped: ('outer',) | ('inner', 'outer')
    shell_material: str = "plastic"

    def validate(self):
        if self.peak_pressure <= self.ambient_pressure:
            raise ScenarioError(
                f"peak pressure {self.peak_pressure} must exceed ambient {self.ambient_pressure}"
            )
        if self.profile not in ("step", "step_with_linear_tail"):
            raise ScenarioError(f"unknown profile {self.profile!r}")
        if self.kind not in ("1d", "2d_cartesian", "2d_mapped"):
            raise ScenarioError(f"unknown kind {self.kind!r}")


@dataclass
class GaugeReport:
    """Peak pressure summary of one gauge series."""

    gauge_id: int
    max_kpa: float
    t_max: float
    n_samples: int


@dataclass
class RunResult:
    spec: ScenarioSpec
    gauges: list
    reports: list
    state: object
    manifest: dict


def material_tables(spec: ScenarioSpec):
    return eos_mod.load_material_table(spec.material_overrides)


def post_shock_state(eos_air: TammannEos, rho0: float, p0: float, peak_p: float):
    """(rho, u, p) behind a right-moving shock of pressure peak_p.

    Exact Rankine-Hugoniot relations for a single 3-shock running into
    quiescent ambient (rho0, 0, p0); also returns the shock speed.
    """
    if peak_p < p0:
        raise ScenarioError(f"peak {peak_p} below ambient {p0}")
    g = eos_air.gamma
    pt1 = peak_p + eos_air.p_inf
    pt0 = p0 + eos_air.p_inf
    q = np.sqrt(rho0 * (0.5 * (g + 1.0) * pt1 + 0.5 * (g - 1.0) * pt0))
    u1 = (peak_p - p0) / q
    beta = (g - 1.0) / (g + 1.0)
    ratio = pt1 / pt0
    rho1 = rho0 * (ratio + beta) / (ratio * beta + 1.0)
    s_shock = q / rho0
    return rho1, u1, peak_p, s_shock


def shock_profile(x, eos_air: TammannEos, rho0: float, p0: float, peak_p: float,
                  front_x: float, profile: str = "step", tail_length: float = 0.0):
    """(rho, u, p) arrays of the initial shock over positions x.

    'step': uniform post-shock state behind the front.  The linear-tail
    variant ramps the pressure back to ambient over tail_length behind
    the front, with density on the post-shock isentrope and velocity from
    the right-going simple-wave invariant.
    """
    x = np.asarray(x, dtype=float)
    rho1, u1, p1, _ = post_shock_state(eos_air, rho0, p0, peak_p)
    g = eos_air.gamma
    behind = x <= front_x
    if profile == "step":
        rho = np.where(behind, rho1, rho0)
        u = np.where(behind, u1, 0.0)
        p = np.where(behind, p1, p0)
        return rho, u, p
    if tail_length <= 0.0:
        raise ScenarioError("step_with_linear_tail needs tail_length > 0")
    frac = np.clip((front_x - x) / tail_length, 0.0, 1.0)
    p = np.where(behind, p1 + (p0 - p1) * frac, p0)
    pt1 = p1 + eos_air.p_inf
    pt = p + eos_air.p_inf
    rho = np.where(behind, rho1 * (pt / pt1) ** (1.0 / g), rho0)
    c1 = np.sqrt(g * pt1 / rho1)
    c = np.sqrt(g * pt / np.where(behind, rho, rho0))
    u = np.where(behind, u1 + 2.0 * (c - c1) / (g - 1.0), 0.0)
    return rho, u, p


def build_initial_shock(grid, eos_air: TammannEos, peak_p: float, front_x: float,
                        profile: str = "step", tail_length: float = 0.0,
                        ambient_densities=None, ambient_p: float = P_ATM):
    """1D state: ambient everywhere, the shock carved into the air region."""
    dens = ambient_densities or eos_mod.DEFAULT_DENSITY
    xs = grid.centers(with_ghost=True)
    labels = [m.label for m in grid.materials]
    rho = np.empty(grid.n_tot)
    for mid, label in enumerate(labels):
        rho[grid.material == mid] = dens[label]
    u = np.zeros(grid.n_tot)
    p = np.full(grid.n_tot, ambient_p)
    air_id = labels.index(eos_air.label)
    in_air = grid.material == air_id
    rho_s, u_s, p_s = shock_profile(
        xs, eos_air, dens[eos_air.label], ambient_p, peak_p, front_x, profile, tail_length
    )
    rho = np.where(in_air, rho_s, rho)
    u = np.where(in_air, u_s, u)
    p = np.where(in_air, p_s, p)
    state = solver1d.from_primitives(grid, rho, u, p)
    return state


def _default_1d_gauges(width: float):
    """Gauge positions before / inside / after the plastic.

    Defaults -5, -1, 0, +1 m; gauges 2 and 4 are pushed outward when a
    thick plastic layer (width >= 2 m) would swallow them.
    """
    g2 = -1.0 if width / 2.0 < 1.0 else -(width / 2.0 + 0.5)
    g4 = -g2
    gauges = [-5.0, g2]
    if width > 0.0:
        gauges.append(0.0)
    gauges.append(g4)
    return gauges


def air_plastic_water_1d(width_plastic: float = 0.1, **overrides) -> ScenarioSpec:
    """Air | plastic (centered at x=0) | water, shock incoming from the left.

    width 0 degenerates to the plain air-water interface; gauge 3 (inside
    the plastic) is dropped in that case.
    """
    if width_plastic < 0.0:
        raise ScenarioError(f"width must be >= 0, got {width_plastic}")
    w = width_plastic
    if w > 0.0:
        regions = [("air", -w / 2.0), ("plastic", w / 2.0), ("water", None)]
        name = f"air_plastic_water_1d_w{w:g}"
    else:
        regions = [("air", 0.0), ("water", None)]
        name = "air_water_1d"
    spec = ScenarioSpec(
        name=name,
        kind="1d",
        regions=regions,
        gauges=_default_1d_gauges(w),
        profile="step_with_linear_tail",
        **overrides,
    )
    spec.width_plastic = w
    spec.validate()
    return spec


def air_water_1d(**overrides) -> ScenarioSpec:
    return air_plastic_water_1d(0.0, **overrides)


def cartesian_cylinder_2d(**overrides) -> ScenarioSpec:
    """Planar shock in air hitting a water box (cylinder after revolution)."""
    spec = ScenarioSpec(
        name="cartesian_cylinder_2d",
        kind="2d_cartesian",
        front_x=-0.025,
        profile="step",
        t_end=200.0e-6,
        gauges=[(-0.01, 0.0)],
        **overrides,
    )
    spec.validate()
    return spec


def mapped_sphere_2d(interfaces=("outer",), **overrides) -> ScenarioSpec:
    """Planar shock hitting a spherical water interface (mapped grid).

    interfaces ('outer',) puts water inside the outer circle; adding
    'inner' models a shell of shell_material between the two circles.
    """
    if tuple(interfaces) not in (("outer",), ("inner", "outer")):
        raise ScenarioError(f"interfaces must be ('outer',) or ('inner','outer'), got {interfaces}")
    spec = ScenarioSpec(
        name="mapped_sphere_2d",
        kind="2d_mapped",
        front_x=-0.025,
        profile="step",
        t_end=150.0e-6,
        mx=64,
        my=32,
        gauges=[(-0.01, 0.0)],
        interfaces=tuple(interfaces),
        **overrides,
    )
    spec.validate()
    return spec


def _build_1d(spec: ScenarioSpec):
    materials, densities = material_tables(spec)
    names = [name for name, _ in spec.regions]
    mats = [materials[n] for n in names]
    regions_idx = []
    for k, (name, x_end) in enumerate(spec.regions):
        regions_idx.append((k, spec.x_hi if x_end is None else x_end))
    grid = build_grid_1d(spec.x_lo, spec.x_hi, spec.n_cells, regions_idx, mats)
    width = getattr(spec, "width_plastic", 0.0)
    if width > 0.0 and width < 4.0 * grid.dx:
        raise ScenarioError(
            f"plastic width {width} under 4 cells at n={spec.n_cells} (dx={grid.dx:g})"
        )
    air = materials["air"]
    state = build_initial_shock(
        grid, air, spec.peak_pressure, spec.front_x, spec.profile,
        spec.tail_length, densities, spec.ambient_pressure,
    )
    state.bc = spec.bc
    gauges = solver1d.place_gauges(grid, spec.gauges)
    return state, gauges


def _build_2d(spec: ScenarioSpec):
    materials, densities = material_tables(spec)
    water = materials["water"]
    air = materials["air"]
    if spec.kind == "2d_cartesian":
        mats = [air, water]
        x0, x1, y0, y1 = spec.extents
        grid = build_cartesian_grid(x0, x1, y0, y1, spec.mx, spec.my, mats)
        assign_materials_rectangle(grid, 1, 0, *spec.water_box)
        rho_of = {0: densities["air"], 1: densities["water"]}
    else:
        r_i, r_o, r_m = spec.radii
        if spec.interfaces == ("outer",):
            mats = [air, water]
            grid = build_mapped_grid(spec.mx, spec.my, r_i, r_o, r_m, mats)
            assign_materials_ring(grid, 1, 0, r_o / r_m)
            rho_of = {0: densities["air"], 1: densities["water"]}
        else:
            shell = materials[spec.shell_material]
            mats = [air, shell, water]
            grid = build_mapped_grid(spec.mx, spec.my, r_i, r_o, r_m, mats)
            assign_materials_ring(grid, 1, 0, r_o / r_m)
            assign_materials_ring(grid, 2, 1, r_i / r_m)
            rho_of = {0: densities["air"], 1: densities[spec.shell_material],
                      2: densities["water"]}
    state = solver2d.initial_planar_shock(
        grid, air, rho_of, spec.ambient_pressure, spec.peak_pressure,
        spec.front_x, spec.profile, spec.tail_length,
    )
    # axis at the bottom; non-reflecting everywhere else
    state.bc = ("outflow", "outflow", "axis", "outflow")
    gauges = solver2d.place_gauges(grid, spec.gauges)
    return state, gauges


def run_scenario(spec: ScenarioSpec, numerics: NumericsConfig | None = None,
                 outdir=None) -> RunResult:
    """Execute a scenario, optionally writing artifacts, and report peaks."""
    spec.validate()
    numerics = numerics or NumericsConfig()
    if spec.kind == "1d":
        state, gauges = _build_1d(spec)
        advance = solver1d.advance
    else:
        state, gauges = _build_2d(spec)
        advance = solver2d.advance
    snapshots = []
    if outdir is not None:
        snapshots.append(_snapshot(state, outdir, 0))
    if spec.t_end > 0.0:
        if spec.output_interval:
            k = 1
            t_next = spec.output_interval
            while t_next < spec.t_end * (1.0 - 1e-12):
                advance(state, t_next, numerics, gauges=gauges if k == 1 else ())
                if k == 1:
                    gauges_started = True
                if outdir is not None:
                    snapshots.append(_snapshot(state, outdir, k))
                k += 1
                t_next += spec.output_interval
            advance(state, spec.t_end, numerics, gauges=gauges)
        else:
            advance(state, spec.t_end, numerics, gauges=gauges)
    else:
        if spec.kind == "1d":
            solver1d.record_gauges(state, gauges)
        else:
            solver2d.record_gauges(state, gauges)
    if outdir is not None and spec.t_end > 0.0:
        snapshots.append(_snapshot(state, outdir, "final"))
    reports = [gauge_report(g) for g in gauges]
    manifest = make_manifest(spec, numerics, state, reports, snapshots)
    if outdir is not None:
        write_gauges_csv(gauges, f"{outdir}/gauges.csv")
        with open(f"{outdir}/manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
    return RunResult(spec=spec, gauges=gauges, reports=reports, state=state,
                     manifest=manifest)


def gauge_report(gauge) -> GaugeReport:
    p = np.asarray(gauge.pressures_kpa)
    k = int(np.argmax(p))
    return GaugeReport(
        gauge_id=gauge.gid,
        max_kpa=float(p[k]),
        t_max=float(gauge.times[k]),
        n_samples=len(p),
    )


def make_manifest(spec, numerics, state, reports, snapshots=()):
    spec_d = {k: v for k, v in asdict(spec).items()}
    spec_d["width_plastic"] = getattr(spec, "width_plastic", None)
    num_d = {
        k: (v if not hasattr(v, "name") else {"name": v.name, "scale": v.scale})
        for k, v in asdict(numerics).items()
        if not k.startswith("_")
    }
    num_d["fixed_dt"] = numerics.fixed_dt
    num_d["dt_max"] = None if np.isinf(numerics.dt_max) else numerics.dt_max
    manifest = {
        "package_version": __version__,
        "scenario": spec_d,
        "numerics": num_d,
        "final_time": float(state.t),
        "peak_report": [asdict(r) for r in reports],
        "snapshots": list(snapshots),
    }
    grid = state.grid
    if hasattr(grid, "mapping_name"):
        manifest["grid"] = {
            "mapping": grid.mapping_name,
            "variant": grid.variant,
            **grid.min_kappa_report(),
        }
    return manifest


def write_gauges_csv(gauges, path):
    with open(path, "w") as fh:
        fh.write("time_s,gauge_id,pressure_kPa\n")
        for gauge in gauges:
            for t, p in zip(gauge.times, gauge.pressures_kpa):
                fh.write(f"{t!r},{gauge.gid},{p!r}\n")


def _snapshot(state, outdir, tag):
    path = f"{outdir}/snapshot_{tag}.csv"
    if isinstance(state, solver1d.State1D):
        write_snapshot_1d(state, path)
    else:
        solver2d.write_snapshot(state, path)
    return path


def write_snapshot_1d(state, path):
    grid = state.grid
    rho, u, p = solver1d.primitives(state)
    inner = grid.interior()
    xs = grid.centers()
    with open(path, "w") as fh:
        fh.write(f"# t = {state.t!r}\n")
        fh.write("x_m,rho,u,p_kPa,material\n")
        mat = grid.material[inner]
        for k in range(grid.n_cells):
            fh.write(
                f"{xs[k]!r},{rho[inner][k]!r},{u[inner][k]!r},"
                f"{p[inner][k] / 1000.0!r},{int(mat[k])}\n"
            )


def table_sweep(widths, numerics=None, **overrides):
    """Gauge-peak reports for a list of plastic widths (Table-2 style)."""
    if len(widths) == 0:
        raise ScenarioError("empty width list")
    rows = []
    for w in widths:
        spec = air_plastic_water_1d(w, **overrides)
        res = run_scenario(spec, numerics)
        rows.append((w, res))
    return rows
