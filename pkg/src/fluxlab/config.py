"""Experiment configuration: INI-style files with nested sections.

A config names a domain, a potential, a flux sweep grid, solver settings
and per-experiment parameters.  Shapes are written as `disk cx cy r` or
`rect x0 y0 x1 y1`; holes are keys starting with `hole` in the [domain]
section, ordered by key.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import Disk, DomainSpec, Rect


def parse_shape(text: str):
    parts = text.split()
    try:
        if parts[0] == "disk" and len(parts) == 4:
            return Disk(float(parts[1]), float(parts[2]), float(parts[3]))
        if parts[0] == "rect" and len(parts) == 5:
            return Rect(float(parts[1]), float(parts[2]), float(parts[3]), float(parts[4]))
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad shape {text!r}") from exc
    raise ConfigError(f"bad shape {text!r}: expected 'disk cx cy r' or 'rect x0 y0 x1 y1'")


@dataclass
class SolverSettings:
    count: int = 3
    tol: float = 1e-10
    seed: int = 0x5EED
    cluster_tol: float = 1e-3


@dataclass
class CircleSettings:
    points: int = 256
    alphas: tuple = (0.0, 0.1, 0.25, 0.4, 0.5)
    epsilon: float = 0.01


@dataclass
class SlitSettings:
    count: int = 32
    hole: int = 1
    mode: str = "radial"  # or "shortest"


@dataclass
class MultiplicitySettings:
    bump_amplitude: float = 40.0
    bump_sigma: float = 0.2
    bump_angle: float = 0.0
    bump_radius: float = 0.65


@dataclass
class ExperimentConfig:
    domain: DomainSpec
    potential_kind: str = "zero"
    potential_params: dict = field(default_factory=dict)
    sweep: tuple = (0.0, 1.0, 0.025)
    solver: SolverSettings = field(default_factory=SolverSettings)
    circle: CircleSettings = field(default_factory=CircleSettings)
    slit: SlitSettings = field(default_factory=SlitSettings)
    multiplicity: MultiplicitySettings = field(default_factory=MultiplicitySettings)
    name: str = "experiment"

    def potential(self, grid):
        """Evaluate the configured potential on the grid vertices (None = zero)."""
        kind = self.potential_kind
        p = self.potential_params
        if kind == "zero":
            return None
        if kind == "radial_well":
            cx, cy = p.get("center", (0.0, 0.0))
            r = p["radius"]
            depth = p["depth"]
            d2 = (grid.xy[:, 0] - cx) ** 2 + (grid.xy[:, 1] - cy) ** 2
            return np.where(d2 <= r * r, depth, 0.0)
        if kind == "bump":
            cx, cy = p.get("center", (0.0, 0.0))
            sig = p["sigma"]
            amp = p["amplitude"]
            d2 = (grid.xy[:, 0] - cx) ** 2 + (grid.xy[:, 1] - cy) ** 2
            return amp * np.exp(-0.5 * d2 / sig**2)
        if kind == "table":
            pts = np.loadtxt(p["file"], ndmin=2)
            V = np.zeros(grid.n_vertices)
            for x, y, v in pts:
                V[np.argmin((grid.xy[:, 0] - x) ** 2 + (grid.xy[:, 1] - y) ** 2)] = v
            return V
        raise ConfigError(f"unknown potential kind {kind!r}")

    def sweep_values(self):
        start, stop, step = self.sweep
        return np.round(np.arange(start, stop + 0.5 * step, step), 12)


def _floats(text):
    return tuple(float(t) for t in text.split())


def load_config(path) -> ExperimentConfig:
    """Parse an experiment configuration file; raise ConfigError on problems."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if "domain" not in cp:
        raise ConfigError("config needs a [domain] section")

    dom = cp["domain"]
    if "file" in dom:
        ref = dom["file"]
        if not os.path.isabs(ref):
            ref = os.path.join(os.path.dirname(os.path.abspath(path)), ref)
        if not os.path.exists(ref):
            raise ConfigError(f"referenced domain file not found: {ref}")
        return load_config(ref)
    try:
        outer = parse_shape(dom["outer"])
        holes = tuple(parse_shape(dom[k]) for k in sorted(dom) if k.startswith("hole"))
        spacing = float(dom.get("spacing", "0.05"))
        domain = DomainSpec(outer=outer, holes=holes, spacing=spacing)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [domain] section: {exc}") from exc

    cfg = ExperimentConfig(domain=domain)

    if "potential" in cp:
        pot = cp["potential"]
        cfg.potential_kind = pot.get("kind", "zero")
        params = {}
        for key in ("radius", "depth", "sigma", "amplitude"):
            if key in pot:
                params[key] = float(pot[key])
        if "center" in pot:
            params["center"] = _floats(pot["center"])
        if "file" in pot:
            ref = pot["file"]
            if not os.path.isabs(ref):
                ref = os.path.join(os.path.dirname(os.path.abspath(path)), ref)
            if not os.path.exists(ref):
                raise ConfigError(f"potential table not found: {ref}")
            params["file"] = ref
        cfg.potential_params = params
        if cfg.potential_kind not in ("zero", "radial_well", "bump", "table"):
            raise ConfigError(f"unknown potential kind {cfg.potential_kind!r}")

    if "sweep" in cp:
        sw = cp["sweep"]
        cfg.sweep = (
            float(sw.get("start", "0.0")),
            float(sw.get("stop", "1.0")),
            float(sw.get("step", "0.025")),
        )
        if cfg.sweep[2] <= 0:
            raise ConfigError("sweep step must be positive")

    if "solver" in cp:
        so = cp["solver"]
        cfg.solver = SolverSettings(
            count=int(so.get("count", "3")),
            tol=float(so.get("tol", "1e-10")),
            seed=int(so.get("seed", str(0x5EED)), 0),
            cluster_tol=float(so.get("cluster_tol", "1e-3")),
        )

    if "circle" in cp:
        ci = cp["circle"]
        cfg.circle = CircleSettings(
            points=int(ci.get("points", "256")),
            alphas=_floats(ci.get("alphas", "0 0.1 0.25 0.4 0.5")),
            epsilon=float(ci.get("epsilon", "0.01")),
        )

    if "slit" in cp:
        sl = cp["slit"]
        cfg.slit = SlitSettings(
            count=int(sl.get("count", "32")),
            hole=int(sl.get("hole", "1")),
            mode=sl.get("mode", "radial"),
        )
        if cfg.slit.mode not in ("radial", "shortest"):
            raise ConfigError(f"unknown slit mode {cfg.slit.mode!r}")

    if "multiplicity" in cp:
        mu = cp["multiplicity"]
        cfg.multiplicity = MultiplicitySettings(
            bump_amplitude=float(mu.get("bump_amplitude", "40.0")),
            bump_sigma=float(mu.get("bump_sigma", "0.2")),
            bump_angle=float(mu.get("bump_angle", "0.0")),
            bump_radius=float(mu.get("bump_radius", "0.65")),
        )

    if "experiment" in cp:
        cfg.name = cp["experiment"].get("name", cfg.name)
    return cfg
