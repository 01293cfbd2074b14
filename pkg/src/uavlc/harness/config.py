"""Experiment configuration: one flat key-value file drives everything.

The file format is plain text, one ``key = value`` per line; ``#`` starts
a comment and blank lines are skipped.  Keys are case-sensitive, the
registry below is exhaustive (unknown or repeated keys are rejected), and
every key has a default, so an empty file — or no file at all — is a
complete desk-scale experiment.  Physics and solver knobs keep their
conventional symbol names (``xi``, ``rho``, ``eta_r``, ``gamma``, ``X``,
``S``, ``D_h``, ...); experiment-shape knobs are spelled out
(``users``, ``height``, ``illum_scale``, ...).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

from ..channel import VlcParams
from ..grids import SynthConfig
from ..optimizer import SolverOptions
from ..predictor import PredictorConfig


class ConfigError(ValueError):
    """The configuration file or its values are unusable."""


VARIANTS = (
    "proposed",
    "actual-illum",
    "persistence",
    "center",
    "assoc-only",
    "placement-only",
    "exhaustive",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run needs, with desk-scale defaults.

    Field groups mirror the pipeline: channel physics, solver knobs,
    forecaster architecture/training, scenario shape, grid source
    (a file path or the synthetic-scene generator), and harness outputs.
    ``d_q`` is accepted for config-file compatibility but has no effect.
    """

    # channel physics
    phi_half: float = 90.0   # transmitter semi-angle, degrees
    psi_c: float = 90.0      # receiver field of view, degrees
    rho: float = 0.5         # photodetector area, m^2
    xi: float = 0.8          # responsivity, A/W
    n_e: float = 1.5         # concentrator refractive index
    n_w: float = 1e-10       # noise floor as ambient-equivalent watts
    env_x: float = 10.0      # blockage sigmoid offset, degrees
    env_y: float = 0.6       # blockage sigmoid decay, 1/degree
    eta_r: float = 5e-4      # illumination target, W

    # deployment solver
    gamma: float = 0.01
    delta: float = 0.01
    epsilon: float = 1e-4
    inner_cap: int = 10_000
    sca_cap: int = 200
    outer_cap: int = 50
    n_starts: int = 4
    resolution: int = 15     # exhaustive-oracle position lattice

    # forecaster
    grid_side: int = 32
    layers: int = 2
    kernel: int = 5
    pool: int = 2
    feature_maps: tuple = (4, 8)
    hidden: int = 32
    d_q: int = 16            # accepted, unused
    learn_rate: float = 1e-3
    epochs: int = 100
    seq_len: int = 8

    # scenario
    area_x: float = 80.0
    area_y: float = 80.0
    users: int = 10
    fleet: int = 2
    height: float = 20.0
    d_min: float = 25.0      # minimum squared separation, m^2
    rate_min: float = 0.5
    rate_max: float = 1.5
    seed: int = 0

    # grid source: a file wins over synthesis when set
    grid_file: str = ""
    frames: int = 16
    cell_size: float = 2.5
    dt: float = 1.0
    n_static: int = 1
    n_drifting: int = 2
    n_pulsing: int = 1
    amp_min: float = 0.2
    amp_max: float = 1.0
    sigma_min: float = 6.0
    sigma_max: float = 12.0
    speed_min: float = 0.5
    speed_max: float = 2.0
    period_min: float = 5.0
    period_max: float = 12.0
    depth_min: float = 0.3
    depth_max: float = 0.8

    # harness
    illum_scale: float = 2e-4  # grid units -> receiver-plane watts
    checkpoint: str = ""       # load these weights instead of training
    out_dir: str = "out"
    variants: str = "proposed,actual-illum,persistence,center,assoc-only"

    def __post_init__(self):
        if self.users < 1 or self.fleet < 1:
            raise ConfigError("users and fleet must be at least 1")
        if self.rate_min > self.rate_max or self.rate_min < 0.0:
            raise ConfigError("need 0 <= rate_min <= rate_max")
        if self.illum_scale <= 0.0:
            raise ConfigError("illum_scale must be positive")
        if self.area_x <= 0.0 or self.area_y <= 0.0:
            raise ConfigError("area dimensions must be positive")
        for path in (self.grid_file, self.checkpoint):
            if path and not os.path.isfile(path):
                raise ConfigError(f"referenced file does not exist: {path!r}")
        self.variant_list()

    def vlc_params(self) -> VlcParams:
        return VlcParams(
            phi_half=self.phi_half, psi_c=self.psi_c, rho=self.rho, xi=self.xi,
            n_e=self.n_e, n_w=self.n_w, env_x=self.env_x, env_y=self.env_y,
            eta_r=self.eta_r, altitude=self.height, d_min=self.d_min,
        )

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            gamma=self.gamma, delta=self.delta, epsilon=self.epsilon,
            inner_cap=self.inner_cap, sca_cap=self.sca_cap,
            outer_cap=self.outer_cap, seed=self.seed, n_starts=self.n_starts,
        )

    def predictor_config(self) -> PredictorConfig:
        try:
            return PredictorConfig(
                grid_side=self.grid_side, layers=self.layers, kernel=self.kernel,
                pool=self.pool, feature_maps=tuple(self.feature_maps),
                hidden=self.hidden, seq_len=self.seq_len,
                learn_rate=self.learn_rate, epochs=self.epochs,
            )
        except ValueError as exc:
            raise ConfigError(f"forecaster architecture invalid: {exc}") from exc

    def synth_config(self) -> SynthConfig:
        return SynthConfig(
            side=self.grid_side, frames=self.frames, cell_size=self.cell_size,
            dt=self.dt, n_static=self.n_static, n_drifting=self.n_drifting,
            n_pulsing=self.n_pulsing, amp_range=(self.amp_min, self.amp_max),
            sigma_range=(self.sigma_min, self.sigma_max),
            speed_range=(self.speed_min, self.speed_max),
            period_range=(self.period_min, self.period_max),
            depth_range=(self.depth_min, self.depth_max),
        )

    def variant_list(self) -> tuple:
        names = tuple(v.strip() for v in self.variants.split(",") if v.strip())
        if not names:
            raise ConfigError("variants must name at least one variant")
        for name in names:
            if name not in VARIANTS:
                raise ConfigError(
                    f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}"
                )
        return names


def _parse_maps(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"feature map list must be integers, got {text!r}") from exc


# config-file key -> (dataclass field, caster).  Symbols keep their usual
# one-letter names here even where the dataclass field is more explicit.
_KEYS = {
    "phi": ("phi_half", float),
    "psi_c": ("psi_c", float),
    "rho": ("rho", float),
    "xi": ("xi", float),
    "n_e": ("n_e", float),
    "n_w": ("n_w", float),
    "X": ("env_x", float),
    "Y": ("env_y", float),
    "eta_r": ("eta_r", float),
    "gamma": ("gamma", float),
    "delta": ("delta", float),
    "e": ("inner_cap", int),
    "epsilon": ("epsilon", float),
    "sca_cap": ("sca_cap", int),
    "outer_cap": ("outer_cap", int),
    "n_starts": ("n_starts", int),
    "resolution": ("resolution", int),
    "N": ("grid_side", int),
    "L": ("layers", int),
    "S": ("kernel", int),
    "S_m": ("pool", int),
    "K": ("feature_maps", _parse_maps),
    "D_h": ("hidden", int),
    "D_q": ("d_q", int),
    "alpha": ("learn_rate", float),
    "epochs": ("epochs", int),
    "seq_len": ("seq_len", int),
    "area_x": ("area_x", float),
    "area_y": ("area_y", float),
    "users": ("users", int),
    "fleet": ("fleet", int),
    "height": ("height", float),
    "d_min": ("d_min", float),
    "rate_min": ("rate_min", float),
    "rate_max": ("rate_max", float),
    "seed": ("seed", int),
    "grid_file": ("grid_file", str),
    "frames": ("frames", int),
    "cell_size": ("cell_size", float),
    "dt": ("dt", float),
    "n_static": ("n_static", int),
    "n_drifting": ("n_drifting", int),
    "n_pulsing": ("n_pulsing", int),
    "amp_min": ("amp_min", float),
    "amp_max": ("amp_max", float),
    "sigma_min": ("sigma_min", float),
    "sigma_max": ("sigma_max", float),
    "speed_min": ("speed_min", float),
    "speed_max": ("speed_max", float),
    "period_min": ("period_min", float),
    "period_max": ("period_max", float),
    "depth_min": ("depth_min", float),
    "depth_max": ("depth_max", float),
    "illum_scale": ("illum_scale", float),
    "checkpoint": ("checkpoint", str),
    "out_dir": ("out_dir", str),
    "variants": ("variants", str),
}


def parse_config(path) -> ExperimentConfig:
    """Read a key-value config file; unknown/duplicate keys are errors."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc

    values = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: key {key!r} given twice")
        seen.add(key)
        field_name, cast = _KEYS[key]
        try:
            values[field_name] = cast(value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return ExperimentConfig(**values)


def default_lines() -> list:
    """The full key list with defaults, in file syntax (for docs and --help)."""
    defaults = ExperimentConfig()
    by_field = {field_name: key for key, (field_name, _) in _KEYS.items()}
    lines = []
    for f in fields(defaults):
        value = getattr(defaults, f.name)
        if f.name == "feature_maps":
            value = ",".join(str(v) for v in value)
        lines.append(f"{by_field[f.name]} = {value}")
    return lines
