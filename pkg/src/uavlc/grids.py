"""Ambient illumination grids: sampling, text serialization, synthesis.

A grid is a square array of nonnegative cell values covering the service
area with piecewise-constant interpolation; a sequence stacks frames taken
``dt`` minutes apart.  Files use a one-line ASCII header::

    ILLUMGRID v1 <side> <frames> <cell_size_m> <dt_min>

followed by ``frames * side`` lines of ``side`` space-separated decimal
floats (row-major within a frame, frames in order).  Values are written
with 17 significant digits so a save/load round trip is exact.

Synthetic sequences superpose Gaussian blobs: static ones, blobs drifting
at constant velocity, and blobs whose amplitude pulses sinusoidally.  All
randomness comes from one seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridFileError(ValueError):
    """Base class for grid file problems."""


class MalformedHeaderError(GridFileError):
    """The header line is not a valid ILLUMGRID v1 header."""


class DimensionMismatchError(GridFileError):
    """A payload line does not match the declared grid side."""


class NegativeValueError(GridFileError):
    """The payload contains a negative cell value."""


class TruncatedPayloadError(GridFileError):
    """The file ends before the declared number of frames."""


class GridDomainError(ValueError):
    """A sample coordinate fell outside the grid footprint."""


@dataclass
class IlluminationGrid:
    """One frame of ambient illumination over the service area.

    ``values[row, col]`` holds the level of the cell whose x-extent is
    ``[origin_x + col*cell_size, origin_x + (col+1)*cell_size)`` and
    y-extent likewise with ``row``.  Units are whatever the producer used;
    the experiment harness rescales into receiver-plane watts.
    """

    values: np.ndarray
    cell_size: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"grid values must be square, got {self.values.shape}")
        if self.cell_size <= 0.0:
            raise ValueError("cell_size must be positive")
        if np.any(self.values < 0.0):
            raise NegativeValueError("grid values must be nonnegative")

    @property
    def side(self) -> int:
        return self.values.shape[0]

    @property
    def extent(self) -> float:
        return self.side * self.cell_size

    def scaled(self, factor: float) -> "IlluminationGrid":
        return IlluminationGrid(self.values * factor, self.cell_size, self.origin)


@dataclass
class GridSequence:
    """A time series of grids sharing one footprint and time step (minutes)."""

    frames: np.ndarray
    cell_size: float
    dt: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 3 or self.frames.shape[1] != self.frames.shape[2]:
            raise ValueError(f"frames must be (T, side, side), got {self.frames.shape}")
        if self.cell_size <= 0.0 or self.dt <= 0.0:
            raise ValueError("cell_size and dt must be positive")
        if np.any(self.frames < 0.0):
            raise NegativeValueError("frame values must be nonnegative")

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def side(self) -> int:
        return self.frames.shape[1]

    def grid(self, t: int) -> IlluminationGrid:
        return IlluminationGrid(self.frames[t], self.cell_size, self.origin)


def _cell_index(offset: float, cell: float, side: int, axis: str) -> int:
    extent = side * cell
    if offset < 0.0 or offset > extent:
        raise GridDomainError(
            f"{axis} coordinate offset {offset!r} outside grid footprint [0, {extent}]"
        )
    # A coordinate exactly on the far edge belongs to the last cell.
    return min(int(offset // cell), side - 1)


def sample(grid: IlluminationGrid, x: float, y: float) -> float:
    """Piecewise-constant lookup of the cell containing ``(x, y)``."""
    col = _cell_index(x - grid.origin[0], grid.cell_size, grid.side, "x")
    row = _cell_index(y - grid.origin[1], grid.cell_size, grid.side, "y")
    return float(grid.values[row, col])


# ------------------------------------------------------------------ file I/O

_MAGIC = "ILLUMGRID"
_VERSION = "v1"


def save_grid_sequence(seq: GridSequence, path) -> None:
    """Write ``seq`` in the ILLUMGRID v1 text format."""
    lines = [
        f"{_MAGIC} {_VERSION} {seq.side} {len(seq)} "
        f"{seq.cell_size:.17g} {seq.dt:.17g}"
    ]
    for frame in seq.frames:
        for row in frame:
            lines.append(" ".join(f"{v:.17g}" for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_grid_sequence(path) -> GridSequence:
    """Read an ILLUMGRID v1 file, validating header and payload shape."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines:
        raise MalformedHeaderError("empty file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != _MAGIC or head[1] != _VERSION:
        raise MalformedHeaderError(f"bad header line: {lines[0]!r}")
    try:
        side, frames = int(head[2]), int(head[3])
        cell_size, dt = float(head[4]), float(head[5])
    except ValueError as exc:
        raise MalformedHeaderError(f"unparseable header fields: {lines[0]!r}") from exc
    if side <= 0 or frames <= 0 or cell_size <= 0.0 or dt <= 0.0:
        raise MalformedHeaderError(f"nonpositive header fields: {lines[0]!r}")

    payload = [ln for ln in lines[1:] if ln.strip()]
    expected = frames * side
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"expected {expected} payload lines, file has {len(payload)}"
        )
    if len(payload) > expected:
        raise DimensionMismatchError(
            f"expected {expected} payload lines, file has {len(payload)}"
        )
    data = np.empty((expected, side), dtype=np.float64)
    for i, ln in enumerate(payload):
        parts = ln.split()
        if len(parts) != side:
            raise DimensionMismatchError(
                f"payload line {i + 2}: expected {side} values, got {len(parts)}"
            )
        try:
            row = np.array([float(p) for p in parts], dtype=np.float64)
        except ValueError as exc:
            raise GridFileError(f"payload line {i + 2}: unparseable value") from exc
        if np.any(row < 0.0):
            raise NegativeValueError(f"payload line {i + 2}: negative value")
        data[i] = row
    return GridSequence(data.reshape(frames, side, side), cell_size, dt)


# ------------------------------------------------------------------ synthesis


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the Gaussian-blob scene generator.

    Lengths are metres, speeds metres/minute, periods minutes.  Drifting
    blob velocities are clipped so the centre stays inside an inner margin
    of the footprint for the whole sequence, keeping motion linear.
    """

    side: int = 32
    frames: int = 16
    cell_size: float = 2.5
    dt: float = 1.0
    n_static: int = 1
    n_drifting: int = 2
    n_pulsing: int = 1
    amp_range: tuple[float, float] = (0.2, 1.0)
    sigma_range: tuple[float, float] = (6.0, 12.0)
    speed_range: tuple[float, float] = (0.5, 2.0)
    period_range: tuple[float, float] = (5.0, 12.0)
    depth_range: tuple[float, float] = (0.3, 0.8)
    margin_frac: float = 0.15


@dataclass(frozen=True)
class _Blob:
    x0: float
    y0: float
    vx: float
    vy: float
    amp: float
    sigma: float
    depth: float = 0.0
    period: float = 0.0
    phase: float = 0.0

    def frame_values(self, xs: np.ndarray, ys: np.ndarray, t_min: float) -> np.ndarray:
        cx = self.x0 + self.vx * t_min
        cy = self.y0 + self.vy * t_min
        amp = self.amp
        if self.period > 0.0:
            # Normalised so the peak amplitude stays at self.amp and the
            # trough at amp (1-depth)/(1+depth) >= 0.
            osc = 1.0 + self.depth * np.sin(2.0 * np.pi * t_min / self.period + self.phase)
            amp = self.amp * osc / (1.0 + self.depth)
        r2 = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2
        return amp * np.exp(-r2 / (2.0 * self.sigma**2))


def _draw_blobs(cfg: SynthConfig, rng: np.random.Generator) -> list[_Blob]:
    extent = cfg.side * cfg.cell_size
    lo, hi = cfg.margin_frac * extent, (1.0 - cfg.margin_frac) * extent
    horizon = cfg.frames * cfg.dt
    blobs = []

    def centre():
        return rng.uniform(lo, hi), rng.uniform(lo, hi)

    for _ in range(cfg.n_static):
        x0, y0 = centre()
        blobs.append(_Blob(x0, y0, 0.0, 0.0, rng.uniform(*cfg.amp_range), rng.uniform(*cfg.sigma_range)))
    for _ in range(cfg.n_drifting):
        x0, y0 = centre()
        theta = rng.uniform(0.0, 2.0 * np.pi)
        speed = rng.uniform(*cfg.speed_range)
        vx, vy = speed * np.cos(theta), speed * np.sin(theta)
        # Scale the velocity down if the endpoint would leave the margin box.
        scale = 1.0
        for v, p in ((vx, x0), (vy, y0)):
            end = p + v * horizon
            if end > hi:
                scale = min(scale, (hi - p) / (v * horizon))
            elif end < lo:
                scale = min(scale, (lo - p) / (v * horizon))
        blobs.append(_Blob(x0, y0, vx * scale, vy * scale,
                           rng.uniform(*cfg.amp_range), rng.uniform(*cfg.sigma_range)))
    for _ in range(cfg.n_pulsing):
        x0, y0 = centre()
        blobs.append(_Blob(x0, y0, 0.0, 0.0,
                           rng.uniform(*cfg.amp_range), rng.uniform(*cfg.sigma_range),
                           depth=rng.uniform(*cfg.depth_range),
                           period=rng.uniform(*cfg.period_range),
                           phase=rng.uniform(0.0, 2.0 * np.pi)))
    return blobs


def synth_sequence(cfg: SynthConfig, seed: int) -> GridSequence:
    """Deterministically synthesize a blob scene from ``seed``."""
    rng = np.random.default_rng(seed)
    blobs = _draw_blobs(cfg, rng)
    centres = (np.arange(cfg.side) + 0.5) * cfg.cell_size
    frames = np.zeros((cfg.frames, cfg.side, cfg.side), dtype=np.float64)
    for t in range(cfg.frames):
        t_min = t * cfg.dt
        for blob in blobs:
            frames[t] += blob.frame_values(centres, centres, t_min)
    return GridSequence(frames, cfg.cell_size, cfg.dt)
