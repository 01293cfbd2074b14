"""Grid sampling semantics, file format round trips, synthesizer behaviour."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from uavlc.grids import (
    DimensionMismatchError,
    GridDomainError,
    GridFileError,
    GridSequence,
    IlluminationGrid,
    MalformedHeaderError,
    NegativeValueError,
    SynthConfig,
    TruncatedPayloadError,
    load_grid_sequence,
    sample,
    save_grid_sequence,
    synth_sequence,
)


def small_grid():
    vals = np.arange(16.0).reshape(4, 4)
    return IlluminationGrid(vals, cell_size=2.0)


# ------------------------------------------------------------------- sampling


def test_sample_is_piecewise_constant_within_cell():
    g = small_grid()
    # cell (row 1, col 2) covers x in [4, 6), y in [2, 4)
    assert sample(g, 4.0, 2.0) == 6.0
    assert sample(g, 5.999, 3.999) == 6.0


def test_sample_far_edge_clamps_to_last_cell():
    g = small_grid()
    assert sample(g, 8.0, 8.0) == 15.0


def test_sample_outside_footprint_raises():
    g = small_grid()
    with pytest.raises(GridDomainError):
        sample(g, -0.1, 2.0)
    with pytest.raises(GridDomainError):
        sample(g, 2.0, 8.1)


def test_sample_respects_origin():
    g = IlluminationGrid(np.arange(16.0).reshape(4, 4), 2.0, origin=(100.0, 50.0))
    assert sample(g, 104.5, 52.5) == 6.0


def test_negative_values_rejected():
    with pytest.raises(NegativeValueError):
        IlluminationGrid(np.array([[1.0, -0.5], [0.0, 0.0]]), 1.0)


# ------------------------------------------------------------------- file I/O


@settings(max_examples=25)
@given(
    frames=hnp.arrays(
        np.float64,
        (3, 5, 5),
        elements=st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
    ),
    cell=st.floats(min_value=0.1, max_value=10.0),
    dt=st.floats(min_value=0.25, max_value=30.0),
)
def test_save_load_round_trip_is_exact(tmp_path_factory, frames, cell, dt):
    path = tmp_path_factory.mktemp("grids") / "seq.grid"
    seq = GridSequence(frames, cell, dt)
    save_grid_sequence(seq, path)
    back = load_grid_sequence(path)
    assert np.array_equal(back.frames, seq.frames)
    assert back.cell_size == seq.cell_size
    assert back.dt == seq.dt
    assert back.side == 5 and len(back) == 3


def _write(path, text):
    path.write_text(text)
    return path


def test_load_rejects_malformed_header(tmp_path):
    for bad in [
        "",
        "GRID v1 2 1 1.0 1.0\n0 0\n0 0\n",
        "ILLUMGRID v2 2 1 1.0 1.0\n0 0\n0 0\n",
        "ILLUMGRID v1 2 1 1.0\n0 0\n0 0\n",
        "ILLUMGRID v1 two 1 1.0 1.0\n0 0\n0 0\n",
        "ILLUMGRID v1 0 1 1.0 1.0\n",
        "ILLUMGRID v1 2 1 -1.0 1.0\n0 0\n0 0\n",
    ]:
        with pytest.raises(MalformedHeaderError):
            load_grid_sequence(_write(tmp_path / "bad.grid", bad))


def test_load_rejects_short_and_long_payload(tmp_path):
    with pytest.raises(TruncatedPayloadError):
        load_grid_sequence(_write(tmp_path / "t.grid", "ILLUMGRID v1 2 2 1.0 1.0\n0 0\n0 0\n0 0\n"))
    with pytest.raises(DimensionMismatchError):
        load_grid_sequence(
            _write(tmp_path / "l.grid", "ILLUMGRID v1 2 1 1.0 1.0\n0 0\n0 0\n0 0\n")
        )


def test_load_rejects_wrong_row_width(tmp_path):
    with pytest.raises(DimensionMismatchError):
        load_grid_sequence(_write(tmp_path / "w.grid", "ILLUMGRID v1 2 1 1.0 1.0\n0 0 0\n0 0\n"))


def test_load_rejects_negative_value(tmp_path):
    with pytest.raises(NegativeValueError):
        load_grid_sequence(_write(tmp_path / "n.grid", "ILLUMGRID v1 2 1 1.0 1.0\n0 -1\n0 0\n"))


def test_load_rejects_garbage_value(tmp_path):
    with pytest.raises(GridFileError):
        load_grid_sequence(_write(tmp_path / "g.grid", "ILLUMGRID v1 2 1 1.0 1.0\n0 x\n0 0\n"))


# ----------------------------------------------------------------- synthesizer


def test_synth_deterministic_per_seed():
    cfg = SynthConfig(side=16, frames=6)
    a = synth_sequence(cfg, seed=7)
    b = synth_sequence(cfg, seed=7)
    c = synth_sequence(cfg, seed=8)
    assert np.array_equal(a.frames, b.frames)
    assert not np.array_equal(a.frames, c.frames)


def test_synth_nonnegative_and_bounded():
    cfg = SynthConfig(side=16, frames=8, n_static=2, n_drifting=2, n_pulsing=2)
    seq = synth_sequence(cfg, seed=3)
    assert np.all(seq.frames >= 0.0)
    n_blobs = cfg.n_static + cfg.n_drifting + cfg.n_pulsing
    assert np.all(seq.frames <= n_blobs * cfg.amp_range[1] + 1e-12)


def test_synth_zero_blobs_gives_zero_frames():
    cfg = SynthConfig(side=8, frames=4, n_static=0, n_drifting=0, n_pulsing=0)
    seq = synth_sequence(cfg, seed=0)
    assert np.all(seq.frames == 0.0)


def test_synth_frames_evolve_smoothly():
    cfg = SynthConfig(side=32, frames=10)
    seq = synth_sequence(cfg, seed=11)
    deltas = np.abs(np.diff(seq.frames, axis=0)).max(axis=(1, 2))
    # bounded per-step change: blobs drift at most speed*dt metres and
    # pulse by a bounded fraction per minute
    assert np.all(deltas < 0.75 * seq.frames.max())


def _centroid(frame, cell):
    centres = (np.arange(frame.shape[0]) + 0.5) * cell
    total = frame.sum()
    cx = (frame.sum(axis=0) * centres).sum() / total
    cy = (frame.sum(axis=1) * centres).sum() / total
    return cx, cy


def test_drifting_blob_centroid_tracks_configured_velocity():
    # One wide drifting blob away from edges: the per-frame centroid
    # displacement estimates velocity * dt to within discretisation error.
    cfg = SynthConfig(
        side=32,
        frames=8,
        cell_size=2.5,
        dt=1.0,
        n_static=0,
        n_drifting=1,
        n_pulsing=0,
        sigma_range=(8.0, 8.0),
        speed_range=(1.2, 1.2),
        margin_frac=0.3,
    )
    seed = 5
    seq = synth_sequence(cfg, seed)
    # Reconstruct the velocity the generator drew (same draw order,
    # including the endpoint clipping).
    rng = np.random.default_rng(seed)
    lo, hi = 0.3 * 80.0, 0.7 * 80.0
    x0, y0 = rng.uniform(lo, hi), rng.uniform(lo, hi)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    speed = rng.uniform(1.2, 1.2)
    vx, vy = speed * np.cos(theta), speed * np.sin(theta)
    horizon = cfg.frames * cfg.dt
    scale = 1.0
    for v, p in ((vx, x0), (vy, y0)):
        end = p + v * horizon
        if end > hi:
            scale = min(scale, (hi - p) / (v * horizon))
        elif end < lo:
            scale = min(scale, (lo - p) / (v * horizon))
    vx, vy = vx * scale, vy * scale
    for t in range(len(seq) - 1):
        cx0, cy0 = _centroid(seq.frames[t], cfg.cell_size)
        cx1, cy1 = _centroid(seq.frames[t + 1], cfg.cell_size)
        assert cx1 - cx0 == pytest.approx(vx * cfg.dt, abs=0.12)
        assert cy1 - cy0 == pytest.approx(vy * cfg.dt, abs=0.12)


def test_pulsing_blob_total_intensity_oscillates():
    cfg = SynthConfig(
        side=32, frames=12, n_static=0, n_drifting=0, n_pulsing=1,
        period_range=(6.0, 6.0), depth_range=(0.6, 0.6),
    )
    seq = synth_sequence(cfg, seed=2)
    totals = seq.frames.sum(axis=(1, 2))
    assert totals.max() > 1.2 * totals.min() > 0.0
