"""Training loop: window slicing, overfitting, monotonicity, determinism."""

import numpy as np
import pytest

from uavlc.grids import SynthConfig, synth_sequence
from uavlc.predictor import PredictorConfig, named_arrays
from uavlc.predictor.train import DivergenceError, train, training_windows


def drifting_sequence(seed=3):
    cfg = SynthConfig(side=8, frames=3, cell_size=2.5, n_static=1, n_drifting=1,
                      n_pulsing=0, sigma_range=(2.0, 4.0))
    return synth_sequence(cfg, seed=seed)


def small_config(**overrides):
    base = dict(grid_side=8, layers=1, kernel=3, pool=2, feature_maps=(4,),
                hidden=8, seq_len=2, learn_rate=2.0, epochs=600)
    base.update(overrides)
    return PredictorConfig(**base)


# ------------------------------------------------------------------- windows


def test_training_windows_cover_every_offset():
    frames = np.arange(5 * 4 * 4, dtype=float).reshape(5, 4, 4)
    windows = training_windows([frames], seq_len=2)
    assert len(windows) == 3
    for k, (inputs, target) in enumerate(windows):
        np.testing.assert_array_equal(inputs, frames[k : k + 2])
        np.testing.assert_array_equal(target, frames[k + 2])


def test_training_windows_pool_multiple_sequences():
    a = np.zeros((4, 4, 4))
    b = np.ones((6, 4, 4))
    windows = training_windows([a, b], seq_len=3)
    assert len(windows) == (4 - 3) + (6 - 3)


def test_training_windows_reject_too_short_sequences():
    with pytest.raises(ValueError, match="no training windows"):
        training_windows([np.zeros((2, 4, 4))], seq_len=2)


def test_training_windows_accept_grid_sequences():
    seq = drifting_sequence()
    windows = training_windows([seq], seq_len=2)
    assert len(windows) == seq.frames.shape[0] - 2


# ------------------------------------------------------------------ training


def test_overfit_single_window():
    cfg = small_config(feature_maps=(6,), hidden=12, epochs=1500)
    result = train([drifting_sequence()], cfg, seed=1)
    assert len(result.losses) == cfg.epochs
    assert result.losses[-1] < 1e-3 * result.losses[0]


def test_loss_trace_non_increasing_at_small_step():
    result = train([drifting_sequence()], small_config(), seed=1)
    worst = max(nxt - prev for prev, nxt in zip(result.losses, result.losses[1:]))
    assert worst <= 1e-12, f"loss uptick of {worst:.3e}"


def test_training_is_bit_deterministic():
    cfg = small_config(epochs=40)
    a = train([drifting_sequence()], cfg, seed=9)
    b = train([drifting_sequence()], cfg, seed=9)
    assert a.losses == b.losses
    for (name, wa), (_, wb) in zip(named_arrays(a.weights), named_arrays(b.weights)):
        np.testing.assert_array_equal(wa, wb, err_msg=name)


def test_different_seeds_give_different_weights():
    cfg = small_config(epochs=5)
    a = train([drifting_sequence()], cfg, seed=0)
    b = train([drifting_sequence()], cfg, seed=1)
    assert any(not np.array_equal(wa, wb)
               for (_, wa), (_, wb) in zip(named_arrays(a.weights), named_arrays(b.weights)))


def test_runaway_step_raises_divergence():
    cfg = small_config(learn_rate=5e4, epochs=300)
    with pytest.raises(DivergenceError):
        train([drifting_sequence()], cfg, seed=1)
