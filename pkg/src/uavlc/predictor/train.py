"""Full-batch gradient-descent training of the forecaster."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import PredictorConfig
from .model import forward_backward
from .weights import PredictorWeights, axpy, init_weights, zero_weights


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass
class TrainResult:
    weights: PredictorWeights
    losses: list


def training_windows(dataset, seq_len: int):
    """Slice every sequence into (inputs, target) windows of length seq_len+1."""
    windows = []
    for seq in dataset:
        frames = np.asarray(getattr(seq, "frames", seq), dtype=np.float64)
        for ofs in range(frames.shape[0] - seq_len):
            windows.append((frames[ofs : ofs + seq_len], frames[ofs + seq_len]))
    if not windows:
        raise ValueError(f"no training windows: need sequences longer than {seq_len} frames")
    return windows


def train(dataset, config: PredictorConfig, seed: int) -> TrainResult:
    """Plain full-batch gradient descent from a seeded uniform init.

    The per-epoch trace records the mean window loss at the weights the
    epoch started from.  A non-finite loss aborts with
    :class:`DivergenceError` carrying the trace so far.
    """
    weights = init_weights(config, seed)
    windows = training_windows(dataset, config.seq_len)
    losses = []
    for epoch in range(config.epochs):
        grads = zero_weights(config)
        total = 0.0
        for frames, target in windows:
            value, _ = forward_backward(frames, target, weights, config, grads)
            total += value
        mean_loss = total / len(windows)
        if not math.isfinite(mean_loss):
            raise DivergenceError(
                f"non-finite loss at epoch {epoch} (trace: {losses[-3:]}); "
                "reduce learn_rate"
            )
        losses.append(mean_loss)
        axpy(weights, grads, -config.learn_rate / len(windows))
    return TrainResult(weights, losses)
