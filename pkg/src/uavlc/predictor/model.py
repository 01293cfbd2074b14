"""End-to-end frame forecaster: encode, recur, decode, and its gradients.

The encoder turns each input frame into a flat feature vector while
recording max-pool switches; a GRU consumes the T feature vectors; the
final hidden state is projected to a predicted feature vector, which the
decoder maps back to a frame by unpooling with the switches of the *last
input frame* and applying full convolutions.  Switches are treated as
constants of the forward pass when differentiating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PredictorConfig
from .gru import gru_sequence, gru_step_backward
from .ops import (
    conv_backward,
    conv_forward,
    deconv_backward,
    deconv_forward,
    maxpool_backward,
    maxpool_forward,
    relu_grad,
    unpool,
    unpool_backward,
)
from .weights import PredictorWeights, zero_weights


@dataclass
class EncodeTrace:
    """Everything the encoder saw: per-layer maps, switches, features."""

    inputs: list
    pre: list
    pooled: list
    switches: list
    x: np.ndarray


@dataclass
class DecodeCache:
    inputs: list
    unpooled: list
    pres: list


def encode(frame, weights: PredictorWeights, config: PredictorConfig) -> EncodeTrace:
    """Convolve/pool one frame down to the flat feature vector."""
    maps = np.asarray(frame, dtype=np.float64)
    if maps.shape != (config.grid_side, config.grid_side):
        raise ValueError(f"frame shape {maps.shape}, expected {(config.grid_side,) * 2}")
    maps = maps[None]
    inputs, pres, pooleds, switches = [], [], [], []
    for layer in range(config.layers):
        inputs.append(maps)
        act, pre = conv_forward(maps, weights.conv_w[layer], weights.conv_b[layer])
        pooled, sw = maxpool_forward(act, config.pool)
        pres.append(pre)
        pooleds.append(pooled)
        switches.append(sw)
        maps = pooled
    return EncodeTrace(inputs, pres, pooleds, switches, maps.ravel().copy())


def encode_backward(d_x, trace: EncodeTrace, weights, config, grads) -> None:
    """Accumulate conv gradients for one frame given the feature gradient."""
    d_maps = d_x.reshape(trace.pooled[-1].shape)
    for layer in reversed(range(config.layers)):
        d_act = maxpool_backward(d_maps, trace.switches[layer], config.pool)
        d_pre = d_act * relu_grad(trace.pre[layer])
        d_maps, d_w, d_b = conv_backward(d_pre, trace.inputs[layer], weights.conv_w[layer])
        grads.conv_w[layer] += d_w
        grads.conv_b[layer] += d_b


def decode(x, switches, weights: PredictorWeights, config: PredictorConfig):
    """Map a feature vector back to a frame using recorded switches.

    ``switches`` is the per-layer switch list of the frame whose pooling
    layout the reconstruction should follow.  Returns (frame, cache).
    """
    side = config.pooled_sizes()[-1]
    maps = np.asarray(x, dtype=np.float64).reshape(config.feature_maps[-1], side, side)
    inputs, unpooled, pres = [], [], []
    for stage in range(config.layers):
        layer = config.layers - 1 - stage
        inputs.append(maps)
        up = unpool(maps, switches[layer], config.pool)
        act, pre = deconv_forward(up, weights.deconv_w[stage], weights.deconv_b[stage])
        unpooled.append(up)
        pres.append(pre)
        maps = act
    return maps[0], DecodeCache(inputs, unpooled, pres)


def decode_backward(d_frame, cache: DecodeCache, switches, weights, config, grads):
    """Backprop the decoder; returns the gradient at the feature vector."""
    d_maps = np.asarray(d_frame)[None]
    for stage in reversed(range(config.layers)):
        layer = config.layers - 1 - stage
        d_pre = d_maps * relu_grad(cache.pres[stage])
        d_up, d_w, d_b = deconv_backward(d_pre, cache.unpooled[stage], weights.deconv_w[stage])
        grads.deconv_w[stage] += d_w
        grads.deconv_b[stage] += d_b
        d_maps = unpool_backward(d_up, switches[layer], config.pool)
    return d_maps.ravel()


def predict_features(xs, weights: PredictorWeights, config: PredictorConfig) -> np.ndarray:
    """Advance the feature sequence one step: project the final GRU state."""
    state, _ = gru_sequence(xs, weights, config.hidden)
    return weights.w_o @ state.h


def predict_next(frames, weights: PredictorWeights, config: PredictorConfig) -> np.ndarray:
    """Predict the frame following ``frames`` (an iterable of 2-D arrays)."""
    traces = [encode(f, weights, config) for f in frames]
    if not traces:
        raise ValueError("need at least one input frame")
    x_next = predict_features([t.x for t in traces], weights, config)
    frame, _ = decode(x_next, traces[-1].switches, weights, config)
    return frame


def loss(pred, target, config: PredictorConfig) -> float:
    """Half mean squared error over the frame: sum((I - I~)^2) / (2 side^2)."""
    resid = np.asarray(pred) - np.asarray(target)
    return float((resid * resid).sum() / (2.0 * config.grid_side**2))


def forward_backward(frames, target, weights, config, grads=None):
    """One window's loss and full analytic gradient.

    Runs the pipeline on ``frames`` against ``target`` and accumulates the
    gradient of every weight array into ``grads`` (allocated when None).
    Returns (loss_value, grads).
    """
    if grads is None:
        grads = zero_weights(config)
    traces = [encode(f, weights, config) for f in frames]
    xs = [t.x for t in traces]
    state, caches = gru_sequence(xs, weights, config.hidden)
    x_next = weights.w_o @ state.h
    pred, dcache = decode(x_next, traces[-1].switches, weights, config)

    resid = pred - np.asarray(target, dtype=np.float64)
    area = float(config.grid_side**2)
    loss_val = float((resid * resid).sum() / (2.0 * area))

    d_x_next = decode_backward(resid / area, dcache, traces[-1].switches, weights, config, grads)
    grads.w_o += np.outer(d_x_next, state.h)
    d_h = weights.w_o.T @ d_x_next
    d_xs = [None] * len(xs)
    for t in reversed(range(len(xs))):
        d_xs[t], d_h = gru_step_backward(d_h, caches[t], weights, grads)
    for t, trace in enumerate(traces):
        encode_backward(d_xs[t], trace, weights, config, grads)
    return loss_val, grads
