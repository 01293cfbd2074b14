"""Convolution, pooling and their adjoints as plain numpy array ops.

All maps are ``(channels, h, w)`` float64 arrays and kernels are
``(out_channels, in_channels, S, S)``.  ``corr_valid`` is the sliding
inner product (no flipping); ``conv_full`` is its exact adjoint, so
``<corr_valid(a, w), b> == <a, conv_full(b, w_T)>`` with ``w_T`` the
kernel with its channel axes swapped.  Max-pooling records the row-major
in-window offset of each winner ("switches", first winner on ties);
unpooling scatters values back to those offsets.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_grad(pre: np.ndarray) -> np.ndarray:
    return (pre > 0.0).astype(np.float64)


def corr_valid(maps: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    """Valid cross-correlation: out[m] = sum_k maps[k] * kernels[m, k]."""
    s = kernels.shape[-1]
    win = sliding_window_view(maps, (s, s), axis=(1, 2))
    return np.einsum("kabpq,mkpq->mab", win, kernels, optimize=True)


def conv_full(maps: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    """Full convolution: out[m, a, b] = sum_{k,p,q} maps[k, a-p, b-q] kernels[m, k, p, q]."""
    s = kernels.shape[-1]
    pad = np.pad(maps, ((0, 0), (s - 1, s - 1), (s - 1, s - 1)))
    win = sliding_window_view(pad, (s, s), axis=(1, 2))
    return np.einsum("kabpq,mkpq->mab", win, kernels[:, :, ::-1, ::-1], optimize=True)


def conv_forward(maps, kernels, bias):
    """Valid convolution + bias + ReLU; returns (activated, pre_activation)."""
    pre = corr_valid(maps, kernels) + bias[:, None, None]
    return relu(pre), pre


def conv_backward(d_pre, maps, kernels):
    """Gradients of the valid-convolution linear part.

    Returns (d_maps, d_kernels, d_bias) given the gradient at the
    pre-activation.
    """
    d_maps = conv_full(d_pre, kernels.transpose(1, 0, 2, 3))
    out_side = d_pre.shape[-1]
    win = sliding_window_view(maps, (out_side, out_side), axis=(1, 2))
    # win: (K, S, S, out, out); dW[m,k,p,q] = sum_ab maps[k, p+a, q+b] d_pre[m, a, b]
    d_kernels = np.einsum("kpqab,mab->mkpq", win, d_pre, optimize=True)
    return d_maps, d_kernels, d_pre.sum(axis=(1, 2))


def deconv_forward(maps, kernels, bias):
    """Full convolution + bias + ReLU; returns (activated, pre_activation)."""
    pre = conv_full(maps, kernels) + bias[:, None, None]
    return relu(pre), pre


def deconv_backward(d_pre, maps, kernels):
    """Gradients of the full-convolution linear part."""
    d_maps = corr_valid(d_pre, kernels.transpose(1, 0, 2, 3))
    in_side = maps.shape[-1]
    win = sliding_window_view(d_pre, (in_side, in_side), axis=(1, 2))
    # win: (O, S, S, n, n); dW[o,i,p,q] = sum_ab d_pre[o, p+a, q+b] maps[i, a, b]
    d_kernels = np.einsum("opqab,iab->oipq", win, maps, optimize=True)
    return d_maps, d_kernels, d_pre.sum(axis=(1, 2))


def maxpool_forward(maps: np.ndarray, pool: int):
    """Non-overlapping max pool; returns (pooled, switches).

    ``switches[k, i, j]`` is the row-major offset (0..pool^2-1) of the
    winning cell inside window (i, j); the first maximum wins on ties.
    """
    k, h, w = maps.shape
    hp, wp = h // pool, w // pool
    win = (
        maps.reshape(k, hp, pool, wp, pool)
        .transpose(0, 1, 3, 2, 4)
        .reshape(k, hp, wp, pool * pool)
    )
    switches = win.argmax(axis=-1)
    pooled = np.take_along_axis(win, switches[..., None], axis=-1)[..., 0]
    return pooled, switches


def unpool(pooled: np.ndarray, switches: np.ndarray, pool: int) -> np.ndarray:
    """Scatter pooled values back to their recorded in-window offsets."""
    k, hp, wp = pooled.shape
    win = np.zeros((k, hp, wp, pool * pool), dtype=np.float64)
    np.put_along_axis(win, switches[..., None], pooled[..., None], axis=-1)
    return (
        win.reshape(k, hp, wp, pool, pool)
        .transpose(0, 1, 3, 2, 4)
        .reshape(k, hp * pool, wp * pool)
    )


def unpool_backward(d_full: np.ndarray, switches: np.ndarray, pool: int) -> np.ndarray:
    """Adjoint of :func:`unpool`: gather gradients from the switch cells."""
    k, h, w = d_full.shape
    hp, wp = h // pool, w // pool
    win = (
        d_full.reshape(k, hp, pool, wp, pool)
        .transpose(0, 1, 3, 2, 4)
        .reshape(k, hp, wp, pool * pool)
    )
    return np.take_along_axis(win, switches[..., None], axis=-1)[..., 0]


# maxpool and unpool are adjoint selections of each other: routing the
# downstream gradient back through a pool is exactly an unpool scatter.
maxpool_backward = unpool
