"""Gated recurrent unit over flattened frame features, with hand backprop.

Gate convention (note the update gate weights the *previous* state):

    r_t = sigmoid(W_r x_t + U_r h_{t-1})
    g_t = tanh(W_g x_t + U_g (r_t * h_{t-1}))
    z_t = sigmoid(W_z x_t + U_z h_{t-1})
    h_t = z_t * h_{t-1} + (1 - z_t) * g_t

so each component of h_t is a convex combination of the previous state
and the candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _sigmoid(a: np.ndarray) -> np.ndarray:
    # tanh form is stable for large |a|
    return 0.5 * (1.0 + np.tanh(0.5 * a))


@dataclass
class GruState:
    """Hidden state carried between steps."""

    h: np.ndarray


@dataclass
class GruStepCache:
    x: np.ndarray
    h_prev: np.ndarray
    r: np.ndarray
    z: np.ndarray
    g: np.ndarray


def gru_step(x, state, weights):
    """One recurrence step; returns (new_state, cache for backprop)."""
    h_prev = state.h
    r = _sigmoid(weights.w_r @ x + weights.u_r @ h_prev)
    g = np.tanh(weights.w_g @ x + weights.u_g @ (r * h_prev))
    z = _sigmoid(weights.w_z @ x + weights.u_z @ h_prev)
    h = z * h_prev + (1.0 - z) * g
    return GruState(h), GruStepCache(x, h_prev, r, z, g)


def gru_sequence(xs, weights, hidden):
    """Run the recurrence from a zero state over ``xs``.

    Returns the final state and the list of per-step caches.
    """
    state = GruState(np.zeros(hidden, dtype=np.float64))
    caches = []
    for x in xs:
        state, cache = gru_step(x, state, weights)
        caches.append(cache)
    return state, caches


def gru_step_backward(d_h, cache, weights, grads):
    """Backprop one step.

    ``d_h`` is the loss gradient at h_t; gate-weight gradients are
    accumulated into ``grads`` (same attribute layout as the weights).
    Returns (d_x, d_h_prev).
    """
    x, h_prev, r, z, g = cache.x, cache.h_prev, cache.r, cache.z, cache.g

    d_z = d_h * (h_prev - g)
    d_g = d_h * (1.0 - z)
    d_h_prev = d_h * z

    d_ag = d_g * (1.0 - g * g)
    grads.w_g += np.outer(d_ag, x)
    grads.u_g += np.outer(d_ag, r * h_prev)
    d_rh = weights.u_g.T @ d_ag
    d_r = d_rh * h_prev
    d_h_prev += d_rh * r

    d_ar = d_r * r * (1.0 - r)
    grads.w_r += np.outer(d_ar, x)
    grads.u_r += np.outer(d_ar, h_prev)
    d_h_prev += weights.u_r.T @ d_ar

    d_az = d_z * z * (1.0 - z)
    grads.w_z += np.outer(d_az, x)
    grads.u_z += np.outer(d_az, h_prev)
    d_h_prev += weights.u_z.T @ d_az

    d_x = weights.w_r.T @ d_ar + weights.w_z.T @ d_az + weights.w_g.T @ d_ag
    return d_x, d_h_prev
