"""Array-op primitives against explicit-summation oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavlc.predictor.ops import (
    conv_full,
    corr_valid,
    maxpool_backward,
    maxpool_forward,
    unpool,
    unpool_backward,
)


def brute_corr_valid(maps, kernels):
    m_out, k_in, s, _ = kernels.shape
    _, h, w = maps.shape
    out = np.zeros((m_out, h - s + 1, w - s + 1))
    for m in range(m_out):
        for a in range(h - s + 1):
            for b in range(w - s + 1):
                acc = 0.0
                for k in range(k_in):
                    for p in range(s):
                        for q in range(s):
                            acc += maps[k, a + p, b + q] * kernels[m, k, p, q]
                out[m, a, b] = acc
    return out


def brute_conv_full(maps, kernels):
    m_out, k_in, s, _ = kernels.shape
    _, h, w = maps.shape
    out = np.zeros((m_out, h + s - 1, w + s - 1))
    for m in range(m_out):
        for a in range(h + s - 1):
            for b in range(w + s - 1):
                acc = 0.0
                for k in range(k_in):
                    for p in range(s):
                        for q in range(s):
                            ia, ib = a - p, b - q
                            if 0 <= ia < h and 0 <= ib < w:
                                acc += maps[k, ia, ib] * kernels[m, k, p, q]
                out[m, a, b] = acc
    return out


def test_corr_valid_matches_explicit_summation():
    rng = np.random.default_rng(1)
    maps = rng.normal(size=(2, 7, 7))
    kernels = rng.normal(size=(3, 2, 3, 3))
    np.testing.assert_allclose(
        corr_valid(maps, kernels), brute_corr_valid(maps, kernels), rtol=1e-12
    )


def test_corr_valid_single_map_frobenius():
    # A kernel equal to the patch gives the squared Frobenius norm at the
    # matching offset.
    patch = np.arange(9.0).reshape(1, 1, 3, 3)
    maps = np.zeros((1, 5, 5))
    maps[0, 1:4, 1:4] = patch[0, 0]
    out = corr_valid(maps, patch)
    assert out[0, 1, 1] == pytest.approx((patch**2).sum())


def test_conv_full_matches_explicit_summation():
    rng = np.random.default_rng(2)
    maps = rng.normal(size=(3, 4, 4))
    kernels = rng.normal(size=(2, 3, 5, 5))
    np.testing.assert_allclose(
        conv_full(maps, kernels), brute_conv_full(maps, kernels), rtol=1e-12
    )


def test_conv_and_full_conv_are_adjoint():
    # <corr_valid(A, W), B> == <A, conv_full(B, W^T)> for shared kernels.
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 8, 8))
    w = rng.normal(size=(4, 2, 3, 3))
    b = rng.normal(size=(4, 6, 6))
    lhs = float((corr_valid(a, w) * b).sum())
    rhs = float((a * conv_full(b, w.transpose(1, 0, 2, 3))).sum())
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_maxpool_matches_bruteforce_and_switch_semantics():
    rng = np.random.default_rng(4)
    maps = rng.normal(size=(3, 6, 6))
    pooled, switches = maxpool_forward(maps, 2)
    assert pooled.shape == (3, 3, 3)
    for k in range(3):
        for i in range(3):
            for j in range(3):
                window = maps[k, 2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
                assert pooled[k, i, j] == window.max()
                flat = window.ravel()
                assert switches[k, i, j] == flat.argmax()


def test_maxpool_tie_breaks_to_first_in_row_major_scan():
    maps = np.ones((1, 4, 4))
    _, switches = maxpool_forward(maps, 2)
    assert np.all(switches == 0)
    maps = np.zeros((1, 2, 2))
    maps[0, 1, 0] = 5.0
    maps[0, 1, 1] = 5.0
    _, switches = maxpool_forward(maps, 2)
    assert switches[0, 0, 0] == 2  # row-major offset of the first maximum


def test_unpool_inverts_pool_on_switch_cells():
    rng = np.random.default_rng(5)
    maps = rng.uniform(0.1, 1.0, size=(2, 6, 6))
    pooled, switches = maxpool_forward(maps, 3)
    full = unpool(pooled, switches, 3)
    assert full.shape == maps.shape
    # pooling the unpooled map recovers the pooled map (values positive)
    repooled, _ = maxpool_forward(full, 3)
    np.testing.assert_array_equal(repooled, pooled)
    # each window holds exactly one nonzero entry, at the switch offset
    for k in range(2):
        for i in range(2):
            for j in range(2):
                window = full[k, 3 * i : 3 * i + 3, 3 * j : 3 * j + 3].ravel()
                nz = np.flatnonzero(window)
                assert list(nz) == [switches[k, i, j]]
                assert window[nz[0]] == pooled[k, i, j]


def test_unpool_and_its_backward_are_adjoint():
    rng = np.random.default_rng(6)
    pooled = rng.normal(size=(2, 3, 3))
    _, switches = maxpool_forward(rng.normal(size=(2, 6, 6)), 2)
    d_full = rng.normal(size=(2, 6, 6))
    lhs = float((unpool(pooled, switches, 2) * d_full).sum())
    rhs = float((pooled * unpool_backward(d_full, switches, 2)).sum())
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_maxpool_backward_routes_to_winners():
    maps = np.array([[[1.0, 2.0], [3.0, 0.0]]])
    pooled, switches = maxpool_forward(maps, 2)
    d = maxpool_backward(np.array([[[7.0]]]), switches, 2)
    np.testing.assert_array_equal(d, [[[0.0, 0.0], [7.0, 0.0]]])


@settings(max_examples=20)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=2, max_value=3))
def test_conv_shapes_general(channels, s):
    rng = np.random.default_rng(7)
    maps = rng.normal(size=(channels, 9, 9))
    kernels = rng.normal(size=(2, channels, s, s))
    assert corr_valid(maps, kernels).shape == (2, 10 - s, 10 - s)
    assert conv_full(maps, kernels).shape == (2, 8 + s, 8 + s)
