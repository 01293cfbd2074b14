"""Forecaster weights: initialisation, canonical ordering, checkpoints.

The checkpoint file is versioned ASCII::

    PREDWEIGHTS v1
    <key>=<value> ... (full architecture echo on one line)
    <array name> <dim0> <dim1> ...
    <values, space separated, 17 significant digits>
    ... (arrays in the canonical order of named_arrays)

Loading verifies the magic line, rebuilds the config from the echo, checks
every array against its declared shape, and (optionally) rejects the file
if the stored config differs from the one the caller expects.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .config import PredictorConfig


class CheckpointError(ValueError):
    """Base class for weight-file problems."""


class CheckpointFormatError(CheckpointError):
    """The file is not a readable PREDWEIGHTS v1 checkpoint."""


class CheckpointMismatchError(CheckpointError):
    """The stored architecture differs from the expected one."""


@dataclass
class PredictorWeights:
    """All trainable arrays of the encoder, recurrence and decoder."""

    conv_w: list  # per layer: (K_l, K_{l-1}, S, S)
    conv_b: list  # per layer: (K_l,)
    w_r: np.ndarray
    u_r: np.ndarray
    w_z: np.ndarray
    u_z: np.ndarray
    w_g: np.ndarray
    u_g: np.ndarray
    w_o: np.ndarray
    deconv_w: list  # per decode stage: (K_out, K_in, S, S)
    deconv_b: list  # per decode stage: (K_out,)


def _shapes(config: PredictorConfig):
    s = config.kernel
    maps = (1,) + tuple(config.feature_maps)
    n = config.feature_len()
    dh = config.hidden
    conv = [((maps[l + 1], maps[l], s, s), (maps[l + 1],)) for l in range(config.layers)]
    gru = [
        ("w_r", (dh, n)), ("u_r", (dh, dh)),
        ("w_z", (dh, n)), ("u_z", (dh, dh)),
        ("w_g", (dh, n)), ("u_g", (dh, dh)),
        ("w_o", (n, dh)),
    ]
    # decode stage i consumes maps[L-i] channels and emits maps[L-i-1]
    dec = [
        ((maps[config.layers - i - 1], maps[config.layers - i], s, s),
         (maps[config.layers - i - 1],))
        for i in range(config.layers)
    ]
    return conv, gru, dec


def init_weights(config: PredictorConfig, seed: int) -> PredictorWeights:
    """Uniform(-init_scale, init_scale) weights, zero biases, fixed draw order.

    Biases start at zero: a negative output-layer bias larger than the
    (initially tiny) deconvolution term would clamp the whole predicted
    frame at the rectifier and no gradient could ever flow back.
    """
    rng = np.random.default_rng(seed)
    a = config.init_scale
    conv, gru, dec = _shapes(config)

    def draw(shape):
        return rng.uniform(-a, a, size=shape)

    conv_w, conv_b = [], []
    for wsh, bsh in conv:
        conv_w.append(draw(wsh))
        conv_b.append(np.zeros(bsh))
    gru_arrays = {name: draw(shape) for name, shape in gru}
    deconv_w, deconv_b = [], []
    for wsh, bsh in dec:
        deconv_w.append(draw(wsh))
        deconv_b.append(np.zeros(bsh))
    return PredictorWeights(conv_w=conv_w, conv_b=conv_b, deconv_w=deconv_w,
                            deconv_b=deconv_b, **gru_arrays)


def zero_weights(config: PredictorConfig) -> PredictorWeights:
    """Zero arrays with the right shapes (gradient accumulators)."""
    conv, gru, dec = _shapes(config)
    return PredictorWeights(
        conv_w=[np.zeros(w) for w, _ in conv],
        conv_b=[np.zeros(b) for _, b in conv],
        deconv_w=[np.zeros(w) for w, _ in dec],
        deconv_b=[np.zeros(b) for _, b in dec],
        **{name: np.zeros(shape) for name, shape in gru},
    )


def named_arrays(weights: PredictorWeights):
    """Canonical (name, array) sequence: conv, recurrence, output, deconv."""
    out = []
    for i, (w, b) in enumerate(zip(weights.conv_w, weights.conv_b)):
        out.append((f"conv_w{i}", w))
        out.append((f"conv_b{i}", b))
    for name in ("w_r", "u_r", "w_z", "u_z", "w_g", "u_g", "w_o"):
        out.append((name, getattr(weights, name)))
    for i, (w, b) in enumerate(zip(weights.deconv_w, weights.deconv_b)):
        out.append((f"deconv_w{i}", w))
        out.append((f"deconv_b{i}", b))
    return out


def axpy(weights: PredictorWeights, grads: PredictorWeights, alpha: float) -> None:
    """In-place ``weights += alpha * grads`` over every array."""
    for (_, w), (_, g) in zip(named_arrays(weights), named_arrays(grads)):
        w += alpha * g


def scale(weights: PredictorWeights, factor: float) -> None:
    """In-place multiply of every array."""
    for _, w in named_arrays(weights):
        w *= factor


_MAGIC = "PREDWEIGHTS"
_VERSION = "v1"
_INT_FIELDS = {"grid_side", "layers", "kernel", "pool", "hidden", "seq_len", "epochs"}


def _config_line(config: PredictorConfig) -> str:
    parts = []
    for f in fields(config):
        v = getattr(config, f.name)
        if f.name == "feature_maps":
            parts.append(f"feature_maps={','.join(str(int(x)) for x in v)}")
        elif f.name in _INT_FIELDS:
            parts.append(f"{f.name}={int(v)}")
        else:
            parts.append(f"{f.name}={v:.17g}")
    return " ".join(parts)


def _parse_config_line(line: str) -> PredictorConfig:
    kwargs = {}
    for token in line.split():
        if "=" not in token:
            raise CheckpointFormatError(f"bad config token {token!r}")
        key, val = token.split("=", 1)
        try:
            if key == "feature_maps":
                kwargs[key] = tuple(int(x) for x in val.split(","))
            elif key in _INT_FIELDS:
                kwargs[key] = int(val)
            else:
                kwargs[key] = float(val)
        except ValueError as exc:
            raise CheckpointFormatError(f"bad config value {token!r}") from exc
    try:
        return PredictorConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise CheckpointFormatError(f"invalid stored config: {exc}") from exc


def save_checkpoint(path, config: PredictorConfig, weights: PredictorWeights) -> None:
    lines = [f"{_MAGIC} {_VERSION}", _config_line(config)]
    for name, arr in named_arrays(weights):
        lines.append(name + " " + " ".join(str(d) for d in arr.shape))
        lines.append(" ".join(f"{v:.17g}" for v in arr.ravel()))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_checkpoint(path, expect: PredictorConfig | None = None):
    """Read a checkpoint; returns (config, weights).

    Raises :class:`CheckpointMismatchError` when ``expect`` is given and
    differs from the stored architecture.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0].split() != [_MAGIC, _VERSION]:
        raise CheckpointFormatError("not a PREDWEIGHTS v1 file")
    if len(lines) < 2:
        raise CheckpointFormatError("missing config line")
    config = _parse_config_line(lines[1])
    if expect is not None and config != expect:
        raise CheckpointMismatchError(
            f"checkpoint architecture {config} differs from expected {expect}"
        )
    weights = zero_weights(config)
    cursor = 2
    for name, arr in named_arrays(weights):
        if cursor + 1 >= len(lines):
            raise CheckpointFormatError(f"file ends before array {name!r}")
        head = lines[cursor].split()
        if not head or head[0] != name:
            raise CheckpointFormatError(
                f"expected array {name!r}, found {lines[cursor]!r}"
            )
        try:
            shape = tuple(int(x) for x in head[1:])
        except ValueError as exc:
            raise CheckpointFormatError(f"bad shape for {name!r}") from exc
        if shape != arr.shape:
            raise CheckpointFormatError(
                f"array {name!r}: stored shape {shape}, expected {arr.shape}"
            )
        try:
            vals = np.array(lines[cursor + 1].split(), dtype=np.float64)
        except ValueError as exc:
            raise CheckpointFormatError(f"array {name!r}: bad values") from exc
        if vals.size != arr.size:
            raise CheckpointFormatError(
                f"array {name!r}: {vals.size} values for shape {shape}"
            )
        arr[...] = vals.reshape(arr.shape)
        cursor += 2
    return config, weights
