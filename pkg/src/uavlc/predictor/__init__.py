"""Convolutional-recurrent forecaster for illumination grids."""

from .config import PredictorConfig
from .gru import GruState, gru_sequence, gru_step
from .model import (
    EncodeTrace,
    decode,
    encode,
    forward_backward,
    loss,
    predict_features,
    predict_next,
)
from .ops import (
    conv_forward,
    conv_full,
    corr_valid,
    deconv_forward,
    maxpool_forward,
    unpool,
)
from .train import DivergenceError, TrainResult, train, training_windows
from .weights import (
    CheckpointError,
    CheckpointFormatError,
    CheckpointMismatchError,
    PredictorWeights,
    init_weights,
    load_checkpoint,
    named_arrays,
    save_checkpoint,
    zero_weights,
)

__all__ = [
    "PredictorConfig",
    "PredictorWeights",
    "GruState",
    "EncodeTrace",
    "TrainResult",
    "DivergenceError",
    "CheckpointError",
    "CheckpointFormatError",
    "CheckpointMismatchError",
    "encode",
    "decode",
    "predict_features",
    "predict_next",
    "forward_backward",
    "loss",
    "train",
    "training_windows",
    "gru_step",
    "gru_sequence",
    "conv_forward",
    "deconv_forward",
    "corr_valid",
    "conv_full",
    "maxpool_forward",
    "unpool",
    "init_weights",
    "zero_weights",
    "named_arrays",
    "save_checkpoint",
    "load_checkpoint",
]
