"""UAV-mounted visible-light access: channel model, grid forecasting,
fleet deployment, and the experiment harness tying them together."""

from . import channel, grids, harness, optimizer, predictor
from .channel import UavPose, User, VlcParams
from .grids import GridSequence, IlluminationGrid, SynthConfig
from .optimizer import Scenario, SolverOptions, optimize
from .predictor import PredictorConfig

__all__ = [
    "channel",
    "grids",
    "predictor",
    "optimizer",
    "harness",
    "VlcParams",
    "User",
    "UavPose",
    "IlluminationGrid",
    "GridSequence",
    "SynthConfig",
    "PredictorConfig",
    "Scenario",
    "SolverOptions",
    "optimize",
]
