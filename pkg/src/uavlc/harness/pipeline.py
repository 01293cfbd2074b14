"""Experiment pipeline: grids in, forecasts, deployments, metric rows out.

One run takes a grid sequence (loaded or synthesized), holds out its final
frame as the truth, forecasts that frame from the preceding ones, deploys
the fleet against each configured planning signal, and scores every
deployment against the truth.  Deployments planned on a forecast keep
their planned transmit powers but are topped up wherever the true demand
turned out higher, so reported scored powers are always feasible on the
grid they are scored against; planned and scored totals are both kept.

Variants:

``proposed``        deploy on the forecast frame
``actual-illum``    deploy on the true frame (hindsight reference)
``persistence``     deploy on the last observed frame
``center``          ring-of-centers placement, nearest association
``assoc-only``      ring placement, optimized association
``placement-only``  seeded association kept fixed, optimized placement
``exhaustive``      lattice-enumeration oracle (tiny instances only)

The last five plan directly on the true frame: they are deployment
baselines, not forecasting schemes.  Errors raised anywhere get a
``pipeline_stage`` attribute naming the stage that failed.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from ..channel import User, illumination_power, required_power
from ..grids import GridSequence, IlluminationGrid, load_grid_sequence, synth_sequence
from ..optimizer import (
    DeploymentSolution,
    Scenario,
    baseline_association_only,
    baseline_center,
    baseline_fixed_association,
    exhaustive_oracle,
    optimize,
    poses_from,
)
from ..predictor import load_checkpoint, predict_next, train
from .config import ConfigError, ExperimentConfig

# Disjoint seed substreams derived from the one master seed.
_USER_SEED = 7919
_WEIGHT_SEED = 104_729

SWEEP_VARIABLES = ("users", "height", "seq_len")


@dataclass
class MetricsRow:
    """One deployment variant's outcome in one experiment run.

    ``power_planned`` is the transmit-power total on the grid the variant
    planned against; ``power_scored`` is the total after topping powers up
    to feasibility on the true grid.  ``mse`` is the forecast error of the
    planning frame against the truth (zero for variants that plan on the
    truth itself).  ``wall_time`` is informational and never serialized.
    """

    experiment_id: str
    variant: str
    sweep_var: str
    sweep_value: float
    power_planned: float
    power_scored: float
    mse: float
    outer_iterations: int
    wall_time: float = 0.0
    status: str = "ok"

    def __post_init__(self):
        if self.status == "ok":
            if self.power_planned < 0.0 or self.power_scored < 0.0:
                raise ValueError("powers must be nonnegative")
            if self.mse < 0.0:
                raise ValueError("mse must be nonnegative")


@contextmanager
def _stage(name: str):
    """Tag any escaping exception with the pipeline stage it came from."""
    try:
        yield
    except Exception as exc:
        if not hasattr(exc, "pipeline_stage"):
            exc.pipeline_stage = name
        raise


def _mse(a: np.ndarray, b: np.ndarray) -> float:
    resid = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.mean(resid * resid))


def _load_sequence(config: ExperimentConfig) -> GridSequence:
    if config.grid_file:
        seq = load_grid_sequence(config.grid_file)
        if seq.side != config.grid_side:
            raise ConfigError(
                f"grid file side {seq.side} does not match configured side {config.grid_side}"
            )
    else:
        seq = synth_sequence(config.synth_config(), config.seed)
    if len(seq) < config.seq_len + 2:
        raise ConfigError(
            f"need at least seq_len + 2 = {config.seq_len + 2} frames "
            f"(history windows plus a held-out truth), got {len(seq)}"
        )
    return seq


def _watts_grid(frame: np.ndarray, config: ExperimentConfig, cell_size: float) -> IlluminationGrid:
    grid = IlluminationGrid(frame * config.illum_scale, cell_size)
    if grid.extent < max(config.area_x, config.area_y):
        raise ConfigError(
            f"grid footprint {grid.extent} m does not cover the "
            f"{config.area_x} x {config.area_y} m service area"
        )
    return grid


def _draw_users(config: ExperimentConfig) -> list:
    rng = np.random.default_rng(config.seed + _USER_SEED)
    return [
        User(x=float(rng.uniform(0.0, config.area_x)),
             y=float(rng.uniform(0.0, config.area_y)),
             rate=float(rng.uniform(config.rate_min, config.rate_max)))
        for _ in range(config.users)
    ]


def _forecaster_weights(config: ExperimentConfig, history: np.ndarray, cache):
    """Train (or load) the forecaster for this run; sweeps share a cache."""
    pconfig = config.predictor_config()
    if config.checkpoint:
        _, weights = load_checkpoint(config.checkpoint, expect=pconfig)
        return weights, pconfig
    key = (pconfig, history.tobytes())
    if cache is not None and key in cache:
        return cache[key], pconfig
    result = train([history], pconfig, config.seed + _WEIGHT_SEED)
    if cache is not None:
        cache[key] = result.weights
    return result.weights, pconfig


def _scenario(config: ExperimentConfig, users, grid: IlluminationGrid) -> Scenario:
    return Scenario(users=users, fleet_size=config.fleet,
                    area=(config.area_x, config.area_y),
                    params=config.vlc_params(), grid=grid)


def _plan(variant: str, scenarios: dict, config: ExperimentConfig) -> DeploymentSolution:
    options = config.solver_options()
    truth = scenarios["actual"]
    if variant == "proposed":
        return optimize(scenarios["predicted"], options)
    if variant == "actual-illum":
        return optimize(truth, options)
    if variant == "persistence":
        return optimize(scenarios["persistence"], options)
    if variant == "center":
        return baseline_center(truth, options)
    if variant == "assoc-only":
        return baseline_association_only(truth, options)
    if variant == "placement-only":
        return baseline_fixed_association(truth, options)
    if variant == "exhaustive":
        try:
            return exhaustive_oracle(truth, config.resolution, options)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown variant {variant!r}")


def _score_on_truth(solution: DeploymentSolution, truth: Scenario):
    """Top planned powers up to feasibility on the true grid.

    Returns (planned_total, scored_total).  The scored poses are
    re-validated against the per-user channel requirements as a second,
    independently derived route to the same feasibility condition.
    """
    positions = solution.positions
    planned = solution.powers
    needed = truth.uav_powers(positions, solution.association)
    scored = np.maximum(planned, needed)

    poses = poses_from(positions, scored, truth.params)
    for j, user in enumerate(truth.users):
        pose = poses[solution.association.assign[j]]
        need = max(required_power(user, pose, truth.ambient[j], truth.params),
                   illumination_power(user, pose, truth.ambient[j], truth.params))
        if pose.power < need * (1.0 - 1e-9):
            raise FloatingPointError(
                f"scored power {pose.power} below channel requirement {need} "
                f"for user {j}: demand bookkeeping is inconsistent"
            )
    return float(planned.sum()), float(scored.sum())


def run_pipeline(config: ExperimentConfig, sweep_var: str = "",
                 sweep_value: float = 0.0, train_cache=None) -> list:
    """One full experiment: returns one MetricsRow per configured variant."""
    with _stage("config"):
        variants = config.variant_list()
        experiment_id = f"s{config.seed}-u{config.users}-d{config.fleet}"

    with _stage("data"):
        seq = _load_sequence(config)
        history, actual = seq.frames[:-1], seq.frames[-1]

    mse_by_variant = {"persistence": _mse(history[-1], actual)}
    planning_frames = {"actual": actual, "persistence": history[-1]}
    if "proposed" in variants:
        with _stage("train"):
            weights, pconfig = _forecaster_weights(config, history, train_cache)
        with _stage("predict"):
            predicted = predict_next(history[-config.seq_len:], weights, pconfig)
            planning_frames["predicted"] = predicted
            mse_by_variant["proposed"] = _mse(predicted, actual)

    with _stage("scenario"):
        users = _draw_users(config)
        scenarios = {
            name: _scenario(config, users, _watts_grid(frame, config, seq.cell_size))
            for name, frame in planning_frames.items()
        }

    rows = []
    for variant in variants:
        with _stage(f"deploy:{variant}"):
            t0 = time.perf_counter()
            solution = _plan(variant, scenarios, config)
            planned, scored = _score_on_truth(solution, scenarios["actual"])
            rows.append(MetricsRow(
                experiment_id=experiment_id,
                variant=variant,
                sweep_var=sweep_var,
                sweep_value=float(sweep_value),
                power_planned=planned,
                power_scored=scored,
                mse=mse_by_variant.get(variant, 0.0),
                outer_iterations=solution.iterations,
                wall_time=time.perf_counter() - t0,
            ))
    return rows


def sweep(config: ExperimentConfig, variable: str, values) -> list:
    """Run the pipeline once per value of one experiment variable.

    A failing sweep point contributes a single flagged row (status carries
    the stage and message) and the sweep continues.  The forecaster is
    retrained only when a point changes its training inputs.
    """
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {variable!r}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")

    cast = float if variable == "height" else int
    cache = {}
    rows = []
    for value in values:
        point = replace(config, **{variable: cast(value)})
        try:
            rows.extend(run_pipeline(point, sweep_var=variable,
                                     sweep_value=float(value), train_cache=cache))
        except Exception as exc:
            stage = getattr(exc, "pipeline_stage", "unknown")
            rows.append(MetricsRow(
                experiment_id=f"s{point.seed}-u{point.users}-d{point.fleet}",
                variant="failed", sweep_var=variable, sweep_value=float(value),
                power_planned=0.0, power_scored=0.0, mse=0.0, outer_iterations=0,
                status=f"error at {stage}: {exc}",
            ))
    return rows
