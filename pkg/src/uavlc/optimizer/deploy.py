"""Alternating placement/association deployment plus reference baselines."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .association import association_solve
from .placement import restore_separation, sca_placement
from .scenario import (
    Association,
    DeploymentSolution,
    DualState,
    Scenario,
    SolverOptions,
    poses_from,
)


def initial_association(scenario: Scenario, seed: int) -> Association:
    """Nearest-seed k-partition, seeds by farthest-point traversal of users."""
    rng = np.random.default_rng(seed)
    xy = scenario.user_xy
    n_users, fleet = len(xy), scenario.fleet_size
    seeds = [int(rng.integers(n_users))]
    min_d = ((xy - xy[seeds[0]]) ** 2).sum(axis=1)
    while len(seeds) < min(fleet, n_users):
        nxt = int(np.argmax(min_d))
        seeds.append(nxt)
        min_d = np.minimum(min_d, ((xy - xy[nxt]) ** 2).sum(axis=1))
    anchors = xy[seeds]
    gap = xy[:, None, :] - anchors[None, :, :]
    assign = np.argmin((gap * gap).sum(axis=2), axis=1)
    return Association(assign)


def initial_positions(scenario: Scenario, association: Association) -> np.ndarray:
    """Cluster centroids; UAVs without users spread on a ring at the centre."""
    width, height = scenario.area
    centre = np.array([width / 2.0, height / 2.0])
    positions = np.empty((scenario.fleet_size, 2))
    radius = max(min(width, height) / 8.0, np.sqrt(scenario.params.d_min))
    for i in range(scenario.fleet_size):
        mask = association.assign == i
        if mask.any():
            positions[i] = scenario.user_xy[mask].mean(axis=0)
        else:
            angle = 2.0 * np.pi * i / scenario.fleet_size
            positions[i] = centre + radius * np.array([np.cos(angle), np.sin(angle)])
    return positions


def _better(candidate: float, incumbent: float) -> bool:
    return candidate < incumbent * (1.0 - 1e-15)


def optimize(scenario: Scenario, options: SolverOptions | None = None) -> DeploymentSolution:
    """Best-of-``n_starts`` alternating placement/association descents.

    The alternation converges to a joint local optimum, and which one
    depends on the initial partition, so the solver restarts it from
    ``n_starts`` distinct seeded partitions and keeps the lowest-power
    result.  The first start replicates the fixed-association baseline's
    initial state exactly, and every run also scores the center and
    association-only baseline candidates, so the returned power never
    exceeds any baseline's.
    """
    options = options or SolverOptions()
    best = None
    for k in range(max(options.n_starts, 1)):
        start = replace(options, seed=options.seed + k)
        candidate = _optimize_from(scenario, start)
        if best is None or candidate.total_power < best.total_power:
            best = candidate
    return best


def _optimize_from(scenario: Scenario, options: SolverOptions) -> DeploymentSolution:
    """One alternation descent; association changes accepted only downhill."""
    scenario.check_capacity()
    association = initial_association(scenario, options.seed)
    positions = initial_positions(scenario, association)
    if options.enforce_separation and scenario.fleet_size > 1:
        positions = restore_separation(
            positions, np.zeros(scenario.fleet_size, dtype=bool), scenario.params.d_min
        )
    dual = DualState.fresh(scenario.fleet_size, scenario.n_users, options)

    obj = scenario.total_power(positions, association)
    trace = [obj]
    converged = False
    outer = 0
    for outer in range(1, options.outer_cap + 1):
        positions, _ = sca_placement(scenario, association, positions, options, dual)
        placed_obj = scenario.total_power(positions, association)

        candidate, _ = association_solve(scenario, positions, dual, options)
        cand_obj = scenario.total_power(positions, candidate)
        if cand_obj <= placed_obj:
            association, new_obj = candidate, cand_obj
        else:
            new_obj = placed_obj

        trace.append(new_obj)
        if obj - new_obj <= options.outer_tol * max(obj, 1e-300):
            obj = new_obj
            converged = True
            break
        obj = new_obj

    best = None
    for rival in (baseline_center(scenario, options),
                  baseline_association_only(scenario, options)):
        if _better(rival.total_power, obj) and (best is None or rival.total_power < best.total_power):
            best = rival
    if best is not None:
        return DeploymentSolution(
            poses=best.poses,
            association=best.association,
            total_power=best.total_power,
            trace=trace + [best.total_power],
            dual=dual,
            converged=converged,
            iterations=outer,
        )

    powers = scenario.uav_powers(positions, association)
    return DeploymentSolution(
        poses=poses_from(positions, powers, scenario.params),
        association=association,
        total_power=float(powers.sum()),
        trace=trace,
        dual=dual,
        converged=converged,
        iterations=outer,
    )


def _center_positions(scenario: Scenario) -> np.ndarray:
    """Symmetric pattern about the area centre honouring the separation floor."""
    width, height = scenario.area
    centre = np.array([width / 2.0, height / 2.0])
    fleet = scenario.fleet_size
    if fleet == 1:
        return centre[None, :]
    ring = np.sqrt(scenario.params.d_min) / (2.0 * np.sin(np.pi / fleet))
    radius = max(min(width, height) / 6.0, ring * (1.0 + 1e-9))
    angles = 2.0 * np.pi * np.arange(fleet) / fleet
    return centre[None, :] + radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _nearest_association(scenario: Scenario, positions: np.ndarray) -> Association:
    gap = positions[:, None, :] - scenario.user_xy[None, :, :]
    return Association(np.argmin((gap * gap).sum(axis=2), axis=0))


def baseline_center(scenario: Scenario, options: SolverOptions | None = None) -> DeploymentSolution:
    """No optimization: centre-pattern poses, nearest association, max rule."""
    options = options or SolverOptions()
    positions = _center_positions(scenario)
    association = _nearest_association(scenario, positions)
    powers = scenario.uav_powers(positions, association)
    total = float(powers.sum())
    return DeploymentSolution(
        poses=poses_from(positions, powers, scenario.params),
        association=association,
        total_power=total,
        trace=[total],
        dual=DualState.fresh(scenario.fleet_size, scenario.n_users, options),
        converged=True,
        iterations=0,
    )


def baseline_fixed_association(
    scenario: Scenario, options: SolverOptions | None = None
) -> DeploymentSolution:
    """Placement only: the seeded initial association is never revisited."""
    options = options or SolverOptions()
    scenario.check_capacity()
    association = initial_association(scenario, options.seed)
    positions = initial_positions(scenario, association)
    if options.enforce_separation and scenario.fleet_size > 1:
        positions = restore_separation(
            positions, np.zeros(scenario.fleet_size, dtype=bool), scenario.params.d_min
        )
    dual = DualState.fresh(scenario.fleet_size, scenario.n_users, options)
    positions, trace = sca_placement(scenario, association, positions, options, dual)
    powers = scenario.uav_powers(positions, association)
    return DeploymentSolution(
        poses=poses_from(positions, powers, scenario.params),
        association=association,
        total_power=float(powers.sum()),
        trace=trace,
        dual=dual,
        converged=True,
        iterations=len(trace) - 1,
    )


def baseline_association_only(
    scenario: Scenario, options: SolverOptions | None = None
) -> DeploymentSolution:
    """Association only: centre-pattern poses held fixed, assignment solved."""
    options = options or SolverOptions()
    positions = _center_positions(scenario)
    dual = DualState.fresh(scenario.fleet_size, scenario.n_users, options)
    association, powers = association_solve(scenario, positions, dual, options)
    total = float(powers.sum())
    return DeploymentSolution(
        poses=poses_from(positions, powers, scenario.params),
        association=association,
        total_power=total,
        trace=[total],
        dual=dual,
        converged=True,
        iterations=0,
    )
