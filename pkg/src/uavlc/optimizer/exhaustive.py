"""Brute-force deployment oracle for tiny instances (test comparison only)."""

from __future__ import annotations

import numpy as np

from .scenario import Association, DeploymentSolution, DualState, Scenario, SolverOptions, poses_from


def exhaustive_oracle(
    scenario: Scenario,
    resolution: int = 15,
    options: SolverOptions | None = None,
) -> DeploymentSolution:
    """Exact minimum over a position lattice and every integral association.

    Candidate positions are the ``resolution`` x ``resolution`` lattice of
    the service area including its edges, so instances constructed on
    lattice nodes are scored exactly.  Guarded to at most two UAVs, six
    users and a 15x15 lattice; beyond that the sweep size explodes.
    """
    options = options or SolverOptions()
    fleet, n_users = scenario.fleet_size, scenario.n_users
    if fleet > 2 or n_users > 6 or resolution > 15:
        raise ValueError(
            f"exhaustive oracle limited to D<=2, U<=6, 15x15 grid "
            f"(got D={fleet}, U={n_users}, {resolution}x{resolution})"
        )
    width, height = scenario.area
    xs = np.linspace(0.0, width, resolution)
    ys = np.linspace(0.0, height, resolution)
    nodes = np.array([[x, y] for x in xs for y in ys])           # (P, 2)
    demand = scenario.demand_matrix(nodes)                       # (P, U)

    if fleet == 1:
        totals = demand.max(axis=1)
        best = int(np.argmin(totals))
        positions = nodes[best][None, :]
        association = Association(np.zeros(n_users, dtype=np.intp))
        total = float(totals[best])
    else:
        gap = nodes[:, None, :] - nodes[None, :, :]
        pair_ok = (gap * gap).sum(axis=2) >= scenario.params.d_min - 1e-9
        if options.enforce_separation and not pair_ok.any():
            raise ValueError("no lattice pair satisfies the separation floor")
        best_total = np.inf
        best_pair = (0, 0)
        best_mask = 0
        for mask in range(2**n_users):
            members = np.array([(mask >> j) & 1 for j in range(n_users)], dtype=bool)
            p_first = demand[:, members].max(axis=1) if members.any() else np.zeros(len(nodes))
            p_second = demand[:, ~members].max(axis=1) if (~members).any() else np.zeros(len(nodes))
            totals = p_first[:, None] + p_second[None, :]
            if options.enforce_separation:
                totals = np.where(pair_ok, totals, np.inf)
            flat = int(np.argmin(totals))
            value = totals.flat[flat]
            if value < best_total:
                best_total = float(value)
                best_pair = np.unravel_index(flat, totals.shape)
                best_mask = mask
        positions = nodes[list(best_pair)]
        assign = np.where(
            [(best_mask >> j) & 1 for j in range(n_users)], 0, 1
        ).astype(np.intp)
        association = Association(assign)
        total = best_total

    powers = scenario.uav_powers(positions, association)
    return DeploymentSolution(
        poses=poses_from(positions, powers, scenario.params),
        association=association,
        total_power=total,
        trace=[total],
        dual=DualState.fresh(fleet, n_users, options),
        converged=True,
        iterations=0,
    )
