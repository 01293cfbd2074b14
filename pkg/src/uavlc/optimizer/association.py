"""User-to-UAV assignment at fixed poses minimizing total max-rule power.

The priced sweep of the dual iteration assigns every user to the UAV
minimizing its multiplier-priced demand, recovers per-UAV powers by the max
rule, and steps the multipliers on their constraint violations.  Those
dynamics track per-user prices, but the objective — the sum over UAVs of
their most expensive assigned user — often wants several users concentrated
on an already-loaded UAV, which no per-user price expresses; the sweeps
alone routinely stall a double-digit percentage above the optimum.

The solver therefore refines the sweep result.  Per-UAV optimal powers are
always drawn from that UAV's own demand column (or zero), so on small
instances an exact search over threshold tuples recovers the true optimum;
on larger instances a deterministic descent over single-user moves, user
swaps, and exact two-UAV resplits polishes the best sweep iterate.
"""

from __future__ import annotations

import numpy as np

from .scenario import Association, DualState, Scenario, SolverOptions

# exact threshold search is used while (U+1)^(D-1) stays below this
_EXACT_BUDGET = 200_000


def _uav_powers_of(demand: np.ndarray, assign: np.ndarray) -> np.ndarray:
    fleet = demand.shape[0]
    powers = np.zeros(fleet)
    for i in range(fleet):
        mask = assign == i
        if mask.any():
            powers[i] = demand[i, mask].max()
    return powers


def _priced_sweeps(demand: np.ndarray, dual: DualState, options: SolverOptions):
    """Dual-priced assignment iteration; returns the best visited assignment.

    Multiplying the priced demand by c_j > 0 leaves each per-user argmin
    unchanged, so pricing the power demand c_j d^(m+3) is equivalent to
    pricing d^(m+3) alone.  Steps are taken on demands normalized by their
    largest entry, making the configured step size dimensionless.  Stops
    when the assignment survives ``stability_window`` consecutive sweeps.
    ``dual.mu`` is updated in place.
    """
    fleet, n_users = demand.shape
    norm_demand = demand / demand.max()
    mu = dual.mu
    if not mu.any():
        mu[:] = 1.0 / n_users

    cols = np.arange(n_users)
    best_obj = np.inf
    best_assign = None
    prev = None
    stable = 0
    for t in range(1, options.inner_cap + 1):
        assign = np.argmin(mu * norm_demand, axis=0)             # ties: lowest index
        served = np.zeros_like(norm_demand)
        served[assign, cols] = norm_demand[assign, cols]
        powers = served.max(axis=1)
        obj = powers.sum()
        if obj < best_obj - 1e-15:
            best_obj = obj
            best_assign = assign.copy()

        step = dual.step_delta / np.sqrt(t)
        mu[:] = np.maximum(mu + step * (served - powers[:, None]), 0.0)
        row_sums = mu.sum(axis=1)
        over = row_sums > 1.0
        if over.any():
            mu[over] /= row_sums[over, None]

        if prev is not None and np.array_equal(assign, prev):
            stable += 1
        else:
            stable = 1
        prev = assign
        if stable >= options.stability_window:
            break
    return best_assign


def _exact_thresholds(demand: np.ndarray) -> np.ndarray:
    """Exact optimal assignment via per-UAV power-threshold enumeration.

    In any assignment each UAV's power equals its largest assigned demand,
    i.e. one of its own column values (or zero when unserved).  Coverage of
    every user by some UAV with threshold at or above their demand is then
    necessary and sufficient, so minimizing the threshold sum over tuples
    is exact.  Only the first D-1 thresholds are enumerated; the last UAV's
    must cover whatever remains, which pins it to the uncovered maximum.
    """
    fleet, n_users = demand.shape
    if fleet == 1:
        return np.zeros(n_users, dtype=np.intp)
    choices = [np.unique(np.concatenate(([0.0], demand[i]))) for i in range(fleet - 1)]
    covers = [demand[i][None, :] <= choices[i][:, None] for i in range(fleet - 1)]

    best_total = np.inf
    best_thresholds = None
    indices = np.zeros(fleet - 1, dtype=np.intp)
    while True:
        covered = np.zeros(n_users, dtype=bool)
        partial = 0.0
        for i in range(fleet - 1):
            covered |= covers[i][indices[i]]
            partial += choices[i][indices[i]]
        last = demand[-1][~covered].max() if (~covered).any() else 0.0
        total = partial + last
        if total < best_total - 1e-15:
            best_total = total
            best_thresholds = np.array(
                [choices[i][indices[i]] for i in range(fleet - 1)] + [last]
            )
        # odometer increment over the threshold choices
        for pos in range(fleet - 2, -1, -1):
            indices[pos] += 1
            if indices[pos] < len(choices[pos]):
                break
            indices[pos] = 0
        else:
            break

    # lowest covering UAV; coverage is guaranteed by construction
    ok = demand <= best_thresholds[:, None] + 1e-300
    return np.argmax(ok, axis=0).astype(np.intp)


def _exact_cost(demand: np.ndarray) -> float:
    fleet, n_users = demand.shape
    size = (n_users + 1) ** (fleet - 1)
    return size * fleet * n_users


def _resplit_pair(wi: np.ndarray, wk: np.ndarray):
    """Optimal 2-UAV split of one shared user pool (threshold enumeration)."""
    best_value, best_mask = np.inf, None
    for thr in np.concatenate(([0.0], wi)):
        to_i = wi <= thr
        p_i = wi[to_i].max() if to_i.any() else 0.0
        p_k = wk[~to_i].max() if (~to_i).any() else 0.0
        if p_i + p_k < best_value - 1e-15:
            best_value, best_mask = p_i + p_k, to_i
    return best_value, best_mask


def _polish(demand: np.ndarray, assign: np.ndarray, passes: int = 200) -> np.ndarray:
    """Deterministic descent: steepest single moves, swaps, pair resplits."""
    fleet, n_users = demand.shape
    assign = assign.copy()
    total = _uav_powers_of(demand, assign).sum()
    for _ in range(passes):
        best_gain, best_assign = 1e-12, None

        for j in range(n_users):
            src = assign[j]
            for i in range(fleet):
                if i == src:
                    continue
                trial = assign.copy()
                trial[j] = i
                gain = total - _uav_powers_of(demand, trial).sum()
                if gain > best_gain:
                    best_gain, best_assign = gain, trial

        for j1 in range(n_users):
            for j2 in range(j1 + 1, n_users):
                if assign[j1] == assign[j2]:
                    continue
                trial = assign.copy()
                trial[j1], trial[j2] = trial[j2], trial[j1]
                gain = total - _uav_powers_of(demand, trial).sum()
                if gain > best_gain:
                    best_gain, best_assign = gain, trial

        for i in range(fleet):
            for k in range(i + 1, fleet):
                members = np.where((assign == i) | (assign == k))[0]
                if len(members) == 0:
                    continue
                value, to_i = _resplit_pair(demand[i, members], demand[k, members])
                trial = assign.copy()
                trial[members[to_i]] = i
                trial[members[~to_i]] = k
                gain = total - _uav_powers_of(demand, trial).sum()
                if gain > best_gain:
                    best_gain, best_assign = gain, trial

        if best_assign is None:
            break
        assign = best_assign
        total -= best_gain
    return assign


def association_solve(
    scenario: Scenario,
    positions: np.ndarray,
    dual: DualState,
    options: SolverOptions,
) -> tuple:
    """Return (Association, per-UAV powers) minimizing total max-rule power."""
    demand = scenario.demand_matrix(positions)
    if demand.max() <= 0.0:
        raise ValueError("demand matrix is identically zero")

    swept = _priced_sweeps(demand, dual, options)
    if _exact_cost(demand) <= _EXACT_BUDGET:
        assign = _exact_thresholds(demand)
        if _uav_powers_of(demand, swept).sum() < _uav_powers_of(demand, assign).sum():
            assign = swept
    else:
        nearest = np.argmin(demand, axis=0)
        candidates = [_polish(demand, start) for start in (swept, nearest)]
        assign = min(candidates, key=lambda a: _uav_powers_of(demand, a).sum())

    association = Association(assign)
    return association, scenario.uav_powers(positions, association)
