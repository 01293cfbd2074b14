"""UAV placement for a fixed association: dual inner loop inside an SCA loop.

The nonconvex pairwise-separation constraint is replaced by its first-order
Taylor lower bound around the previous iterate, the resulting convex
subproblem is solved by dual subgradient iteration in closed primal form,
and the outer loop re-linearizes at each new optimum.  A candidate round is
only accepted if it does not increase the true objective, so the returned
trace is non-increasing by construction.
"""

from __future__ import annotations

import numpy as np

from .scenario import Association, DualState, Scenario, SolverOptions


def taylor_separation(q_i, q_k, q_i_ref, q_k_ref) -> float:
    """Linear lower bound on ||q_i - q_k||^2 tight at the reference points."""
    q_i = np.asarray(q_i, dtype=np.float64)
    q_k = np.asarray(q_k, dtype=np.float64)
    d_ref = np.asarray(q_i_ref, dtype=np.float64) - np.asarray(q_k_ref, dtype=np.float64)
    return float(-d_ref @ d_ref + 2.0 * d_ref @ (q_i - q_k))


def _pair_bounds(positions: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """(D, D) matrix of Taylor separation bounds for all ordered pairs."""
    d_ref = reference[:, None, :] - reference[None, :, :]        # (D, D, 2)
    d_cur = positions[:, None, :] - positions[None, :, :]
    return -(d_ref * d_ref).sum(axis=2) + 2.0 * (d_ref * d_cur).sum(axis=2)


def placement_subproblem(
    scenario: Scenario,
    association: Association,
    reference: np.ndarray,
    dual: DualState,
    options: SolverOptions,
) -> np.ndarray:
    """Solve the linearized placement problem by dual subgradient ascent.

    Primal variables have closed forms at fixed multipliers: the power from
    the demand-multiplier sum, the position as the demand-weighted user
    centroid plus separation repulsion along reference directions.  The
    multipliers then take a projected subgradient step on their constraint
    violations with a diminishing step; the loop stops once the largest
    multiplier change falls below ``options.epsilon``.

    UAVs with no assigned user stay at their reference position (their
    subproblem is empty) but still repel others through the separation
    multipliers.  ``dual`` is updated in place.  Returns (D, 2) positions.
    """
    reference = np.asarray(reference, dtype=np.float64)
    fleet, n_users = scenario.fleet_size, scenario.n_users
    exponent = scenario.exponent
    a_j = scenario.coeffs ** (2.0 / exponent)                    # (U,)
    h_sq = scenario.params.altitude**2
    d_min = scenario.params.d_min

    assigned = np.zeros((fleet, n_users), dtype=bool)
    assigned[association.assign, np.arange(n_users)] = True
    active = assigned.any(axis=1)

    separate = options.enforce_separation and fleet > 1
    l_alpha, l_beta = dual.lambda_alpha, dual.lambda_beta
    positions = reference.copy()

    for t in range(1, options.inner_cap + 1):
        # primal: positions from stationarity (guarded while duals are cold)
        weights = l_alpha * assigned * a_j[None, :]              # (D, U)
        denom = weights.sum(axis=1)
        pull = weights @ scenario.user_xy                        # (D, 2)
        if separate:
            repel = np.einsum(
                "ik,ikc->ic", l_beta, reference[:, None, :] - reference[None, :, :]
            )
        else:
            repel = 0.0
        movable = active & (denom > 0.0)
        positions[movable] = (pull[movable] + (repel[movable] if separate else 0.0)) \
            / denom[movable, None]
        positions[~movable] = reference[~movable]

        # primal: power from the demand-multiplier sum
        lam_sum = (l_alpha * assigned).sum(axis=1)
        p_norm = (2.0 / exponent) * lam_sum                      # P^((m+1)/(m+3))
        p_curve = p_norm ** (2.0 / (exponent - 2.0))             # P^(2/(m+3))

        # dual: projected subgradient with diminishing step
        step = dual.step_gamma / np.sqrt(t)
        diff = positions[:, None, :] - scenario.user_xy[None, :, :]
        d_sq = (diff * diff).sum(axis=2) + h_sq
        viol_alpha = (a_j[None, :] * d_sq - p_curve[:, None]) * assigned
        new_alpha = np.maximum(l_alpha + step * viol_alpha, 0.0)

        if separate:
            viol_beta = d_min - _pair_bounds(positions, reference)
            np.fill_diagonal(viol_beta, 0.0)
            viol_beta = 0.5 * (viol_beta + viol_beta.T)          # keep symmetric
            new_beta = np.maximum(l_beta + step * viol_beta, 0.0)
            residual = max(
                np.abs(new_alpha - l_alpha).max(), np.abs(new_beta - l_beta).max()
            )
            l_beta[:] = new_beta
        else:
            residual = np.abs(new_alpha - l_alpha).max()
        l_alpha[:] = new_alpha

        if not np.isfinite(positions).all():
            raise FloatingPointError("placement subproblem produced non-finite iterate")
        if residual < options.epsilon:
            break
    return positions


def restore_separation(
    positions: np.ndarray,
    frozen: np.ndarray,
    d_min: float,
    tol: float = 1e-9,
    sweeps: int = 200,
) -> np.ndarray:
    """Push pairs below the separation floor apart; frozen UAVs do not move.

    The dual treatment of the linearized constraint is only approximate, so
    a returned iterate can sit slightly inside the forbidden radius.  Each
    sweep moves violating pairs to exactly the floor distance along their
    connecting line (the full correction applied to the movable side when
    the other is frozen).  Coincident pairs separate along a deterministic
    index-derived direction.
    """
    positions = positions.copy()
    n = positions.shape[0]
    target = np.sqrt(d_min)
    for _ in range(sweeps):
        worst = 0.0
        for i in range(n):
            for k in range(i + 1, n):
                if frozen[i] and frozen[k]:
                    continue
                gap = positions[i] - positions[k]
                dist = float(np.hypot(gap[0], gap[1]))
                if dist * dist >= d_min - tol:
                    continue
                worst = max(worst, d_min - dist * dist)
                if dist > 0.0:
                    direction = gap / dist
                else:
                    angle = 2.399963229728653 * (i * n + k)      # golden angle
                    direction = np.array([np.cos(angle), np.sin(angle)])
                push = target * (1.0 + 1e-9) - dist
                if frozen[i]:
                    positions[k] -= direction * push
                elif frozen[k]:
                    positions[i] += direction * push
                else:
                    positions[i] += direction * (push / 2.0)
                    positions[k] -= direction * (push / 2.0)
        if worst == 0.0:
            break
    return positions


def sca_placement(
    scenario: Scenario,
    association: Association,
    positions: np.ndarray,
    options: SolverOptions,
    dual: DualState | None = None,
) -> tuple:
    """Successive convex approximation around the latest accepted iterate.

    Returns (positions, trace) where ``trace`` starts at the objective of
    the given poses and appends one value per accepted round; it is
    non-increasing by construction because candidate rounds that would
    increase the true (max-rule) objective terminate the loop instead.
    ``dual`` is warm-started across rounds and updated in place when given.
    """
    positions = np.asarray(positions, dtype=np.float64).copy()
    if dual is None:
        dual = DualState.fresh(scenario.fleet_size, scenario.n_users, options)
    assigned = np.zeros(scenario.fleet_size, dtype=bool)
    assigned[np.unique(association.assign)] = True

    obj = scenario.total_power(positions, association)
    trace = [obj]
    for _ in range(options.sca_cap):
        candidate = placement_subproblem(scenario, association, positions, dual, options)
        if options.enforce_separation and scenario.fleet_size > 1:
            candidate = restore_separation(candidate, ~assigned, scenario.params.d_min)
        cand_obj = scenario.total_power(candidate, association)
        if cand_obj > obj + 1e-12:
            break
        improved = obj - cand_obj
        positions, obj = candidate, cand_obj
        trace.append(obj)
        if improved <= options.sca_tol * max(obj, 1e-300):
            break
    return positions, trace
