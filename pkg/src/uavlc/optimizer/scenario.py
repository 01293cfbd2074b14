"""Deployment problem container: users, fleet, area, grid, demand weights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import UavPose, User, VlcParams, demand_coefficient, power_exponent
from ..grids import IlluminationGrid, sample


class InfeasibleScenarioError(ValueError):
    """The instance cannot satisfy its own constraints (e.g. separation)."""


@dataclass
class SolverOptions:
    """Step sizes, tolerances and iteration caps for the deployment solver."""

    gamma: float = 0.01          # placement dual step scale
    delta: float = 0.01          # association dual step scale
    epsilon: float = 1e-4        # inner dual-residual stop
    inner_cap: int = 10_000      # dual iterations per placement subproblem
    sca_cap: int = 200           # successive-convex-approximation rounds
    outer_cap: int = 50          # placement/association alternations
    stability_window: int = 5    # unchanged associations required to stop
    sca_tol: float = 1e-6        # relative objective stop, SCA rounds
    outer_tol: float = 1e-6      # relative objective stop, outer loop
    enforce_separation: bool = True
    seed: int = 0                # initial-association seeding
    n_starts: int = 4            # alternation restarts from distinct partitions


@dataclass
class Association:
    """Per-user serving-UAV index (integral assignment)."""

    assign: np.ndarray

    def __post_init__(self):
        self.assign = np.asarray(self.assign, dtype=np.intp)

    def copy(self) -> "Association":
        return Association(self.assign.copy())


@dataclass
class DualState:
    """Multipliers of the placement and association subproblems."""

    lambda_alpha: np.ndarray   # (D, U) power-demand multipliers
    lambda_beta: np.ndarray    # (D, D) symmetric separation multipliers
    mu: np.ndarray             # (D, U) association multipliers, row sums <= 1
    step_gamma: float
    step_delta: float

    @classmethod
    def fresh(cls, fleet_size: int, n_users: int, options: SolverOptions) -> "DualState":
        """Zero placement multipliers; uniform association multipliers.

        Starting mu at exactly zero makes every argmin in the association
        rule a full tie, which resolves to UAV 1 and then never moves (all
        subgradient increments are <= 0), so mu rows start uniform at 1/U
        instead — the first sweep is then plain nearest-UAV assignment.
        """
        return cls(
            lambda_alpha=np.zeros((fleet_size, n_users)),
            lambda_beta=np.zeros((fleet_size, fleet_size)),
            mu=np.full((fleet_size, n_users), 1.0 / max(n_users, 1)),
            step_gamma=options.gamma,
            step_delta=options.delta,
        )


@dataclass
class Scenario:
    """One planning instance: who needs service, with what light in force."""

    users: list
    fleet_size: int
    area: tuple
    params: VlcParams
    grid: IlluminationGrid

    def __post_init__(self):
        if self.fleet_size < 1:
            raise ValueError("fleet_size must be >= 1")
        if not self.users:
            raise ValueError("need at least one user")
        w, h = self.area
        for u in self.users:
            if not (0.0 <= u.x <= w and 0.0 <= u.y <= h):
                raise ValueError(f"user at ({u.x}, {u.y}) outside {w}x{h} area")
        # demand weights: c_j from the sampled ambient light at each user
        self._xy = np.array([[u.x, u.y] for u in self.users], dtype=np.float64)
        self._ambient = np.array([sample(self.grid, u.x, u.y) for u in self.users])
        self._coeffs = np.array([
            demand_coefficient(u, i_j, self.params)
            for u, i_j in zip(self.users, self._ambient)
        ])

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def user_xy(self) -> np.ndarray:
        """(U, 2) user ground positions."""
        return self._xy

    @property
    def ambient(self) -> np.ndarray:
        """(U,) grid sample at each user."""
        return self._ambient

    @property
    def coeffs(self) -> np.ndarray:
        """(U,) demand coefficients c_j (power = c_j * d^(m+3))."""
        return self._coeffs

    @property
    def exponent(self) -> float:
        """Distance exponent m + 3 of the per-user power demand."""
        return power_exponent(self.params)

    def demand_matrix(self, positions: np.ndarray) -> np.ndarray:
        """(D, U) per-user required power c_j * d_ij^(m+3) from ``positions``.

        ``positions`` is (D, 2) horizontal UAV coordinates; all UAVs fly at
        the common altitude of ``params``.
        """
        positions = np.asarray(positions, dtype=np.float64)
        diff = positions[:, None, :] - self._xy[None, :, :]
        d_sq = (diff * diff).sum(axis=2) + self.params.altitude**2
        return self._coeffs[None, :] * d_sq ** (self.exponent / 2.0)

    def uav_powers(self, positions: np.ndarray, association: Association) -> np.ndarray:
        """Feasible per-UAV powers: max assigned demand, 0 when unserved."""
        demand = self.demand_matrix(positions)
        powers = np.zeros(self.fleet_size)
        for i in range(self.fleet_size):
            mask = association.assign == i
            if mask.any():
                powers[i] = demand[i, mask].max()
        return powers

    def total_power(self, positions: np.ndarray, association: Association) -> float:
        return float(self.uav_powers(positions, association).sum())

    def check_capacity(self) -> None:
        """Cheap necessary condition that D separated UAVs can fit the area.

        Packing D disks of radius sqrt(d_min)/2 (centres pairwise at least
        sqrt(d_min) apart) requires area at least D * pi * d_min / 4 inside
        the region grown by the radius on each side.
        """
        if self.fleet_size == 1:
            return
        w, h = self.area
        r = np.sqrt(self.params.d_min) / 2.0
        if self.fleet_size * np.pi * r * r > (w + 2 * r) * (h + 2 * r):
            raise InfeasibleScenarioError(
                f"{self.fleet_size} UAVs with squared separation "
                f"{self.params.d_min} cannot fit a {w}x{h} area"
            )


@dataclass
class DeploymentSolution:
    """Final poses/powers, the association that produced them, and the trace."""

    poses: list
    association: Association
    total_power: float
    trace: list
    dual: DualState
    converged: bool
    iterations: int

    @property
    def positions(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.poses])

    @property
    def powers(self) -> np.ndarray:
        return np.array([p.power for p in self.poses])


def poses_from(positions: np.ndarray, powers: np.ndarray, params: VlcParams) -> list:
    return [
        UavPose(x=float(x), y=float(y), altitude=params.altitude, power=float(p))
        for (x, y), p in zip(positions, powers)
    ]
