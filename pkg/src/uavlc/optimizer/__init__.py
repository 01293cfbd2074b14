"""Minimum-power UAV deployment: placement, association, oracles, baselines."""

from .association import association_solve
from .deploy import (
    baseline_association_only,
    baseline_center,
    baseline_fixed_association,
    initial_association,
    initial_positions,
    optimize,
)
from .exhaustive import exhaustive_oracle
from .placement import (
    placement_subproblem,
    restore_separation,
    sca_placement,
    taylor_separation,
)
from .scenario import (
    Association,
    DeploymentSolution,
    DualState,
    InfeasibleScenarioError,
    Scenario,
    SolverOptions,
    poses_from,
)

__all__ = [
    "Association",
    "DeploymentSolution",
    "DualState",
    "InfeasibleScenarioError",
    "Scenario",
    "SolverOptions",
    "association_solve",
    "baseline_association_only",
    "baseline_center",
    "baseline_fixed_association",
    "exhaustive_oracle",
    "initial_association",
    "initial_positions",
    "optimize",
    "placement_subproblem",
    "poses_from",
    "restore_separation",
    "sca_placement",
    "taylor_separation",
]
