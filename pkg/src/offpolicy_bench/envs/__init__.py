"""Goal-conditioned desk-scale task analogs plus exact tabular oracles."""

from .mdp import DiscreteMdp, bellman_backup, value_iteration
from .tasks import (
    CONTACT_RADIUS,
    EFFECTOR_SPEED,
    GRASP_OFFSET,
    GRASP_RADIUS,
    PICKPLACE,
    PUSH,
    REACH,
    SLIDE,
    SLIDE_REACH_RADIUS,
    TABLE_Z,
    TASKS,
    Box,
    EnvState,
    GoalObservation,
    TaskSpec,
    achieved_goal_of,
    default_task_spec,
    is_success,
    observe,
    reset,
    sparse_reward,
    step,
)
from .trajectory import format_step, read_trajectory, write_trajectory

__all__ = [
    "CONTACT_RADIUS",
    "EFFECTOR_SPEED",
    "GRASP_OFFSET",
    "GRASP_RADIUS",
    "PICKPLACE",
    "PUSH",
    "REACH",
    "SLIDE",
    "SLIDE_REACH_RADIUS",
    "TABLE_Z",
    "TASKS",
    "Box",
    "DiscreteMdp",
    "EnvState",
    "GoalObservation",
    "TaskSpec",
    "achieved_goal_of",
    "bellman_backup",
    "default_task_spec",
    "format_step",
    "is_success",
    "observe",
    "read_trajectory",
    "reset",
    "sparse_reward",
    "step",
    "value_iteration",
    "write_trajectory",
]
